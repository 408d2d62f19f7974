#include <gtest/gtest.h>

#include "axlesim/errors.hpp"
#include "axlesim/regression_metrics.hpp"

using namespace axlesim;

namespace {

std::vector<TargetVector> column(std::initializer_list<double> values)
{
    std::vector<TargetVector> out;
    for (double v : values) {
        TargetVector t;
        t.fill(v);
        out.push_back(t);
    }
    return out;
}

} // namespace

TEST(RegressionMetrics, PerfectPredictor)
{
    const auto y = column({1.0, 2.0, 4.0, 8.0});
    const auto r = regression_metrics(y, y);
    EXPECT_EQ(r.mape_average, 0.0);
    for (double v : r.r2) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(RegressionMetrics, HandComputedThreePoints)
{
    const auto r = regression_metrics(column({1.0, 2.0, 4.0}), column({1.0, 2.0, 3.0}));
    EXPECT_NEAR(r.mape[0], 0.25 / 3.0, 1e-15);
    EXPECT_NEAR(r.mape_average, 0.25 / 3.0, 1e-15);
    // SS_tot = (1-7/3)^2 + (2-7/3)^2 + (4-7/3)^2 = 42/9; SS_res = 1
    EXPECT_NEAR(r.r2[0], 1.0 - 9.0 / 42.0, 1e-15);
    EXPECT_EQ(r.rows, 3u);
}

TEST(RegressionMetrics, MeanPredictorScoresZero)
{
    const auto y = column({1.0, 2.0, 6.0});
    const auto r = regression_metrics(y, column({3.0, 3.0, 3.0}));
    EXPECT_NEAR(r.r2[3], 0.0, 1e-15);
}

TEST(RegressionMetrics, ZeroTargetsAreExcludedFromMape)
{
    auto y = column({1.0, 2.0, 4.0});
    y[1][2] = 0.0;
    const auto p = column({1.1, 2.0, 4.0});
    const auto r = regression_metrics(y, p);
    EXPECT_EQ(r.excluded_from_mape, 1u);
    EXPECT_NEAR(r.mape[0], 0.05, 1e-15); // (0.1 + 0) / 2 rows kept
}

TEST(RegressionMetrics, Errors)
{
    EXPECT_THROW(regression_metrics({}, {}), ValidationError);
    EXPECT_THROW(regression_metrics(column({1.0, 1.0}), column({1.0, 2.0})), NumericalError);
    EXPECT_THROW(regression_metrics(column({1.0, 2.0}), column({1.0})), ValidationError);
}
