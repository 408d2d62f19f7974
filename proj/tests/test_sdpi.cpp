#include <random>

#include <gtest/gtest.h>

#include "axlesim/errors.hpp"
#include "axlesim/sdpi.hpp"

using namespace axlesim;

namespace {

MetricVector metrics(double a, double tdd, double t, double sws, double dtl)
{
    MetricVector m;
    m.a_rms = a;
    m.theta_ddot_rms = tdd;
    m.theta_rms = t;
    m.sws_max_sum = sws;
    m.dtl_rms_sum = dtl;
    return m;
}

// Component weights written out flat: 0.33 * (0.6, 0.2, 0.2), 0.01, 0.66.
double flat_oracle(const MetricVector& c, const MetricVector& b)
{
    return 0.198 * c.a_rms / b.a_rms + 0.066 * c.theta_ddot_rms / b.theta_ddot_rms +
           0.066 * c.theta_rms / b.theta_rms + 0.01 * c.sws_max_sum / b.sws_max_sum +
           0.66 * c.dtl_rms_sum / b.dtl_rms_sum;
}

} // namespace

TEST(Sdpi, BaselineScoresOne)
{
    const MetricVector b = metrics(0.3, 0.05, 0.004, 0.08, 9000.0);
    EXPECT_DOUBLE_EQ(sdpi(b, b), 1.0);
}

TEST(Sdpi, SelfScoreIsOneForRandomVectors)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1e-6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const MetricVector x = metrics(u(rng), u(rng), u(rng), u(rng), u(rng));
        ASSERT_NEAR(sdpi(x, x), 1.0, 1e-15);
    }
}

TEST(Sdpi, HomogeneousInCommonRatio)
{
    const MetricVector b = metrics(0.3, 0.05, 0.004, 0.08, 9000.0);
    const MetricVector c = metrics(0.6, 0.1, 0.008, 0.16, 18000.0);
    EXPECT_NEAR(sdpi(c, b), 2.0, 1e-15);
}

TEST(Sdpi, HalvedTireLoad)
{
    const MetricVector b = metrics(0.3, 0.05, 0.004, 0.08, 9000.0);
    MetricVector c = b;
    c.dtl_rms_sum = 4500.0;
    EXPECT_NEAR(sdpi(c, b), 0.67, 1e-15);
}

TEST(Sdpi, MatchesFlatWeights)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const MetricVector b = metrics(u(rng), u(rng), u(rng), u(rng), u(rng));
        const MetricVector c = metrics(u(rng), u(rng), u(rng), u(rng), u(rng));
        ASSERT_NEAR(sdpi(c, b), flat_oracle(c, b), 1e-13);
    }
}

TEST(Sdpi, TireLoadSlopeAndMonotonicity)
{
    const MetricVector b = metrics(1.0, 1.0, 1.0, 1.0, 1.0);
    MetricVector c = b;
    c.dtl_rms_sum = 1.5;
    EXPECT_NEAR((sdpi(c, b) - 1.0) / 0.5, 0.66, 1e-14);

    double MetricVector::*fields[] = {&MetricVector::a_rms, &MetricVector::theta_ddot_rms, &MetricVector::theta_rms,
                                      &MetricVector::sws_max_sum, &MetricVector::dtl_rms_sum};
    for (auto f : fields) {
        MetricVector up = b;
        up.*f = 1.01;
        EXPECT_GT(sdpi(up, b), 1.0);
    }
}

TEST(Sdpi, DegenerateBaselineIsRejected)
{
    const MetricVector c = metrics(1, 1, 1, 1, 1);
    EXPECT_THROW(sdpi(c, MetricVector{}), NumericalError);
    EXPECT_THROW(sdpi(c, metrics(1, 1, 1, 0, 1)), NumericalError);
}

TEST(Sdpi, CustomWeights)
{
    const MetricVector b = metrics(1, 1, 1, 1, 1);
    const MetricVector c = metrics(2, 1, 1, 1, 1);
    SdpiWeights w;
    w.group_body = 1.0;
    w.accel = 1.0;
    w.pitch_accel = w.pitch = w.working_space = w.tire_load = 0.0;
    EXPECT_DOUBLE_EQ(sdpi_weighted(c, b, w), 2.0);
}
