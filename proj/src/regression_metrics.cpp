#include "axlesim/regression_metrics.hpp"

#include <cmath>
#include <string>

#include "axlesim/errors.hpp"

namespace axlesim {

RegressionReport regression_metrics(std::span<const TargetVector> truth, std::span<const TargetVector> predicted)
{
    if (truth.empty()) {
        throw ValidationError("regression metrics need at least one row");
    }
    if (truth.size() != predicted.size()) {
        throw ValidationError("truth and prediction counts differ");
    }

    RegressionReport report;
    report.rows = truth.size();

    TargetVector abs_pct{};
    std::size_t mape_rows = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        bool has_zero = false;
        for (double v : truth[i]) {
            has_zero = has_zero || v == 0.0;
        }
        if (has_zero) {
            ++report.excluded_from_mape;
            continue;
        }
        ++mape_rows;
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            abs_pct[t] += std::abs(predicted[i][t] - truth[i][t]) / std::abs(truth[i][t]);
        }
    }

    for (std::size_t t = 0; t < kTargetSize; ++t) {
        report.mape[t] = mape_rows > 0 ? abs_pct[t] / static_cast<double>(mape_rows) : 0.0;
        report.mape_average += report.mape[t];

        double mean = 0.0;
        for (const auto& row : truth) {
            mean += row[t];
        }
        mean /= static_cast<double>(truth.size());
        double ss_tot = 0.0;
        double ss_res = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            ss_tot += (truth[i][t] - mean) * (truth[i][t] - mean);
            ss_res += (truth[i][t] - predicted[i][t]) * (truth[i][t] - predicted[i][t]);
        }
        if (ss_tot == 0.0) {
            throw NumericalError("R^2 undefined for task " + std::string(kTargetNames[t]) +
                                 ": true values are constant");
        }
        report.r2[t] = 1.0 - ss_res / ss_tot;
    }
    report.mape_average /= static_cast<double>(kTargetSize);
    return report;
}

} // namespace axlesim
