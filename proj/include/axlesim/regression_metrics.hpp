#pragma once

#include <cstddef>
#include <span>

#include "axlesim/dataset.hpp"

namespace axlesim {

struct RegressionReport {
    TargetVector mape{};   // fraction, per task
    double mape_average = 0.0;
    TargetVector r2{};
    std::size_t rows = 0;
    std::size_t excluded_from_mape = 0; // rows with a zero true target
};

/// MAPE = mean |pred - true| / |true| and R^2 = 1 - SS_res / SS_tot per task.
/// Throws ValidationError on empty input and NumericalError when a task's true
/// values are constant (R^2 undefined).
RegressionReport regression_metrics(std::span<const TargetVector> truth, std::span<const TargetVector> predicted);

} // namespace axlesim
