#pragma once

#include <vector>

namespace axlesim {

/// Scalar performance quantities of one traversal.
///
/// The per-axle vectors are informational; only the sums enter the index.
struct MetricVector {
    double a_rms = 0.0;          // m/s^2, RMS sprung-mass acceleration
    double theta_ddot_rms = 0.0; // rad/s^2
    double theta_rms = 0.0;      // rad
    double sws_max_sum = 0.0;    // m, sum over axles of max |deflection|
    double dtl_rms_sum = 0.0;    // N, sum over axles of RMS dynamic tire load
    std::vector<double> sws_max;
    std::vector<double> dtl_rms;
};

/// Component weights of the index. The defaults are the published ones and
/// sum to one, which pins sdpi(x, x) = 1.
struct SdpiWeights {
    double group_body = 0.33;
    double accel = 0.6;
    double pitch_accel = 0.2;
    double pitch = 0.2;
    double working_space = 0.01;
    double tire_load = 0.66;
};

/// Suspension dynamic performance index of `candidate` relative to `baseline`.
/// Lower is better; the baseline itself scores exactly 1.
/// Throws NumericalError when any baseline component is not strictly positive.
double sdpi(const MetricVector& candidate, const MetricVector& baseline);

/// Same index with caller-chosen weights.
double sdpi_weighted(const MetricVector& candidate, const MetricVector& baseline,
                     const SdpiWeights& weights);

} // namespace axlesim
