#include "axlesim/sdpi.hpp"

#include <cmath>
#include <string>

#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

double ratio(double value, double reference, const char* name)
{
    if (!(reference > 0.0) || !std::isfinite(reference)) {
        throw NumericalError(std::string("degenerate SDPI baseline: ") + name +
                             " must be strictly positive");
    }
    return value / reference;
}

} // namespace

double sdpi_weighted(const MetricVector& candidate, const MetricVector& baseline,
                     const SdpiWeights& w)
{
    const double accel = ratio(candidate.a_rms, baseline.a_rms, "a_rms");
    const double pitch_accel = ratio(candidate.theta_ddot_rms, baseline.theta_ddot_rms, "theta_ddot_rms");
    const double pitch = ratio(candidate.theta_rms, baseline.theta_rms, "theta_rms");
    const double sws = ratio(candidate.sws_max_sum, baseline.sws_max_sum, "sws_max_sum");
    const double dtl = ratio(candidate.dtl_rms_sum, baseline.dtl_rms_sum, "dtl_rms_sum");

    return w.group_body * (w.accel * accel + w.pitch_accel * pitch_accel + w.pitch * pitch) +
           w.working_space * sws + w.tire_load * dtl;
}

double sdpi(const MetricVector& candidate, const MetricVector& baseline)
{
    return sdpi_weighted(candidate, baseline, SdpiWeights{});
}

} // namespace axlesim
