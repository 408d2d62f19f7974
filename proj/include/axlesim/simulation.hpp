#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "axlesim/road.hpp"
#include "axlesim/sdpi.hpp"
#include "axlesim/vehicle.hpp"

namespace axlesim {

struct SimConfig {
    double speed = 10.0;      // m/s
    double duration = 20.0;   // s
    double time_step = 1e-3;  // s
    double warmup = 2.0;      // s, excluded from metrics
    double gravity = kStandardGravity;

    void validate() const;
    std::size_t step_count() const;
};

/// Sampled trajectory of every degree of freedom plus derived per-axle channels.
/// Per-axle channels are indexed [axle][sample].
struct SimResponse {
    std::vector<double> time;
    std::vector<double> z_s;
    std::vector<double> theta;
    std::vector<std::vector<double>> z_us;

    std::vector<double> z_s_rate;
    std::vector<double> theta_rate;
    std::vector<std::vector<double>> z_us_rate;

    std::vector<double> z_s_accel;
    std::vector<double> theta_accel;

    std::vector<std::vector<double>> deflection; // z_s - l_i theta - z_us(i)
    std::vector<std::vector<double>> tire_load;  // k_t(i) (z_r(i) - z_us(i)), positive in compression
    std::vector<std::vector<double>> road_input; // z_r(i)

    std::size_t axle_count() const noexcept { return z_us.size(); }
    std::size_t samples() const noexcept { return time.size(); }
};

/// Front-axle-relative road position of axle `axle` at time `t`.
/// Rear axles replay the front track delayed by (l_1 - l_i) / v.
double axle_road_position(const VehicleParams& params, std::size_t axle, double speed, double t);

/// Road elevation under an axle; positions before the profile start read as zero.
double axle_road_height(const VehicleParams& params, const RoadProfile& profile, std::size_t axle,
                        double speed, double t);

/// Fixed-step RK4 traversal from static equilibrium (zero state).
/// Throws DivergenceError when any state magnitude exceeds 1e6.
SimResponse simulate(const VehicleParams& params, const RoadProfile& profile, const SimConfig& cfg);

/// Metrics over the samples with t > warmup.
MetricVector response_metrics(const SimResponse& response, const SimConfig& cfg);

/// 1/2 v'Mv + 1/2 z'Kz at every sample.
std::vector<double> mechanical_energy(const VehicleParams& params, const SimResponse& response);

/// One column per channel, header row as name[unit].
void write_response_csv(std::ostream& out, const SimResponse& response);

} // namespace axlesim
