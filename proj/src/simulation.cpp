#include "axlesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"

namespace axlesim {

void SimConfig::validate() const
{
    if (!(time_step > 0.0)) {
        throw ValidationError("sim time_step must be positive");
    }
    if (!(speed > 0.0)) {
        throw ValidationError("sim speed must be positive");
    }
    if (!(warmup >= 0.0)) {
        throw ValidationError("sim warmup must be non-negative");
    }
    if (!(duration > warmup)) {
        throw ValidationError("sim duration must exceed warmup");
    }
    if (!(gravity > 0.0)) {
        throw ValidationError("sim gravity must be positive");
    }
}

std::size_t SimConfig::step_count() const
{
    return static_cast<std::size_t>(std::llround(duration / time_step));
}

double axle_road_position(const VehicleParams& params, std::size_t axle, double speed, double t)
{
    return speed * t - (params.axle_offsets.front() - params.axle_offsets[axle]);
}

double axle_road_height(const VehicleParams& params, const RoadProfile& profile, std::size_t axle,
                        double speed, double t)
{
    const double x = axle_road_position(params, axle, speed, t);
    return x < 0.0 ? 0.0 : profile.height_at(x);
}

namespace {

constexpr double kDivergenceBound = 1e6;

// First-order form of M z'' + C z' + K z = F with dense row-major storage.
class FirstOrderSystem {
public:
    explicit FirstOrderSystem(const VehicleParams& params)
        : dof_(params.dof()), tire_(params.tire_stiffnesses)
    {
        const SystemMatrices sys = assemble_matrices(params);
        inv_mass_.resize(dof_);
        damping_.resize(dof_ * dof_);
        stiffness_.resize(dof_ * dof_);
        for (std::size_t r = 0; r < dof_; ++r) {
            inv_mass_[r] = 1.0 / sys.mass(r, r);
            for (std::size_t c = 0; c < dof_; ++c) {
                damping_[r * dof_ + c] = sys.damping(r, c);
                stiffness_[r * dof_ + c] = sys.stiffness(r, c);
            }
        }
    }

    std::size_t dof() const noexcept { return dof_; }

    // Writes z'' for state (z, v) under road heights `road`.
    void acceleration(const double* z, const double* v, const double* road, double* out) const
    {
        for (std::size_t r = 0; r < dof_; ++r) {
            double f = r >= 2 ? road[r - 2] * tire_[r - 2] : 0.0;
            const double* crow = &damping_[r * dof_];
            const double* krow = &stiffness_[r * dof_];
            for (std::size_t c = 0; c < dof_; ++c) {
                f -= crow[c] * v[c] + krow[c] * z[c];
            }
            out[r] = f * inv_mass_[r];
        }
    }

    // state = [z; v], deriv = [v; z''].
    void derivative(const std::vector<double>& state, const std::vector<double>& road,
                    std::vector<double>& deriv) const
    {
        std::copy(state.begin() + static_cast<std::ptrdiff_t>(dof_), state.end(), deriv.begin());
        acceleration(state.data(), state.data() + dof_, road.data(), deriv.data() + dof_);
    }

private:
    std::size_t dof_;
    std::vector<double> tire_;
    std::vector<double> inv_mass_;
    std::vector<double> damping_;
    std::vector<double> stiffness_;
};

} // namespace

SimResponse simulate(const VehicleParams& params, const RoadProfile& profile, const SimConfig& cfg)
{
    params.validate();
    cfg.validate();
    if (profile.elevations.empty()) {
        throw ValidationError("road profile has no samples");
    }
    const double required = cfg.speed * cfg.duration + params.wheelbase();
    if (profile.length < required) {
        std::ostringstream msg;
        msg << "road profile too short: " << profile.length << " m < " << required
            << " m (speed * duration + axle span)";
        throw ValidationError(msg.str());
    }

    const FirstOrderSystem system(params);
    const std::size_t n = params.axle_count;
    const std::size_t dof = system.dof();
    const std::size_t steps = cfg.step_count();
    const double h = cfg.time_step;

    auto road_at = [&](double t, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = axle_road_height(params, profile, i, cfg.speed, t);
        }
    };

    SimResponse resp;
    const std::size_t samples = steps + 1;
    resp.time.resize(samples);
    resp.z_s.resize(samples);
    resp.theta.resize(samples);
    resp.z_s_rate.resize(samples);
    resp.theta_rate.resize(samples);
    resp.z_s_accel.resize(samples);
    resp.theta_accel.resize(samples);
    const std::vector<double> per_axle(samples, 0.0);
    resp.z_us.assign(n, per_axle);
    resp.z_us_rate.assign(n, per_axle);
    resp.deflection.assign(n, per_axle);
    resp.tire_load.assign(n, per_axle);
    resp.road_input.assign(n, per_axle);

    std::vector<double> state(2 * dof, 0.0);
    std::vector<double> stage(2 * dof), k1(2 * dof), k2(2 * dof), k3(2 * dof), k4(2 * dof);
    std::vector<double> road_now(n), road_mid(n), road_next(n), accel(dof);
    road_at(0.0, road_now);

    auto record = [&](std::size_t k, double t) {
        const double* z = state.data();
        const double* v = state.data() + dof;
        system.acceleration(z, v, road_now.data(), accel.data());
        resp.time[k] = t;
        resp.z_s[k] = z[0];
        resp.theta[k] = z[1];
        resp.z_s_rate[k] = v[0];
        resp.theta_rate[k] = v[1];
        resp.z_s_accel[k] = accel[0];
        resp.theta_accel[k] = accel[1];
        for (std::size_t i = 0; i < n; ++i) {
            const double zu = z[i + 2];
            resp.z_us[i][k] = zu;
            resp.z_us_rate[i][k] = v[i + 2];
            resp.deflection[i][k] = z[0] - params.axle_offsets[i] * z[1] - zu;
            resp.tire_load[i][k] = params.tire_stiffnesses[i] * (road_now[i] - zu);
            resp.road_input[i][k] = road_now[i];
        }
    };

    record(0, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        road_at(t + 0.5 * h, road_mid);
        road_at(t + h, road_next);

        system.derivative(state, road_now, k1);
        for (std::size_t j = 0; j < state.size(); ++j) {
            stage[j] = state[j] + 0.5 * h * k1[j];
        }
        system.derivative(stage, road_mid, k2);
        for (std::size_t j = 0; j < state.size(); ++j) {
            stage[j] = state[j] + 0.5 * h * k2[j];
        }
        system.derivative(stage, road_mid, k3);
        for (std::size_t j = 0; j < state.size(); ++j) {
            stage[j] = state[j] + h * k3[j];
        }
        system.derivative(stage, road_next, k4);

        for (std::size_t j = 0; j < state.size(); ++j) {
            state[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (!(std::abs(state[j]) <= kDivergenceBound)) {
                std::ostringstream msg;
                msg << "simulation diverged at step " << (k + 1) << " (t = " << (t + h)
                    << " s): state component " << j << " = " << state[j];
                throw DivergenceError(k + 1, msg.str());
            }
        }
        road_now.swap(road_next);
        record(k + 1, static_cast<double>(k + 1) * h);
    }
    return resp;
}

MetricVector response_metrics(const SimResponse& resp, const SimConfig& cfg)
{
    const auto first = static_cast<std::size_t>(
        std::upper_bound(resp.time.begin(), resp.time.end(), cfg.warmup) - resp.time.begin());
    if (first >= resp.time.size()) {
        throw ValidationError("no samples after warmup: extend duration or reduce warmup");
    }
    const auto count = static_cast<double>(resp.time.size() - first);

    auto rms = [&](const std::vector<double>& x) {
        double sum = 0.0;
        for (std::size_t k = first; k < x.size(); ++k) {
            sum += x[k] * x[k];
        }
        return std::sqrt(sum / count);
    };
    auto max_abs = [&](const std::vector<double>& x) {
        double peak = 0.0;
        for (std::size_t k = first; k < x.size(); ++k) {
            peak = std::max(peak, std::abs(x[k]));
        }
        return peak;
    };

    MetricVector m;
    m.a_rms = rms(resp.z_s_accel);
    m.theta_ddot_rms = rms(resp.theta_accel);
    m.theta_rms = rms(resp.theta);
    const std::size_t n = resp.axle_count();
    m.sws_max.resize(n);
    m.dtl_rms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.sws_max[i] = max_abs(resp.deflection[i]);
        m.dtl_rms[i] = rms(resp.tire_load[i]);
        m.sws_max_sum += m.sws_max[i];
        m.dtl_rms_sum += m.dtl_rms[i];
    }
    return m;
}

std::vector<double> mechanical_energy(const VehicleParams& params, const SimResponse& resp)
{
    const SystemMatrices sys = assemble_matrices(params);
    const std::size_t n = params.axle_count;
    const auto dof = static_cast<Eigen::Index>(params.dof());
    std::vector<double> energy(resp.samples());
    Eigen::VectorXd z(dof), v(dof);
    for (std::size_t k = 0; k < resp.samples(); ++k) {
        z(0) = resp.z_s[k];
        z(1) = resp.theta[k];
        v(0) = resp.z_s_rate[k];
        v(1) = resp.theta_rate[k];
        for (std::size_t i = 0; i < n; ++i) {
            z(static_cast<Eigen::Index>(i) + 2) = resp.z_us[i][k];
            v(static_cast<Eigen::Index>(i) + 2) = resp.z_us_rate[i][k];
        }
        energy[k] = 0.5 * v.dot(sys.mass * v) + 0.5 * z.dot(sys.stiffness * z);
    }
    return energy;
}

void write_response_csv(std::ostream& out, const SimResponse& resp)
{
    const std::size_t n = resp.axle_count();
    out << "time[s],z_s[m],theta[rad]";
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",z_us" << i << "[m]";
    }
    out << ",z_s_ddot[m/s^2],theta_ddot[rad/s^2]";
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",deflection" << i << "[m]";
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",dtl" << i << "[N]";
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",z_r" << i << "[m]";
    }
    out << '\n';

    for (std::size_t k = 0; k < resp.samples(); ++k) {
        out << csv::format(resp.time[k]) << ',' << csv::format(resp.z_s[k]) << ','
            << csv::format(resp.theta[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out << ',' << csv::format(resp.z_us[i][k]);
        }
        out << ',' << csv::format(resp.z_s_accel[k]) << ',' << csv::format(resp.theta_accel[k]);
        for (const auto* channel : {&resp.deflection, &resp.tire_load, &resp.road_input}) {
            for (std::size_t i = 0; i < n; ++i) {
                out << ',' << csv::format((*channel)[i][k]);
            }
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing response CSV");
    }
}

} // namespace axlesim
