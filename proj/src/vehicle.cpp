#include "axlesim/vehicle.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

void require_length(const std::vector<double>& values, std::size_t n, const char* name)
{
    if (values.size() != n) {
        throw ValidationError(std::string(name) + ": expected " + std::to_string(n) +
                              " entries, got " + std::to_string(values.size()));
    }
}

void require_positive(const std::vector<double>& values, const char* name)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw ValidationError(std::string(name) + "[" + std::to_string(i) +
                                  "] must be positive and finite");
        }
    }
}

} // namespace

void VehicleParams::validate() const
{
    if (axle_count == 0) {
        throw ValidationError("axle_count must be at least 1");
    }
    if (!(sprung_mass > 0.0) || !std::isfinite(sprung_mass)) {
        throw ValidationError("sprung_mass must be positive and finite");
    }
    if (!(pitch_inertia > 0.0) || !std::isfinite(pitch_inertia)) {
        throw ValidationError("pitch_inertia must be positive and finite");
    }
    require_length(unsprung_masses, axle_count, "unsprung_masses");
    require_length(spring_coeffs, axle_count, "spring_coeffs");
    require_length(damping_coeffs, axle_count, "damping_coeffs");
    require_length(tire_stiffnesses, axle_count, "tire_stiffnesses");
    require_length(axle_offsets, axle_count, "axle_offsets");
    require_positive(unsprung_masses, "unsprung_masses");
    require_positive(spring_coeffs, "spring_coeffs");
    require_positive(tire_stiffnesses, "tire_stiffnesses");
    for (std::size_t i = 0; i < axle_count; ++i) {
        if (!(damping_coeffs[i] >= 0.0) || !std::isfinite(damping_coeffs[i])) {
            throw ValidationError("damping_coeffs[" + std::to_string(i) +
                                  "] must be non-negative and finite");
        }
        if (!std::isfinite(axle_offsets[i])) {
            throw ValidationError("axle_offsets[" + std::to_string(i) + "] must be finite");
        }
        if (i > 0 && !(axle_offsets[i] < axle_offsets[i - 1])) {
            throw ValidationError("axle_offsets must be strictly decreasing from front to rear");
        }
    }
}

double VehicleParams::wheelbase() const
{
    if (axle_offsets.empty()) {
        return 0.0;
    }
    return axle_offsets.front() - axle_offsets.back();
}

double VehicleParams::total_mass() const
{
    return sprung_mass + std::accumulate(unsprung_masses.begin(), unsprung_masses.end(), 0.0);
}

std::vector<double> equidistant_offsets(std::size_t axle_count, double wheelbase)
{
    std::vector<double> offsets(axle_count, 0.0);
    if (axle_count < 2) {
        return offsets;
    }
    const double spacing = wheelbase / static_cast<double>(axle_count - 1);
    const double half = 0.5 * wheelbase;
    for (std::size_t i = 0; i < axle_count; ++i) {
        offsets[i] = half - spacing * static_cast<double>(i);
    }
    return offsets;
}

VehicleParams make_uniform_vehicle(std::size_t axle_count, double sprung_mass, double pitch_inertia,
                                   double unsprung_mass, double spring_coeff, double damping_coeff,
                                   double tire_stiffness, double wheelbase)
{
    VehicleParams p;
    p.axle_count = axle_count;
    p.sprung_mass = sprung_mass;
    p.pitch_inertia = pitch_inertia;
    p.unsprung_masses.assign(axle_count, unsprung_mass);
    p.spring_coeffs.assign(axle_count, spring_coeff);
    p.damping_coeffs.assign(axle_count, damping_coeff);
    p.tire_stiffnesses.assign(axle_count, tire_stiffness);
    p.axle_offsets = equidistant_offsets(axle_count, wheelbase);
    return p;
}

VehicleParams reference_vehicle()
{
    using namespace reference;
    return make_uniform_vehicle(kAxleCount, kSprungMass, kPitchInertia, kUnsprungMass,
                                kSpringCoeff, kDampingCoeff, kTireStiffness, kWheelbase);
}

namespace {

// Bounce/pitch/wheel coupling shared by the damping and stiffness matrices.
Eigen::MatrixXd coupling_matrix(const VehicleParams& p, const std::vector<double>& coeff)
{
    const auto n = p.axle_count;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = coeff[i];
        const double l = p.axle_offsets[i];
        const auto w = static_cast<Eigen::Index>(i + 2);
        m(0, 0) += c;
        m(0, 1) -= l * c;
        m(1, 1) += l * l * c;
        m(0, w) = -c;
        m(1, w) = l * c;
        m(w, w) = c;
    }
    m(1, 0) = m(0, 1);
    for (Eigen::Index w = 2; w < m.rows(); ++w) {
        m(w, 0) = m(0, w);
        m(w, 1) = m(1, w);
    }
    return m;
}

} // namespace

SystemMatrices assemble_matrices(const VehicleParams& params)
{
    params.validate();
    const auto n = params.axle_count;

    SystemMatrices sys;
    sys.mass = Eigen::MatrixXd::Zero(n + 2, n + 2);
    sys.mass(0, 0) = params.sprung_mass;
    sys.mass(1, 1) = params.pitch_inertia;
    for (std::size_t i = 0; i < n; ++i) {
        sys.mass(i + 2, i + 2) = params.unsprung_masses[i];
    }

    sys.damping = coupling_matrix(params, params.damping_coeffs);
    sys.stiffness = coupling_matrix(params, params.spring_coeffs);
    for (std::size_t i = 0; i < n; ++i) {
        sys.stiffness(i + 2, i + 2) += params.tire_stiffnesses[i];
    }
    return sys;
}

Eigen::VectorXd force_vector(const VehicleParams& params, std::span<const double> road_heights)
{
    if (road_heights.size() != params.axle_count || params.tire_stiffnesses.size() != params.axle_count) {
        throw ValidationError("force_vector: expected " + std::to_string(params.axle_count) +
                              " road heights, got " + std::to_string(road_heights.size()));
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(params.axle_count + 2);
    for (std::size_t i = 0; i < params.axle_count; ++i) {
        f(i + 2) = road_heights[i] * params.tire_stiffnesses[i];
    }
    return f;
}

std::vector<double> static_axle_loads(const VehicleParams& params, double gravity)
{
    params.validate();
    if (!(gravity > 0.0)) {
        throw ValidationError("gravity must be positive");
    }
    const auto n = params.axle_count;
    if (n < 2) {
        throw ValidationError("static loads undefined: all axles act at a single point");
    }
    const SystemMatrices sys = assemble_matrices(params);

    Eigen::VectorXd weight = Eigen::VectorXd::Zero(n + 2);
    weight(0) = -params.sprung_mass * gravity;
    for (std::size_t i = 0; i < n; ++i) {
        weight(i + 2) = -params.unsprung_masses[i] * gravity;
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(sys.stiffness);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("static loads undefined: singular axle geometry");
    }
    const Eigen::VectorXd z = llt.solve(weight);

    std::vector<double> loads(n);
    for (std::size_t i = 0; i < n; ++i) {
        loads[i] = -params.tire_stiffnesses[i] * z(i + 2);
    }
    return loads;
}

} // namespace axlesim
