#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace axlesim {

/// Physical description of an n-axle half vehicle.
///
/// Axle offsets are signed longitudinal distances from the sprung-mass
/// centre of gravity, positive forward, listed front to rear. State
/// ordering everywhere is [z_s, theta, z_us(1) ... z_us(n)].
struct VehicleParams {
    std::size_t axle_count = 0;
    double sprung_mass = 0.0;   // kg
    double pitch_inertia = 0.0; // kg m^2
    std::vector<double> unsprung_masses;  // kg
    std::vector<double> spring_coeffs;    // N/m
    std::vector<double> damping_coeffs;   // N s/m
    std::vector<double> tire_stiffnesses; // N/m
    std::vector<double> axle_offsets;     // m

    /// Throws ValidationError naming the first violated invariant.
    void validate() const;

    std::size_t dof() const noexcept { return axle_count + 2; }

    /// Distance between first and last axle.
    double wheelbase() const;

    double total_mass() const;
};

struct SystemMatrices {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd damping;
    Eigen::MatrixXd stiffness;
};

// Four-axle combat vehicle reference values.
namespace reference {
inline constexpr std::size_t kAxleCount = 4;
inline constexpr double kSprungMass = 20337.8;
inline constexpr double kUnsprungMass = 458.4;
inline constexpr double kPitchInertia = 562239.6;
inline constexpr double kSpringCoeff = 128710.0;
inline constexpr double kDampingCoeff = 11522.5;
inline constexpr double kTireStiffness = 840857.0;
inline constexpr double kWheelbase = 4.85;
} // namespace reference

inline constexpr double kStandardGravity = 9.81;

/// Offsets of n equidistant axles spanning `wheelbase`, centred on the CG.
std::vector<double> equidistant_offsets(std::size_t axle_count, double wheelbase);

/// Vehicle with identical coefficients on every axle and equidistant axles.
VehicleParams make_uniform_vehicle(std::size_t axle_count, double sprung_mass, double pitch_inertia,
                                   double unsprung_mass, double spring_coeff, double damping_coeff,
                                   double tire_stiffness, double wheelbase);

/// The four-axle reference vehicle.
VehicleParams reference_vehicle();

SystemMatrices assemble_matrices(const VehicleParams& params);

/// Road forcing: zeros for bounce and pitch, z_r(i) k_t(i) for each wheel.
Eigen::VectorXd force_vector(const VehicleParams& params, std::span<const double> road_heights);

/// Static tire normal loads (N, positive in compression) under gravity.
///
/// Solved from the elastic model K z = -w, so the result is unique for any
/// number of axles. Throws ValidationError when the contact geometry cannot
/// carry a pitch moment (a single contact point).
std::vector<double> static_axle_loads(const VehicleParams& params, double gravity);

} // namespace axlesim
