#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "axlesim/errors.hpp"
#include "axlesim/vehicle.hpp"
#include "support/fixtures.hpp"

using namespace axlesim;

namespace {

// Energy form: deflection d_i = b_i . z with b_i = (1, -l_i, 0.., -1, ..0), so the
// coupling matrix is the sum of c_i b_i b_i^T.
Eigen::MatrixXd hand_coupling(const VehicleParams& p, const std::vector<double>& c)
{
    const auto n = static_cast<Eigen::Index>(p.axle_count);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 2);
        b(0) = 1.0;
        b(1) = -p.axle_offsets[static_cast<std::size_t>(i)];
        b(2 + i) = -1.0;
        m += c[static_cast<std::size_t>(i)] * b * b.transpose();
    }
    return m;
}

} // namespace

TEST(Vehicle, ReferenceMassMatrixIsDiagonal)
{
    const auto m = assemble_matrices(reference_vehicle()).mass;
    Eigen::VectorXd diag(6);
    diag << 20337.8, 562239.6, 458.4, 458.4, 458.4, 458.4;
    EXPECT_EQ(m, Eigen::MatrixXd(diag.asDiagonal()));
}

TEST(Vehicle, SingleAxleStiffnessByHand)
{
    VehicleParams p = make_uniform_vehicle(1, 1.0, 1.0, 1.0, 1.0, 0.0, 2.0, 0.0);
    p.axle_offsets = {3.0};
    Eigen::MatrixXd expected(3, 3);
    expected << 1, -3, -1, -3, 9, 3, -1, 3, 3;
    EXPECT_EQ(assemble_matrices(p).stiffness, expected);
}

TEST(Vehicle, ZeroDampingGivesZeroMatrix)
{
    std::mt19937_64 rng(3);
    VehicleParams p = support::random_vehicle(rng, 3);
    p.damping_coeffs.assign(3, 0.0);
    EXPECT_TRUE(assemble_matrices(p).damping.isZero(0.0));
}

TEST(Vehicle, MatricesMatchElementwiseOracle)
{
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 6; ++n) {
        const VehicleParams p = support::random_vehicle(rng, n);
        const SystemMatrices s = assemble_matrices(p);
        EXPECT_TRUE(s.damping.isApprox(hand_coupling(p, p.damping_coeffs), 1e-14));
        Eigen::MatrixXd k = hand_coupling(p, p.spring_coeffs);
        for (std::size_t i = 0; i < n; ++i) {
            k(2 + i, 2 + i) += p.tire_stiffnesses[i];
        }
        EXPECT_TRUE(s.stiffness.isApprox(k, 1e-14));
    }
}

TEST(Vehicle, SymmetryAndDefinitenessOnRandomVehicles)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        const SystemMatrices s = assemble_matrices(support::random_vehicle(rng, n));
        EXPECT_EQ(s.damping, s.damping.transpose());
        EXPECT_EQ(s.stiffness, s.stiffness.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.stiffness);
        EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Vehicle, SingleAxleStiffnessIsOnlySemiDefinite)
{
    // One contact point cannot resist pitch: the pitch row is -l times the bounce row.
    std::mt19937_64 rng(8);
    const SystemMatrices s = assemble_matrices(support::random_vehicle(rng, 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.stiffness);
    EXPECT_LT(std::abs(eig.eigenvalues()(0)), 1e-9 * eig.eigenvalues().maxCoeff());
}

TEST(Vehicle, DampingIsHomogeneous)
{
    std::mt19937_64 rng(21);
    VehicleParams p = support::random_vehicle(rng, 4);
    const Eigen::MatrixXd c1 = assemble_matrices(p).damping;
    for (double& c : p.damping_coeffs) {
        c *= 4.0; // power of two keeps the comparison exact
    }
    EXPECT_EQ(assemble_matrices(p).damping, 4.0 * c1);
}

TEST(Vehicle, ForceVectorExamples)
{
    VehicleParams p = make_uniform_vehicle(2, 1.0, 1.0, 1.0, 1.0, 1.0, 1000.0, 2.0);
    p.tire_stiffnesses = {1000.0, 2000.0};
    const std::vector<double> h = {0.01, -0.02};
    const Eigen::VectorXd f = force_vector(p, h);
    ASSERT_EQ(f.size(), 4);
    EXPECT_DOUBLE_EQ(f(0), 0.0);
    EXPECT_DOUBLE_EQ(f(1), 0.0);
    EXPECT_DOUBLE_EQ(f(2), 10.0);
    EXPECT_DOUBLE_EQ(f(3), -40.0);

    const std::vector<double> zero(2, 0.0);
    EXPECT_TRUE(force_vector(p, zero).isZero(0.0));

    const std::vector<double> bump = {0.05, 0.0, 0.0, 0.0};
    EXPECT_NEAR(force_vector(reference_vehicle(), bump)(2), 42042.85, 1e-9);

    const std::vector<double> wrong(3, 0.0);
    EXPECT_THROW(force_vector(p, wrong), ValidationError);
}

TEST(Vehicle, ForceVectorIsLinear)
{
    const VehicleParams p = reference_vehicle();
    const std::vector<double> a = {0.01, -0.03, 0.02, 0.005};
    const std::vector<double> b = {-0.02, 0.01, 0.0, 0.04};
    std::vector<double> sum(4);
    for (std::size_t i = 0; i < 4; ++i) {
        sum[i] = 2.0 * a[i] + b[i];
    }
    EXPECT_TRUE(force_vector(p, sum).isApprox(2.0 * force_vector(p, a) + force_vector(p, b), 1e-14));
}

TEST(Vehicle, ReferenceStaticLoadsAreEqualAndBalance)
{
    const auto loads = static_axle_loads(reference_vehicle(), 9.81);
    ASSERT_EQ(loads.size(), 4u);
    const double total = std::accumulate(loads.begin(), loads.end(), 0.0);
    EXPECT_NEAR(total, (20337.8 + 4 * 458.4) * 9.81, 1e-6);
    for (double l : loads) {
        EXPECT_NEAR(l, total / 4.0, 1e-6);
    }
}

TEST(Vehicle, TwoAxleLeverRule)
{
    // CG one third of the spacing behind the front axle.
    VehicleParams p = make_uniform_vehicle(2, 900.0, 500.0, 50.0, 2e4, 1e3, 2e5, 3.0);
    p.axle_offsets = {1.0, -2.0};
    const auto loads = static_axle_loads(p, 9.81);
    const double front = loads[0] - 50.0 * 9.81;
    const double rear = loads[1] - 50.0 * 9.81;
    EXPECT_NEAR(front / rear, 2.0, 1e-12);
}

TEST(Vehicle, StaticLoadsBalanceOnRandomVehicles)
{
    std::mt19937_64 rng(9);
    for (std::size_t n = 2; n <= 6; ++n) {
        const VehicleParams p = support::random_vehicle(rng, n);
        const auto loads = static_axle_loads(p, 9.81);
        double force = 0.0, moment = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            force += loads[i];
            moment += (loads[i] - p.unsprung_masses[i] * 9.81) * p.axle_offsets[i];
        }
        EXPECT_NEAR(force, p.total_mass() * 9.81, 1e-8 * force);
        EXPECT_NEAR(moment, 0.0, 1e-8 * force);
    }
}

TEST(Vehicle, SingleContactCannotCarryPitch)
{
    std::mt19937_64 rng(1);
    EXPECT_THROW(static_axle_loads(support::random_vehicle(rng, 1), 9.81), ValidationError);
}

TEST(Vehicle, ValidationNamesTheProblem)
{
    VehicleParams p = reference_vehicle();
    p.sprung_mass = 0.0;
    EXPECT_THROW(p.validate(), ValidationError);

    p = reference_vehicle();
    p.spring_coeffs.pop_back();
    try {
        p.validate();
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("spring_coeffs"), std::string::npos);
    }

    p = reference_vehicle();
    std::swap(p.axle_offsets[0], p.axle_offsets[1]);
    EXPECT_THROW(p.validate(), ValidationError);

    p = reference_vehicle();
    p.damping_coeffs[2] = -1.0;
    EXPECT_THROW(assemble_matrices(p), ValidationError);
}

TEST(Vehicle, ReferenceGeometry)
{
    const VehicleParams p = reference_vehicle();
    EXPECT_DOUBLE_EQ(p.wheelbase(), 4.85);
    EXPECT_NEAR(p.axle_offsets[0] + p.axle_offsets[3], 0.0, 1e-15);
    EXPECT_NEAR(p.axle_offsets[1] - p.axle_offsets[2], 4.85 / 3.0, 1e-15);
}
