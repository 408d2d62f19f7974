#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "axlesim/network.hpp"

namespace axlesim::support {

/// Small random network; the head is locally connected or dense at random.
/// Every layer has at most 20 weights.
MtlNetwork random_small_network(std::mt19937_64& rng);

struct GradCheckResult {
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::size_t floor_limited = 0; // entries so small the absolute floor governs
    double worst_relative = 0.0;   // over the remaining entries
    std::string first_failure;
};

/// Backprop against central differences with step `eps` for every parameter.
/// Passes when |g - fd| <= rel * max(|g|, |fd|) + abs_floor.
GradCheckResult check_gradients(const MtlNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                double eps, double rel, double abs_floor);

} // namespace axlesim::support
