#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>

#include "axlesim/dataset.hpp"
#include "axlesim/errors.hpp"
#include "axlesim/network.hpp"

namespace axlesim {

/// Maps the six design inputs to the six targets. Must be safe to call concurrently.
using Evaluator = std::function<TargetVector(const DesignVector&)>;

using ScoreTable = std::array<std::array<double, kTargetSize>, kDesignSize>; // [param][metric]

struct SensitivityMatrix {
    ScoreTable raw{};
    ScoreTable scores{}; // each column scaled so its maximum is 1

    /// Parameter with the largest score for `metric` (first one on ties).
    std::size_t argmax_row(std::size_t metric) const;
};

class SweepError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// One-at-a-time sweep settings: parameter p covers base * (1 +/- ranges[p]).
struct OatSweep {
    DesignVector ranges = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
    std::size_t grid_points = 11;
    unsigned workers = 1;
};

/// Raw score = (max - min of the metric over the sweep) / metric at baseline.
/// Throws SweepError naming the failing grid point.
SensitivityMatrix compute_sensitivity(const Evaluator& evaluator, const DesignVector& baseline, const OatSweep& sweep);

struct SobolSpec {
    DesignVector ranges = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
    std::size_t samples = 4096;
    std::uint64_t seed = 11;
    unsigned workers = 1;
};

/// First-order Sobol indices (Saltelli estimator, uniform box around the
/// baseline), negative estimates clipped to zero before normalization.
SensitivityMatrix compute_sobol_sensitivity(const Evaluator& evaluator, const DesignVector& baseline,
                                            const SobolSpec& spec);

/// Column-wise max normalization; all-zero columns stay zero.
ScoreTable normalize_columns(const ScoreTable& raw);

/// Full simulation on a fixed road; SDPI relative to `baseline` on the same road.
Evaluator simulator_evaluator(const VehicleParams& baseline, std::shared_ptr<const RoadProfile> road,
                              const SimConfig& cfg);

Evaluator surrogate_evaluator(std::shared_ptr<const MtlNetwork> net);

void write_sensitivity_csv(std::ostream& out, const ScoreTable& table);

} // namespace axlesim
