#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "axlesim/road.hpp"
#include "axlesim/sdpi.hpp"
#include "axlesim/simulation.hpp"
#include "axlesim/vehicle.hpp"

namespace axlesim {

inline constexpr std::size_t kDesignSize = 6;
inline constexpr std::size_t kTargetSize = 6;

/// Design parameters varied by the sampler and the sensitivity sweeps.
enum class Param : std::size_t { SprungMass, PitchInertia, SpringCoeff, DampingCoeff, TireStiffness, Wheelbase };

/// Surrogate targets, in dataset column order.
enum class Target : std::size_t { AccelRms, PitchAccelRms, PitchRms, SwsMaxSum, DtlRmsSum, Sdpi };

inline constexpr std::array<std::string_view, kDesignSize> kParamNames = {"m_s", "I_y", "k_s", "c_s", "k_t", "wb"};
inline constexpr std::array<std::string_view, kTargetSize> kTargetNames = {
    "a_rms", "theta_ddot_rms", "theta_rms", "sws_max_sum", "dtl_rms_sum", "sdpi"};

using DesignVector = std::array<double, kDesignSize>;
using TargetVector = std::array<double, kTargetSize>;

/// Design values of a vehicle. Per-axle coefficients report their mean.
DesignVector design_of(const VehicleParams& vehicle);

/// Baseline vehicle moved to `design`: masses set directly, per-axle
/// coefficients rescaled together, axle offsets rescaled to the new span.
VehicleParams apply_design(const VehicleParams& baseline, const DesignVector& design);

enum class SamplingScheme { UniformRandom, LatinHypercube };

struct SamplingSpec {
    /// Relative half-range per parameter: value = base * (1 + r * (2u - 1)).
    DesignVector ranges = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
    std::size_t sample_count = 20000;
    SamplingScheme scheme = SamplingScheme::LatinHypercube;
    std::uint64_t seed = 2024;

    void validate() const;
};

/// Deterministic in the seed. Axle count and unsprung masses stay at baseline.
std::vector<VehicleParams> sample_parameters(const SamplingSpec& spec, const VehicleParams& baseline);

struct DatasetRow {
    DesignVector inputs{};
    TargetVector targets{};
};

struct DatasetReport {
    std::size_t requested = 0;
    std::size_t produced = 0;
    std::vector<std::size_t> diverged; // sample indices
    double wall_seconds = 0.0;
    unsigned workers = 1;

    bool divergence_warning() const;
};

struct Dataset {
    std::vector<DatasetRow> rows;
    DatasetReport report;
};

TargetVector targets_from_metrics(const MetricVector& metrics, const MetricVector& baseline);

/// Metrics of `vehicle` averaged over the given roads.
MetricVector averaged_metrics(const VehicleParams& vehicle, std::span<const RoadProfile> roads,
                              const SimConfig& cfg);

/// Simulates every sample on the shared roads and scores it against the baseline.
/// Diverging samples are dropped and listed in the report; a diverging baseline throws.
Dataset generate_dataset(const SamplingSpec& spec, const VehicleParams& baseline,
                         std::span<const RoadProfile> roads, const SimConfig& cfg, unsigned workers = 1);

Dataset generate_dataset(const SamplingSpec& spec, const VehicleParams& baseline, const RoadProfile& road,
                         const SimConfig& cfg, unsigned workers = 1);

void write_dataset_csv(std::ostream& out, std::span<const DatasetRow> rows);
std::vector<DatasetRow> read_dataset_csv(std::istream& in);

void write_report(std::ostream& out, const DatasetReport& report);

} // namespace axlesim
