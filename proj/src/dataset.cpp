#include "axlesim/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"
#include "axlesim/parallel.hpp"

namespace axlesim {

namespace {

double mean_of(const std::vector<double>& values)
{
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void rescale(std::vector<double>& values, double target_mean)
{
    const double current = mean_of(values);
    if (current == 0.0) {
        std::fill(values.begin(), values.end(), target_mean);
        return;
    }
    const double factor = target_mean / current;
    for (auto& v : values) {
        v *= factor;
    }
}

std::size_t index(Param p) { return static_cast<std::size_t>(p); }

} // namespace

DesignVector design_of(const VehicleParams& vehicle)
{
    DesignVector d{};
    d[index(Param::SprungMass)] = vehicle.sprung_mass;
    d[index(Param::PitchInertia)] = vehicle.pitch_inertia;
    d[index(Param::SpringCoeff)] = mean_of(vehicle.spring_coeffs);
    d[index(Param::DampingCoeff)] = mean_of(vehicle.damping_coeffs);
    d[index(Param::TireStiffness)] = mean_of(vehicle.tire_stiffnesses);
    d[index(Param::Wheelbase)] = vehicle.wheelbase();
    return d;
}

VehicleParams apply_design(const VehicleParams& baseline, const DesignVector& design)
{
    VehicleParams v = baseline;
    v.sprung_mass = design[index(Param::SprungMass)];
    v.pitch_inertia = design[index(Param::PitchInertia)];
    rescale(v.spring_coeffs, design[index(Param::SpringCoeff)]);
    rescale(v.damping_coeffs, design[index(Param::DampingCoeff)]);
    rescale(v.tire_stiffnesses, design[index(Param::TireStiffness)]);
    const double span = baseline.wheelbase();
    if (span > 0.0) {
        const double factor = design[index(Param::Wheelbase)] / span;
        for (auto& l : v.axle_offsets) {
            l *= factor;
        }
    }
    return v;
}

void SamplingSpec::validate() const
{
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        if (!(ranges[p] >= 0.0 && ranges[p] < 1.0)) {
            throw ValidationError("sampling range for " + std::string(kParamNames[p]) +
                                  " must lie in [0, 1) so sampled values stay positive");
        }
    }
    if (sample_count == 0) {
        throw ValidationError("sample_count must be at least 1");
    }
}

std::vector<VehicleParams> sample_parameters(const SamplingSpec& spec, const VehicleParams& baseline)
{
    spec.validate();
    baseline.validate();
    const DesignVector base = design_of(baseline);
    const std::size_t count = spec.sample_count;

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // unit-cube coordinates, [parameter][sample]
    std::array<std::vector<double>, kDesignSize> u;
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        u[p].resize(count);
        if (spec.scheme == SamplingScheme::LatinHypercube) {
            std::vector<std::size_t> strata(count);
            std::iota(strata.begin(), strata.end(), std::size_t{0});
            std::shuffle(strata.begin(), strata.end(), rng);
            for (std::size_t i = 0; i < count; ++i) {
                u[p][i] = (static_cast<double>(strata[i]) + unit(rng)) / static_cast<double>(count);
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                u[p][i] = unit(rng);
            }
        }
    }

    std::vector<VehicleParams> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        DesignVector design = base;
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            if (spec.ranges[p] != 0.0) {
                design[p] = base[p] * (1.0 + spec.ranges[p] * (2.0 * u[p][i] - 1.0));
            }
            if (!(design[p] > 0.0) && base[p] > 0.0) {
                throw ValidationError("sampled " + std::string(kParamNames[p]) + " is not positive");
            }
        }
        samples.push_back(apply_design(baseline, design));
    }
    return samples;
}

bool DatasetReport::divergence_warning() const
{
    return requested > 0 && static_cast<double>(diverged.size()) > 0.01 * static_cast<double>(requested);
}

TargetVector targets_from_metrics(const MetricVector& metrics, const MetricVector& baseline)
{
    return {metrics.a_rms,       metrics.theta_ddot_rms, metrics.theta_rms,
            metrics.sws_max_sum, metrics.dtl_rms_sum,    sdpi(metrics, baseline)};
}

MetricVector averaged_metrics(const VehicleParams& vehicle, std::span<const RoadProfile> roads,
                              const SimConfig& cfg)
{
    if (roads.empty()) {
        throw ValidationError("at least one road profile is required");
    }
    if (roads.size() == 1) {
        return response_metrics(simulate(vehicle, roads.front(), cfg), cfg);
    }
    MetricVector sum;
    for (const auto& road : roads) {
        const MetricVector m = response_metrics(simulate(vehicle, road, cfg), cfg);
        sum.a_rms += m.a_rms;
        sum.theta_ddot_rms += m.theta_ddot_rms;
        sum.theta_rms += m.theta_rms;
        sum.sws_max_sum += m.sws_max_sum;
        sum.dtl_rms_sum += m.dtl_rms_sum;
        sum.sws_max.resize(m.sws_max.size(), 0.0);
        sum.dtl_rms.resize(m.dtl_rms.size(), 0.0);
        for (std::size_t i = 0; i < m.sws_max.size(); ++i) {
            sum.sws_max[i] += m.sws_max[i];
            sum.dtl_rms[i] += m.dtl_rms[i];
        }
    }
    const auto k = static_cast<double>(roads.size());
    sum.a_rms /= k;
    sum.theta_ddot_rms /= k;
    sum.theta_rms /= k;
    sum.sws_max_sum /= k;
    sum.dtl_rms_sum /= k;
    for (auto& v : sum.sws_max) {
        v /= k;
    }
    for (auto& v : sum.dtl_rms) {
        v /= k;
    }
    return sum;
}

Dataset generate_dataset(const SamplingSpec& spec, const VehicleParams& baseline,
                         std::span<const RoadProfile> roads, const SimConfig& cfg, unsigned workers)
{
    const auto start = std::chrono::steady_clock::now();
    const auto vehicles = sample_parameters(spec, baseline);
    const MetricVector reference = averaged_metrics(baseline, roads, cfg);

    std::vector<DatasetRow> rows(vehicles.size());
    std::vector<char> ok(vehicles.size(), 0);
    parallel_for(vehicles.size(), workers, [&](std::size_t i) {
        try {
            const MetricVector m = averaged_metrics(vehicles[i], roads, cfg);
            rows[i].inputs = design_of(vehicles[i]);
            rows[i].targets = targets_from_metrics(m, reference);
            ok[i] = 1;
        } catch (const DivergenceError&) {
            ok[i] = 0;
        }
    });

    Dataset out;
    out.report.requested = vehicles.size();
    out.report.workers = std::max(1u, workers);
    out.rows.reserve(vehicles.size());
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        if (ok[i]) {
            out.rows.push_back(rows[i]);
        } else {
            out.report.diverged.push_back(i);
        }
    }
    out.report.produced = out.rows.size();
    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Dataset generate_dataset(const SamplingSpec& spec, const VehicleParams& baseline, const RoadProfile& road,
                         const SimConfig& cfg, unsigned workers)
{
    return generate_dataset(spec, baseline, std::span<const RoadProfile>(&road, 1), cfg, workers);
}

void write_dataset_csv(std::ostream& out, std::span<const DatasetRow> rows)
{
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        out << kParamNames[p] << ',';
    }
    for (std::size_t t = 0; t < kTargetSize; ++t) {
        out << kTargetNames[t] << (t + 1 < kTargetSize ? ',' : '\n');
    }
    for (const auto& row : rows) {
        for (double v : row.inputs) {
            out << csv::format(v) << ',';
        }
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            out << csv::format(row.targets[t]) << (t + 1 < kTargetSize ? ',' : '\n');
        }
    }
    if (!out) {
        throw IoError("failed writing dataset CSV");
    }
}

std::vector<DatasetRow> read_dataset_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("dataset CSV is empty");
    }
    const auto header = csv::split(csv::trim(line));
    if (header.size() != kDesignSize + kTargetSize) {
        throw IoError("dataset CSV header must have 12 columns");
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto expected = c < kDesignSize ? kParamNames[c] : kTargetNames[c - kDesignSize];
        if (csv::trim(header[c]) != expected) {
            throw IoError("dataset CSV column " + std::to_string(c + 1) + " must be '" +
                          std::string(expected) + "'");
        }
    }

    std::vector<DatasetRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != kDesignSize + kTargetSize) {
            throw IoError("dataset CSV line " + std::to_string(line_no) + ": expected 12 fields");
        }
        DatasetRow row;
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            row.inputs[p] = csv::parse_double(fields[p]);
        }
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            row.targets[t] = csv::parse_double(fields[kDesignSize + t]);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_report(std::ostream& out, const DatasetReport& report)
{
    out << "samples requested: " << report.requested << '\n'
        << "rows produced: " << report.produced << '\n'
        << "diverged: " << report.diverged.size() << '\n';
    if (!report.diverged.empty()) {
        out << "diverged indices:";
        for (auto i : report.diverged) {
            out << ' ' << i;
        }
        out << '\n';
    }
    if (report.divergence_warning()) {
        out << "WARNING: more than 1% of samples diverged\n";
    }
    out << "workers: " << report.workers << '\n'
        << "wall time [s]: " << report.wall_seconds << '\n';
}

} // namespace axlesim
