#include "axlesim/sensitivity.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "axlesim/csv.hpp"
#include "axlesim/parallel.hpp"

namespace axlesim {

std::size_t SensitivityMatrix::argmax_row(std::size_t metric) const
{
    std::size_t best = 0;
    for (std::size_t p = 1; p < kDesignSize; ++p) {
        if (scores[p][metric] > scores[best][metric]) {
            best = p;
        }
    }
    return best;
}

ScoreTable normalize_columns(const ScoreTable& raw)
{
    ScoreTable out{};
    for (std::size_t m = 0; m < kTargetSize; ++m) {
        double peak = 0.0;
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            peak = std::max(peak, raw[p][m]);
        }
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            out[p][m] = peak > 0.0 ? raw[p][m] / peak : 0.0;
        }
    }
    return out;
}

namespace {

std::string describe(const DesignVector& point)
{
    std::ostringstream s;
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        s << (p ? ", " : "") << kParamNames[p] << '=' << point[p];
    }
    return s.str();
}

// Evaluates all points concurrently, wrapping failures with the offending point.
std::vector<TargetVector> evaluate_all(const Evaluator& evaluator, const std::vector<DesignVector>& points,
                                       unsigned workers)
{
    std::vector<TargetVector> values(points.size());
    parallel_for(points.size(), workers, [&](std::size_t i) {
        try {
            values[i] = evaluator(points[i]);
        } catch (const std::exception& e) {
            throw SweepError("sensitivity evaluation failed at point " + std::to_string(i) + " (" +
                             describe(points[i]) + "): " + e.what());
        }
    });
    return values;
}

} // namespace

SensitivityMatrix compute_sensitivity(const Evaluator& evaluator, const DesignVector& baseline, const OatSweep& sweep)
{
    if (sweep.grid_points == 0) {
        throw ValidationError("sensitivity grid needs at least one point");
    }
    const std::size_t g = sweep.grid_points;

    // point 0 is the baseline, then g points per parameter
    std::vector<DesignVector> points{baseline};
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        for (std::size_t k = 0; k < g; ++k) {
            const double fraction = g == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(g - 1);
            DesignVector point = baseline;
            point[p] = baseline[p] * (1.0 + sweep.ranges[p] * fraction);
            points.push_back(point);
        }
    }
    const auto values = evaluate_all(evaluator, points, sweep.workers);
    const TargetVector& base = values.front();

    SensitivityMatrix result;
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        for (std::size_t m = 0; m < kTargetSize; ++m) {
            double lo = values[1 + p * g][m];
            double hi = lo;
            for (std::size_t k = 1; k < g; ++k) {
                lo = std::min(lo, values[1 + p * g + k][m]);
                hi = std::max(hi, values[1 + p * g + k][m]);
            }
            const double spread = hi - lo;
            if (spread == 0.0) {
                result.raw[p][m] = 0.0;
            } else if (base[m] == 0.0) {
                throw SweepError("metric " + std::string(kTargetNames[m]) +
                                 " is zero at baseline; relative sensitivity undefined");
            } else {
                result.raw[p][m] = spread / std::abs(base[m]);
            }
        }
    }
    result.scores = normalize_columns(result.raw);
    return result;
}

SensitivityMatrix compute_sobol_sensitivity(const Evaluator& evaluator, const DesignVector& baseline,
                                            const SobolSpec& spec)
{
    if (spec.samples < 2) {
        throw ValidationError("Sobol estimation needs at least two base samples");
    }
    const std::size_t n = spec.samples;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto draw = [&] {
        DesignVector d = baseline;
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            d[p] = baseline[p] * (1.0 + spec.ranges[p] * unit(rng));
        }
        return d;
    };

    // layout: A (n), B (n), then A with column p from B for each p (n each)
    std::vector<DesignVector> points;
    points.reserve(n * (kDesignSize + 2));
    for (std::size_t i = 0; i < 2 * n; ++i) {
        points.push_back(draw());
    }
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            DesignVector mixed = points[i];
            mixed[p] = points[n + i][p];
            points.push_back(mixed);
        }
    }
    const auto values = evaluate_all(evaluator, points, spec.workers);

    SensitivityMatrix result;
    for (std::size_t m = 0; m < kTargetSize; ++m) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 2 * n; ++i) {
            mean += values[i][m];
        }
        mean /= static_cast<double>(2 * n);
        double variance = 0.0;
        for (std::size_t i = 0; i < 2 * n; ++i) {
            variance += (values[i][m] - mean) * (values[i][m] - mean);
        }
        variance /= static_cast<double>(2 * n);

        for (std::size_t p = 0; p < kDesignSize; ++p) {
            if (variance == 0.0) {
                result.raw[p][m] = 0.0;
                continue;
            }
            // centred outputs; a large mean otherwise swamps the estimate
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double fa = values[i][m] - mean;
                const double fb = values[n + i][m] - mean;
                const double fab = values[(2 + p) * n + i][m] - mean;
                acc += fb * (fab - fa);
            }
            result.raw[p][m] = std::max(0.0, acc / static_cast<double>(n) / variance);
        }
    }
    result.scores = normalize_columns(result.raw);
    return result;
}

Evaluator simulator_evaluator(const VehicleParams& baseline, std::shared_ptr<const RoadProfile> road,
                              const SimConfig& cfg)
{
    const MetricVector reference = response_metrics(simulate(baseline, *road, cfg), cfg);
    return [baseline, road, cfg, reference](const DesignVector& design) {
        const VehicleParams vehicle = apply_design(baseline, design);
        const MetricVector m = response_metrics(simulate(vehicle, *road, cfg), cfg);
        return targets_from_metrics(m, reference);
    };
}

Evaluator surrogate_evaluator(std::shared_ptr<const MtlNetwork> net)
{
    return [net](const DesignVector& design) { return predict(*net, design).values; };
}

void write_sensitivity_csv(std::ostream& out, const ScoreTable& table)
{
    out << "parameter";
    for (auto name : kTargetNames) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        out << kParamNames[p];
        for (std::size_t m = 0; m < kTargetSize; ++m) {
            out << ',' << csv::format(table[p][m]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing sensitivity CSV");
    }
}

} // namespace axlesim
