// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 1 4 7      a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "axlesim/config.hpp"
#include "axlesim/dataset.hpp"
#include "axlesim/network.hpp"
#include "axlesim/road.hpp"
#include "axlesim/sdpi.hpp"
#include "axlesim/sensitivity.hpp"
#include "axlesim/simulation.hpp"
#include "axlesim/vehicle.hpp"
#include "cli.hpp"
#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"
#include "support/spectral.hpp"

using namespace axlesim;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

unsigned workers()
{
    return cli::effective_workers(std::max(1u, std::thread::hardware_concurrency()));
}

double relative_change(double a, double b)
{
    return std::abs(a - b) / std::abs(a);
}

Verdict sdpi_identity()
{
    const RunConfig config;
    const auto road = generate_profile(config.road);
    const MetricVector m = response_metrics(simulate(config.vehicle, road, config.sim), config.sim);
    const double value = sdpi(m, m);
    return {std::abs(value - 1.0) <= 1e-12, fmt::format("sdpi = {:.17g}", value)};
}

Verdict matrix_correctness()
{
    std::mt19937_64 rng(8608);
    std::uniform_int_distribution<std::size_t> axles(1, 6);
    std::map<std::size_t, std::size_t> tried, not_pd;
    std::size_t asymmetric = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = axles(rng);
        const SystemMatrices s = assemble_matrices(support::random_vehicle(rng, n));
        ++tried[n];
        const double cs = (s.damping - s.damping.transpose()).cwiseAbs().maxCoeff();
        const double ks = (s.stiffness - s.stiffness.transpose()).cwiseAbs().maxCoeff();
        if (cs > 1e-12 * s.damping.cwiseAbs().maxCoeff() || ks > 1e-12 * s.stiffness.cwiseAbs().maxCoeff()) {
            ++asymmetric;
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.stiffness, Eigen::EigenvaluesOnly);
        const auto& ev = eig.eigenvalues();
        if (!(ev.minCoeff() > 1e-9 * ev.maxCoeff())) {
            ++not_pd[n];
        }
    }

    const VehicleParams ref = reference_vehicle();
    const Eigen::MatrixXd mass = assemble_matrices(ref).mass;
    Eigen::VectorXd expected(6);
    expected << 20337.8, 562239.6, 458.4, 458.4, 458.4, 458.4;
    const bool table_ok = mass.diagonal() == expected && (mass - Eigen::MatrixXd(expected.asDiagonal())).isZero(0.0);

    std::size_t failures = 0;
    std::string per_n;
    for (const auto& [n, count] : tried) {
        failures += not_pd[n];
        per_n += fmt::format(" n={}:{}/{}", n, count - not_pd[n], count);
    }
    return {asymmetric == 0 && failures == 0 && table_ok,
            fmt::format("asymmetric {}, K positive definite{}, reference mass diagonal {}", asymmetric, per_n,
                        table_ok ? "exact" : "WRONG")};
}

Verdict integrator_convergence()
{
    const RunConfig config;
    const auto road = generate_profile(config.road);
    SimConfig cfg = config.sim;
    const MetricVector a = response_metrics(simulate(config.vehicle, road, cfg), cfg);
    cfg.time_step *= 0.5;
    const MetricVector b = response_metrics(simulate(config.vehicle, road, cfg), cfg);
    const double changes[] = {relative_change(a.a_rms, b.a_rms), relative_change(a.theta_ddot_rms, b.theta_ddot_rms),
                              relative_change(a.theta_rms, b.theta_rms), relative_change(a.sws_max_sum, b.sws_max_sum),
                              relative_change(a.dtl_rms_sum, b.dtl_rms_sum)};
    const double worst = *std::max_element(std::begin(changes), std::end(changes));

    // free decay once every axle is past a single bump
    SimConfig decay = config.sim;
    decay.duration = 8.0;
    const VehicleParams v = config.vehicle;
    const auto bump = support::bump_profile(100.0, 0.01, 1.0, 0.5, 0.05);
    const auto resp = simulate(v, bump, decay);
    const auto energy = mechanical_energy(v, resp);
    const double peak = *std::max_element(energy.begin(), energy.end());
    const double clear = (1.5 + v.wheelbase()) / decay.speed;
    std::size_t increases = 0, checked = 0;
    for (std::size_t k = 1; k < energy.size(); ++k) {
        if (resp.time[k - 1] > clear) {
            ++checked;
            if (energy[k] > energy[k - 1] + 1e-12 * peak) {
                ++increases;
            }
        }
    }
    return {worst < 0.005 && increases == 0 && checked > 0,
            fmt::format("worst metric change {:.3e} (< 5e-3), energy increases {} of {} decay steps", worst,
                        increases, checked)};
}

Verdict road_psd()
{
    // Power of the 256-line spectrum is compared per third-octave band; a
    // line spectrum has no meaningful pointwise density.
    const double g0 = reference_psd(IsoClass::C);
    const double edge = std::pow(2.0, 1.0 / 6.0);
    int passing = 0;
    std::string worst;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RoadSpec spec;
        spec.length = 2000.0;
        spec.seed = seed;
        const auto profile = generate_profile(spec);
        const auto est = support::welch_psd(profile.elevations, spec.spatial_step, 8192);
        double lo_ratio = 1e300, hi_ratio = 0.0;
        for (double centre = 0.05; centre <= 2.0 * 1.0001; centre *= std::pow(2.0, 1.0 / 3.0)) {
            const double lo = centre / edge, hi = centre * edge;
            const double target = g0 * kReferenceSpatialFrequency * kReferenceSpatialFrequency * (1.0 / lo - 1.0 / hi);
            const double ratio = support::band_power(est, lo, hi) / target;
            lo_ratio = std::min(lo_ratio, ratio);
            hi_ratio = std::max(hi_ratio, ratio);
        }
        if (lo_ratio >= 0.5 && hi_ratio <= 2.0) {
            ++passing;
        } else {
            worst += fmt::format(" seed {} [{:.2f}, {:.2f}]", seed, lo_ratio, hi_ratio);
        }
    }
    return {passing >= 9, fmt::format("{}/10 seeds within a factor of 2 in every band{}", passing,
                                      worst.empty() ? "" : ";" + worst)};
}

// Default 20000-row dataset, generated once for criteria 5 and 6.
const std::vector<DatasetRow>& default_dataset()
{
    static const std::vector<DatasetRow> rows = [] {
        const RunConfig config;
        const auto roads = make_roads(config);
        Dataset d = generate_dataset(config.sampling, config.vehicle, roads, config.sim, workers());
        std::cout << fmt::format("  dataset: {} rows, {} diverged, {:.0f} s", d.rows.size(), d.report.diverged.size(),
                                 d.report.wall_seconds)
                  << std::endl;
        return std::move(d.rows);
    }();
    return rows;
}

std::shared_ptr<const MtlNetwork> trained_surrogate;

Verdict surrogate_quality()
{
    const RunConfig config;
    TrainConfig cfg = config.train;
    cfg.threads = workers();
    const DatasetSplit split = split_dataset(default_dataset(), cfg);
    const TrainResult result = train_mtl_dbn_dnn(split, config.architecture, cfg);
    const RegressionReport test = evaluate(result.net, split.test);
    trained_surrogate = std::make_shared<const MtlNetwork>(result.net);

    bool r2_ok = true;
    std::string r2;
    for (std::size_t t = 0; t < kTargetSize; ++t) {
        r2_ok = r2_ok && test.r2[t] >= 0.95;
        r2 += fmt::format(" {}={:.4f}{}", kTargetNames[t], test.r2[t], test.r2[t] >= 0.95 ? "" : "(<0.95)");
    }
    return {test.mape_average <= 0.05 && r2_ok,
            fmt::format("test mape_avg {:.4f} (<= 0.05), r2:{}", test.mape_average, r2)};
}

Verdict mtl_advantage()
{
    const RunConfig config;
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        TrainConfig cfg = config.train;
        cfg.epochs = 70;
        cfg.seed = seed;
        cfg.threads = workers();
        const DatasetSplit split = split_dataset(default_dataset(), cfg);
        const double mtl = train_mtl_dbn_dnn(split, config.architecture, cfg).trace.back().validation.mape_average;
        const double dnn = train_baseline_dnn(split, config.architecture, cfg).trace.back().validation.mape_average;
        wins += mtl < dnn ? 1 : 0;
        detail += fmt::format(" seed {}: mtl {:.4f} vs dnn {:.4f};", seed, mtl, dnn);
    }
    return {wins >= 2, fmt::format("mtl better on {}/3 seeds:{}", wins, detail)};
}

Verdict gradient_oracle()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t failures = 0, checked = 0, masked = 0, floor_limited = 0;
    double worst = 0.0;
    std::string first;
    for (int i = 0; i < 100; ++i) {
        const MtlNetwork net = support::random_small_network(rng);
        masked += net.head_kind == HeadKind::LocallyConnected ? 1 : 0;
        Eigen::MatrixXd x(8, net.hidden.front().weights.rows());
        Eigen::MatrixXd y(8, static_cast<Eigen::Index>(net.tasks()));
        x = x.unaryExpr([&](double) { return unit(rng); });
        y = y.unaryExpr([&](double) { return 0.5 + 0.4 * unit(rng); });
        const auto r = support::check_gradients(net, x, y, 1e-5, 1e-6, 1e-10);
        failures += r.failures;
        checked += r.checked;
        floor_limited += r.floor_limited;
        worst = std::max(worst, r.worst_relative);
        if (first.empty()) {
            first = r.first_failure;
        }
    }
    return {failures == 0,
            fmt::format("{} parameters over 100 networks ({} masked heads), {} failures, worst relative {:.2e} "
                        "(1e-6), {} entries below the 1e-10 absolute floor{}",
                        checked, masked, failures, worst, floor_limited, first.empty() ? "" : "; " + first)};
}

SensitivityMatrix exact_oat(std::size_t grid)
{
    const RunConfig config;
    OatSweep sweep;
    sweep.grid_points = grid;
    sweep.workers = workers();
    const auto road = std::make_shared<const RoadProfile>(generate_profile(config.road));
    return compute_sensitivity(simulator_evaluator(config.vehicle, road, config.sim), design_of(config.vehicle),
                               sweep);
}

Verdict sensitivity_ordering()
{
    const SensitivityMatrix s = exact_oat(OatSweep{}.grid_points);
    const std::size_t a = s.argmax_row(0);
    const std::size_t p = s.argmax_row(1);
    const bool a_ok = a == static_cast<std::size_t>(Param::SprungMass);
    const bool p_ok = p == static_cast<std::size_t>(Param::PitchInertia);
    auto column = [&](std::size_t m) {
        std::string out;
        for (std::size_t r = 0; r < kDesignSize; ++r) {
            out += fmt::format(" {}={:.3f}", kParamNames[r], s.scores[r][m]);
        }
        return out;
    };
    std::string detail = fmt::format("a_rms argmax {}{}, theta_ddot_rms argmax {}{}", kParamNames[a],
                                     a_ok ? "" : " (DISCREPANCY: expected m_s)", kParamNames[p],
                                     p_ok ? "" : " (DISCREPANCY: expected I_y)");
    detail += "; a_rms:" + column(0) + "; theta_ddot_rms:" + column(1);
    return {a_ok && p_ok, detail};
}

Verdict determinism()
{
    const auto dir = support::scratch_dir("acceptance_determinism");
    const auto path = [&](const std::string& name) { return (dir / name).string(); };
    std::ostringstream sink;
    auto run = [&](std::vector<std::string> args) {
        std::ostringstream err;
        const int code = cli::run(args, sink, err);
        if (code != 0) {
            throw std::runtime_error(args.front() + " exited " + std::to_string(code) + ": " + err.str());
        }
    };
    // workers are passed explicitly; the thread cap must not collapse them
    ::unsetenv("AXLESIM_THREADS");
    run({"gen-dataset", "-n", "2000", "-w", "1", "-o", path("w1.csv"), "--report", path("w1.txt")});
    run({"gen-dataset", "-n", "2000", "-w", "8", "-o", path("w8.csv"), "--report", path("w8.txt")});
    const bool same_data = support::read_file(path("w1.csv")) == support::read_file(path("w8.csv"));

    run({"train", "-d", path("w1.csv"), "--seed", "5", "-o", path("a.ckpt"), "--trace", path("a.csv")});
    run({"train", "-d", path("w1.csv"), "--seed", "5", "-o", path("b.ckpt"), "--trace", path("b.csv")});
    const bool same_ckpt = support::read_file(path("a.ckpt")) == support::read_file(path("b.ckpt"));
    return {same_data && same_ckpt, fmt::format("dataset workers 1 vs 8 {}, checkpoints {}",
                                                same_data ? "identical" : "DIFFER", same_ckpt ? "identical" : "DIFFER")};
}

// Not a numbered criterion: argmax agreement of exact and surrogate on a 3-point grid.
void evaluator_agreement()
{
    if (!trained_surrogate) {
        return;
    }
    const RunConfig config;
    OatSweep sweep;
    sweep.grid_points = 3;
    sweep.workers = workers();
    const SensitivityMatrix exact = exact_oat(3);
    const SensitivityMatrix surrogate =
        compute_sensitivity(surrogate_evaluator(trained_surrogate), design_of(config.vehicle), sweep);
    std::string detail;
    int agree = 0;
    for (std::size_t m = 0; m < kTargetSize; ++m) {
        const bool same = exact.argmax_row(m) == surrogate.argmax_row(m);
        agree += same ? 1 : 0;
        detail += fmt::format(" {}:{}/{}", kTargetNames[m], kParamNames[exact.argmax_row(m)],
                              kParamNames[surrogate.argmax_row(m)]);
    }
    std::cout << fmt::format("info: 3-point grid argmax exact/surrogate agree on {}/6 columns:{}", agree, detail)
              << std::endl;
}

} // namespace

int main(int argc, char** argv)
{
    const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria = {
        {1, {"sdpi identity", sdpi_identity}},
        {2, {"matrix correctness", matrix_correctness}},
        {3, {"integrator convergence", integrator_convergence}},
        {4, {"road psd fidelity", road_psd}},
        {5, {"surrogate quality", surrogate_quality}},
        {6, {"mtl advantage", mtl_advantage}},
        {7, {"gradient oracle", gradient_oracle}},
        {8, {"sensitivity ordering", sensitivity_ordering}},
        {9, {"determinism", determinism}},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (!criteria.count(id)) {
            std::cerr << "unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.push_back(id);
    }
    if (selected.empty()) {
        for (const auto& [id, c] : criteria) {
            selected.push_back(id);
        }
    }

    int failed = 0;
    for (int id : selected) {
        const auto& [name, check] = criteria.at(id);
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << fmt::format("criterion {} {}: {} ({:.1f} s) {}", id, name, v.pass ? "PASS" : "FAIL", secs,
                                 v.detail)
                  << std::endl;
        failed += v.pass ? 0 : 1;
        if (id == 5) {
            evaluator_agreement();
        }
    }
    std::cout << fmt::format("{} of {} criteria passed", selected.size() - static_cast<std::size_t>(failed),
                             selected.size())
              << std::endl;
    return failed == 0 ? 0 : 1;
}
