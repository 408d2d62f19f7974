#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "axlesim/checkpoint.hpp"
#include "axlesim/config.hpp"
#include "axlesim/csv.hpp"
#include "axlesim/dataset.hpp"
#include "axlesim/errors.hpp"
#include "axlesim/network.hpp"
#include "axlesim/sensitivity.hpp"
#include "axlesim/simulation.hpp"
#include "axlesim/svg.hpp"

namespace axlesim::cli {

using json = nlohmann::json;

unsigned effective_workers(unsigned requested)
{
    unsigned workers = std::max(1u, requested);
    if (const char* cap = std::getenv("AXLESIM_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(cap, &end, 10);
        if (end != cap && value >= 1) {
            workers = std::min(workers, static_cast<unsigned>(value));
        }
    }
    return workers;
}

namespace {

// ---------------------------------------------------------------------------
// Options per subcommand. Each round-trips through the run manifest.
// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string config;
    std::optional<std::uint64_t> road_seed;
    bool flat_road = false;
    std::string out = "response.csv";
    std::string metrics_out;
    std::string road_out;
    std::string manifest;
};

struct DatasetOptions {
    std::string config;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> road_seed;
    std::optional<double> range;
    unsigned workers = 1;
    std::string out = "dataset.csv";
    std::string report = "dataset_report.txt";
    std::string manifest;
};

struct TrainOptions {
    std::string config;
    std::string dataset = "dataset.csv";
    std::string model = "mtl";
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch;
    std::optional<std::uint64_t> seed;
    std::optional<double> learning_rate;
    std::string out = "model.ckpt";
    std::string trace = "trace.csv";
    std::string manifest;
};

struct SensitivityOptions {
    std::string config;
    std::string checkpoint;
    bool exact = false;
    std::string mode = "oat";
    std::size_t grid = 11;
    double range = 0.3;
    std::size_t sobol_samples = 4096;
    std::optional<std::uint64_t> road_seed;
    unsigned workers = 1;
    std::string out = "sensitivity.csv";
    std::string image;
    std::string report;
    std::string manifest;
};

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v)
{
    j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v)
{
    if (j.contains(key) && !j.at(key).is_null()) {
        v = j.at(key).get<T>();
    } else {
        v.reset();
    }
}

json to_json(const SimulateOptions& o)
{
    json j{{"config", o.config}, {"flat_road", o.flat_road}, {"out", o.out}, {"metrics_out", o.metrics_out},
           {"road_out", o.road_out}};
    put_optional(j, "road_seed", o.road_seed);
    return j;
}

void from_json(const json& j, SimulateOptions& o)
{
    o.config = j.value("config", "");
    o.flat_road = j.value("flat_road", false);
    o.out = j.value("out", o.out);
    o.metrics_out = j.value("metrics_out", "");
    o.road_out = j.value("road_out", "");
    get_optional(j, "road_seed", o.road_seed);
}

json to_json(const DatasetOptions& o)
{
    json j{{"config", o.config}, {"workers", o.workers}, {"out", o.out}, {"report", o.report}};
    put_optional(j, "samples", o.samples);
    put_optional(j, "seed", o.seed);
    put_optional(j, "road_seed", o.road_seed);
    put_optional(j, "range", o.range);
    return j;
}

void from_json(const json& j, DatasetOptions& o)
{
    o.config = j.value("config", "");
    o.workers = j.value("workers", 1u);
    o.out = j.value("out", o.out);
    o.report = j.value("report", o.report);
    get_optional(j, "samples", o.samples);
    get_optional(j, "seed", o.seed);
    get_optional(j, "road_seed", o.road_seed);
    get_optional(j, "range", o.range);
}

json to_json(const TrainOptions& o)
{
    json j{{"config", o.config}, {"dataset", o.dataset}, {"model", o.model}, {"out", o.out}, {"trace", o.trace}};
    put_optional(j, "epochs", o.epochs);
    put_optional(j, "batch", o.batch);
    put_optional(j, "seed", o.seed);
    put_optional(j, "learning_rate", o.learning_rate);
    return j;
}

void from_json(const json& j, TrainOptions& o)
{
    o.config = j.value("config", "");
    o.dataset = j.value("dataset", o.dataset);
    o.model = j.value("model", o.model);
    o.out = j.value("out", o.out);
    o.trace = j.value("trace", o.trace);
    get_optional(j, "epochs", o.epochs);
    get_optional(j, "batch", o.batch);
    get_optional(j, "seed", o.seed);
    get_optional(j, "learning_rate", o.learning_rate);
}

json to_json(const SensitivityOptions& o)
{
    json j{{"config", o.config},   {"checkpoint", o.checkpoint}, {"exact", o.exact},
           {"mode", o.mode},       {"grid", o.grid},             {"range", o.range},
           {"sobol_samples", o.sobol_samples}, {"workers", o.workers}, {"out", o.out},
           {"image", o.image},     {"report", o.report}};
    put_optional(j, "road_seed", o.road_seed);
    return j;
}

void from_json(const json& j, SensitivityOptions& o)
{
    o.config = j.value("config", "");
    o.checkpoint = j.value("checkpoint", "");
    o.exact = j.value("exact", false);
    o.mode = j.value("mode", o.mode);
    o.grid = j.value("grid", o.grid);
    o.range = j.value("range", o.range);
    o.sobol_samples = j.value("sobol_samples", o.sobol_samples);
    o.workers = j.value("workers", 1u);
    o.out = j.value("out", o.out);
    o.image = j.value("image", "");
    o.report = j.value("report", "");
    get_optional(j, "road_seed", o.road_seed);
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

RunConfig resolve_config(const std::string& path)
{
    return path.empty() ? RunConfig{} : load_config(path);
}

std::ofstream open_output(const std::string& path, bool binary = false)
{
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return in;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

// Written before any long computation.
void write_manifest(const std::string& path, const std::string& command, const json& options,
                    const RunConfig& config, const json& seeds, const json& outputs)
{
    json m;
    m["tool"] = "axlesim";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["created_utc"] = utc_timestamp();
    m["options"] = options;
    m["config"] = to_config_text(config);
    m["seeds"] = seeds;
    m["outputs"] = outputs;
    auto out = open_output(path);
    out << m.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing manifest '" + path + "'");
    }
}

std::string default_manifest(const std::string& manifest, const std::string& primary_output)
{
    return manifest.empty() ? primary_output + ".manifest.json" : manifest;
}

void write_metrics_block(std::ostream& out, const MetricVector& m, const std::string& sdpi_text)
{
    out << "a_rms = " << csv::format(m.a_rms) << '\n'
        << "theta_ddot_rms = " << csv::format(m.theta_ddot_rms) << '\n'
        << "theta_rms = " << csv::format(m.theta_rms) << '\n'
        << "sws_max_sum = " << csv::format(m.sws_max_sum) << '\n'
        << "dtl_rms_sum = " << csv::format(m.dtl_rms_sum) << '\n';
    for (std::size_t i = 0; i < m.sws_max.size(); ++i) {
        out << "sws_max_" << i + 1 << " = " << csv::format(m.sws_max[i]) << '\n';
    }
    for (std::size_t i = 0; i < m.dtl_rms.size(); ++i) {
        out << "dtl_rms_" << i + 1 << " = " << csv::format(m.dtl_rms[i]) << '\n';
    }
    out << "sdpi = " << sdpi_text << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<EpochRecord>& trace)
{
    out << "epoch,mape_avg";
    for (std::size_t t = 1; t <= kTargetSize; ++t) {
        out << ",mape_task" << t;
    }
    for (std::size_t t = 1; t <= kTargetSize; ++t) {
        out << ",r2_task" << t;
    }
    out << '\n';
    for (const auto& rec : trace) {
        out << rec.epoch << ',' << csv::format(rec.validation.mape_average);
        for (double v : rec.validation.mape) {
            out << ',' << csv::format(v);
        }
        for (double v : rec.validation.r2) {
            out << ',' << csv::format(v);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_simulate(SimulateOptions o, std::ostream& out)
{
    if (o.config.empty()) {
        throw ValidationError("simulate requires --config");
    }
    RunConfig config = load_config(o.config);
    if (o.road_seed) {
        config.road.seed = *o.road_seed;
    }
    write_manifest(default_manifest(o.manifest, o.out), "simulate", to_json(o), config,
                   json{{"road", config.road.seed}}, json{{"response", o.out}, {"metrics", o.metrics_out}});

    RoadProfile road = o.flat_road ? flat_profile(config.road.length, config.road.spatial_step)
                                   : generate_profile(config.road);
    if (!o.road_out.empty()) {
        auto f = open_output(o.road_out);
        write_profile_csv(f, road);
    }

    const SimResponse response = simulate(config.vehicle, road, config.sim);
    const MetricVector metrics = response_metrics(response, config.sim);
    const MetricVector baseline =
        response_metrics(simulate(reference_vehicle(), road, config.sim), config.sim);

    std::string sdpi_text;
    try {
        sdpi_text = csv::format(sdpi(metrics, baseline));
    } catch (const NumericalError& e) {
        sdpi_text = std::string("undefined (") + e.what() + ")";
    }

    {
        auto f = open_output(o.out);
        write_response_csv(f, response);
    }
    write_metrics_block(out, metrics, sdpi_text);
    if (!o.metrics_out.empty()) {
        auto f = open_output(o.metrics_out);
        write_metrics_block(f, metrics, sdpi_text);
    }
    return kSuccess;
}

int run_gen_dataset(DatasetOptions o, std::ostream& out)
{
    RunConfig config = resolve_config(o.config);
    if (o.samples) config.sampling.sample_count = *o.samples;
    if (o.seed) config.sampling.seed = *o.seed;
    if (o.road_seed) config.road.seed = *o.road_seed;
    if (o.range) config.sampling.ranges.fill(*o.range);
    config.sampling.validate();
    const unsigned workers = effective_workers(o.workers);

    write_manifest(default_manifest(o.manifest, o.out), "gen-dataset", to_json(o), config,
                   json{{"road", config.road.seed}, {"sampling", config.sampling.seed}},
                   json{{"dataset", o.out}, {"report", o.report}});

    const auto roads = make_roads(config);
    const Dataset dataset = generate_dataset(config.sampling, config.vehicle, roads, config.sim, workers);
    {
        auto f = open_output(o.out);
        write_dataset_csv(f, dataset.rows);
    }
    {
        auto f = open_output(o.report);
        write_report(f, dataset.report);
    }
    write_report(out, dataset.report);
    return kSuccess;
}

int run_train(TrainOptions o, std::ostream& out)
{
    RunConfig config = resolve_config(o.config);
    if (o.epochs) config.train.epochs = *o.epochs;
    if (o.batch) config.train.batch_size = *o.batch;
    if (o.seed) config.train.seed = *o.seed;
    if (o.learning_rate) config.train.finetune_rate = *o.learning_rate;
    config.train.validate();
    if (o.model != "mtl" && o.model != "dnn") {
        throw ValidationError("--model must be 'mtl' or 'dnn'");
    }

    write_manifest(default_manifest(o.manifest, o.out), "train", to_json(o), config,
                   json{{"train", config.train.seed}}, json{{"checkpoint", o.out}, {"trace", o.trace}});

    auto in = open_input(o.dataset);
    const auto rows = read_dataset_csv(in);
    if (rows.empty()) {
        throw ValidationError("dataset '" + o.dataset + "' has no rows");
    }
    const DatasetSplit split = split_dataset(rows, config.train);
    const TrainResult result = o.model == "mtl" ? train_mtl_dbn_dnn(split, config.architecture, config.train)
                                                : train_baseline_dnn(split, config.architecture, config.train);

    save_checkpoint(o.out, result.net);
    {
        auto f = open_output(o.trace);
        write_trace_csv(f, result.trace);
    }

    out << "model: " << o.model << "\nepochs: " << result.trace.size() << '\n';
    if (!result.trace.empty()) {
        out << "final validation mape_avg = " << result.trace.back().validation.mape_average << '\n';
    }
    if (!split.test.empty()) {
        const RegressionReport test = evaluate(result.net, split.test);
        out << "test rows = " << test.rows << "\ntest mape_avg = " << test.mape_average << '\n';
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            out << "test " << kTargetNames[t] << ": mape = " << test.mape[t] << ", r2 = " << test.r2[t] << '\n';
        }
    }
    return kSuccess;
}

int run_sensitivity(SensitivityOptions o, std::ostream& out)
{
    RunConfig config = resolve_config(o.config);
    if (o.road_seed) config.road.seed = *o.road_seed;
    if (!o.exact && o.checkpoint.empty()) {
        throw ValidationError("sensitivity needs --checkpoint or --exact");
    }
    if (o.mode != "oat" && o.mode != "sobol") {
        throw ValidationError("--mode must be 'oat' or 'sobol'");
    }
    if (!(o.range >= 0.0 && o.range < 1.0)) {
        throw ValidationError("--range must lie in [0, 1)");
    }
    const unsigned workers = effective_workers(o.workers);

    write_manifest(default_manifest(o.manifest, o.out), "sensitivity", to_json(o), config,
                   json{{"road", config.road.seed}}, json{{"matrix", o.out}, {"image", o.image}});

    Evaluator evaluator;
    if (o.exact) {
        auto road = std::make_shared<const RoadProfile>(generate_profile(config.road));
        evaluator = simulator_evaluator(config.vehicle, road, config.sim);
    } else {
        evaluator = surrogate_evaluator(std::make_shared<const MtlNetwork>(load_checkpoint(o.checkpoint)));
    }
    const DesignVector baseline = design_of(config.vehicle);

    SensitivityMatrix matrix;
    if (o.mode == "oat") {
        OatSweep sweep;
        sweep.ranges.fill(o.range);
        sweep.grid_points = o.grid;
        sweep.workers = workers;
        matrix = compute_sensitivity(evaluator, baseline, sweep);
    } else {
        SobolSpec spec;
        spec.ranges.fill(o.range);
        spec.samples = o.sobol_samples;
        spec.workers = workers;
        matrix = compute_sobol_sensitivity(evaluator, baseline, spec);
    }

    {
        auto f = open_output(o.out);
        write_sensitivity_csv(f, matrix.scores);
    }
    if (!o.image.empty()) {
        std::vector<std::vector<double>> values;
        for (const auto& row : matrix.scores) {
            values.emplace_back(row.begin(), row.end());
        }
        auto f = open_output(o.image);
        svg::write_heatmap(f, values, {kParamNames.begin(), kParamNames.end()},
                           {kTargetNames.begin(), kTargetNames.end()}, "Input sensitivity (" + o.mode + ")");
    }

    // Qualitative expectations: body mass drives body acceleration, pitch inertia drives pitch acceleration.
    std::ostringstream report;
    report << "evaluator: " << (o.exact ? "simulator" : "surrogate") << "\nmode: " << o.mode << '\n';
    const std::pair<Target, Param> checks[] = {{Target::AccelRms, Param::SprungMass},
                                               {Target::PitchAccelRms, Param::PitchInertia}};
    for (const auto& [metric, expected] : checks) {
        const auto m = static_cast<std::size_t>(metric);
        const std::size_t got = matrix.argmax_row(m);
        if (matrix.scores[got][m] == 0.0) {
            report << "column " << kTargetNames[m] << ": no variation\n";
        } else if (got == static_cast<std::size_t>(expected)) {
            report << "column " << kTargetNames[m] << ": argmax " << kParamNames[got] << " (as expected)\n";
        } else {
            report << "DISCREPANCY column " << kTargetNames[m] << ": argmax " << kParamNames[got] << ", expected "
                   << kParamNames[static_cast<std::size_t>(expected)] << '\n';
        }
    }
    out << report.str();
    if (!o.report.empty()) {
        auto f = open_output(o.report);
        f << report.str();
    }
    return kSuccess;
}

// plot helpers ---------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t column(const std::string& name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ValidationError("column '" + name + "' not found");
        }
        return static_cast<std::size_t>(it - header.begin());
    }
};

CsvTable read_numeric_csv(const std::string& path, bool first_column_text = false)
{
    auto in = open_input(path);
    CsvTable table;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
    }
    for (auto& h : csv::split(csv::trim(line))) {
        table.header.emplace_back(csv::trim(h));
    }
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(csv::trim(line));
        if (fields.size() != table.header.size()) {
            throw IoError(path + ": ragged CSV row");
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            table.columns[c].push_back(first_column_text && c == 0 ? 0.0 : csv::parse_double(fields[c]));
        }
    }
    return table;
}

int run_plot_trace(const std::vector<std::string>& inputs, const std::vector<std::string>& labels,
                   const std::string& column, const std::string& output)
{
    std::vector<svg::Series> series;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const CsvTable t = read_numeric_csv(inputs[i]);
        series.push_back({i < labels.size() ? labels[i] : inputs[i], t.columns[t.column("epoch")],
                          t.columns[t.column(column)]});
    }
    auto f = open_output(output);
    svg::write_line_chart(f, series, {"Validation " + column + " per epoch", "epoch", column});
    return kSuccess;
}

int run_plot_heatmap(const std::string& input, const std::string& output)
{
    auto in = open_input(input);
    std::string line;
    std::getline(in, line);
    auto header = csv::split(csv::trim(line));
    std::vector<std::string> cols(header.begin() + 1, header.end());
    std::vector<std::string> rows;
    std::vector<std::vector<double>> values;
    while (std::getline(in, line)) {
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(csv::trim(line));
        rows.push_back(fields.front());
        std::vector<double> row;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            row.push_back(csv::parse_double(fields[c]));
        }
        values.push_back(std::move(row));
    }
    auto f = open_output(output);
    svg::write_heatmap(f, values, rows, cols, "Input sensitivity on suspension metrics");
    return kSuccess;
}

int run_plot_response(const std::string& input, const std::vector<std::string>& columns, const std::string& output)
{
    const CsvTable t = read_numeric_csv(input);
    std::vector<svg::Series> series;
    for (const auto& c : columns) {
        series.push_back({c, t.columns[0], t.columns[t.column(c)]});
    }
    auto f = open_output(output);
    svg::write_line_chart(f, series, {"Response", t.header[0], "value"});
    return kSuccess;
}

int run_replay(const std::string& manifest_path, std::ostream& out);

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err)
{
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const json::exception& e) {
        err << "I/O error: malformed manifest: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

// Replays a subcommand from its manifest: resolved config text plus options.
int replay_with_config(const json& m, std::ostream& out)
{
    std::istringstream text(m.at("config").get<std::string>());
    const RunConfig config = parse_config(text, "manifest");
    const std::string command = m.at("command").get<std::string>();
    const json& options = m.at("options");

    // Persist the resolved config next to the outputs and point the options at it.
    auto with_config = [&](auto opts, const std::string& primary) {
        const std::string cfg_path = primary + ".replay.toml";
        auto f = open_output(cfg_path);
        f << to_config_text(config);
        f.close();
        opts.config = cfg_path;
        return opts;
    };

    if (command == "simulate") {
        SimulateOptions o;
        from_json(options, o);
        o = with_config(o, o.out);
        o.manifest = o.out + ".replay.manifest.json";
        return run_simulate(o, out);
    }
    if (command == "gen-dataset") {
        DatasetOptions o;
        from_json(options, o);
        o = with_config(o, o.out);
        o.manifest = o.out + ".replay.manifest.json";
        return run_gen_dataset(o, out);
    }
    if (command == "train") {
        TrainOptions o;
        from_json(options, o);
        o = with_config(o, o.out);
        o.manifest = o.out + ".replay.manifest.json";
        return run_train(o, out);
    }
    if (command == "sensitivity") {
        SensitivityOptions o;
        from_json(options, o);
        o = with_config(o, o.out);
        o.manifest = o.out + ".replay.manifest.json";
        return run_sensitivity(o, out);
    }
    throw ValidationError("manifest names unknown command '" + command + "'");
}

int run_replay(const std::string& manifest_path, std::ostream& out)
{
    auto in = open_input(manifest_path);
    json m;
    in >> m;
    return replay_with_config(m, out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"axlesim: multi-axle half-car suspension simulation, dataset generation, "
                 "MTL-DBN-DNN surrogate training and sensitivity analysis.\n"
                 "Exit codes: 0 success, 2 validation, 3 numerical failure, 4 I/O.\n"
                 "AXLESIM_THREADS caps every --workers value.",
                 "axlesim"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate one traversal; write response CSV and metrics");
    sim_cmd->add_option("-c,--config", sim.config, "Config file ([vehicle] required)")->required();
    sim_cmd->add_option("--road-seed", sim.road_seed, "Override [road] seed");
    sim_cmd->add_flag("--flat-road", sim.flat_road, "Replace the generated road with a flat one");
    sim_cmd->add_option("-o,--out", sim.out, "Response CSV path")->capture_default_str();
    sim_cmd->add_option("--metrics-out", sim.metrics_out, "Also write the metrics block to this file");
    sim_cmd->add_option("--road-out", sim.road_out, "Export the road profile CSV");
    sim_cmd->add_option("--manifest", sim.manifest, "Run manifest path (default <out>.manifest.json)");

    DatasetOptions ds;
    auto* ds_cmd = app.add_subcommand("gen-dataset", "Sample vehicles, simulate them, write dataset CSV");
    ds_cmd->add_option("-c,--config", ds.config, "Config file (defaults used when omitted)");
    ds_cmd->add_option("-n,--samples", ds.samples, "Number of samples (overrides [sampling] count)");
    ds_cmd->add_option("--seed", ds.seed, "Sampling seed");
    ds_cmd->add_option("--road-seed", ds.road_seed, "Road seed");
    ds_cmd->add_option("--range", ds.range, "Relative half-range applied to all six parameters");
    ds_cmd->add_option("-w,--workers", ds.workers, "Concurrent simulations")->capture_default_str();
    ds_cmd->add_option("-o,--out", ds.out, "Dataset CSV path")->capture_default_str();
    ds_cmd->add_option("--report", ds.report, "Generation report path")->capture_default_str();
    ds_cmd->add_option("--manifest", ds.manifest, "Run manifest path (default <out>.manifest.json)");

    TrainOptions tr;
    auto* tr_cmd = app.add_subcommand("train", "Train the MTL-DBN-DNN or the dense DNN baseline");
    tr_cmd->add_option("-c,--config", tr.config, "Config file for [train] settings");
    tr_cmd->add_option("-d,--dataset", tr.dataset, "Dataset CSV")->capture_default_str();
    tr_cmd->add_option("-m,--model", tr.model, "mtl or dnn")->capture_default_str();
    tr_cmd->add_option("--epochs", tr.epochs, "Fine-tuning epochs");
    tr_cmd->add_option("--batch", tr.batch, "Mini-batch size");
    tr_cmd->add_option("--seed", tr.seed, "Seed for split, initialization and shuffling");
    tr_cmd->add_option("--lr", tr.learning_rate, "Fine-tuning learning rate");
    tr_cmd->add_option("-o,--out", tr.out, "Checkpoint path")->capture_default_str();
    tr_cmd->add_option("--trace", tr.trace, "Per-epoch trace CSV")->capture_default_str();
    tr_cmd->add_option("--manifest", tr.manifest, "Run manifest path (default <out>.manifest.json)");

    SensitivityOptions se;
    auto* se_cmd = app.add_subcommand("sensitivity", "Input/metric sensitivity matrix and heatmap");
    se_cmd->add_option("-c,--config", se.config, "Config file (baseline vehicle, road, sim)");
    se_cmd->add_option("--checkpoint", se.checkpoint, "Surrogate checkpoint (default evaluator)");
    se_cmd->add_flag("--exact", se.exact, "Evaluate with the full simulator");
    se_cmd->add_option("--mode", se.mode, "oat or sobol")->capture_default_str();
    se_cmd->add_option("--grid", se.grid, "OAT grid points per parameter")->capture_default_str();
    se_cmd->add_option("--range", se.range, "Relative half-range per parameter")->capture_default_str();
    se_cmd->add_option("--sobol-samples", se.sobol_samples, "Base samples for sobol mode")->capture_default_str();
    se_cmd->add_option("--road-seed", se.road_seed, "Road seed for --exact");
    se_cmd->add_option("-w,--workers", se.workers, "Concurrent evaluations")->capture_default_str();
    se_cmd->add_option("-o,--out", se.out, "Matrix CSV path")->capture_default_str();
    se_cmd->add_option("--image", se.image, "Heatmap SVG path");
    se_cmd->add_option("--report", se.report, "Write the argmax check report here");
    se_cmd->add_option("--manifest", se.manifest, "Run manifest path (default <out>.manifest.json)");

    auto* plot_cmd = app.add_subcommand("plot", "Render static SVG figures from CSV outputs");
    plot_cmd->require_subcommand(1);
    std::vector<std::string> trace_inputs, trace_labels;
    std::string trace_column = "mape_avg", plot_out, heat_in, resp_in;
    std::vector<std::string> resp_columns;
    auto* pt_cmd = plot_cmd->add_subcommand("trace", "MAPE convergence curves from trace CSVs");
    pt_cmd->add_option("-i,--in", trace_inputs, "Trace CSV (repeatable)")->required();
    pt_cmd->add_option("-l,--label", trace_labels, "Legend label per input");
    pt_cmd->add_option("--column", trace_column, "Column to plot")->capture_default_str();
    pt_cmd->add_option("-o,--out", plot_out, "SVG path")->required();
    auto* ph_cmd = plot_cmd->add_subcommand("heatmap", "Heatmap from a sensitivity CSV");
    ph_cmd->add_option("-i,--in", heat_in, "Sensitivity CSV")->required();
    ph_cmd->add_option("-o,--out", plot_out, "SVG path")->required();
    auto* pr_cmd = plot_cmd->add_subcommand("response", "Time traces from a response CSV");
    pr_cmd->add_option("-i,--in", resp_in, "Response CSV")->required();
    pr_cmd->add_option("--columns", resp_columns, "Column names to plot")->required();
    pr_cmd->add_option("-o,--out", plot_out, "SVG path")->required();

    std::string manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a subcommand from its run manifest");
    replay_cmd->add_option("manifest", manifest_path, "Manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidation;
    }

    return guarded(
        [&]() -> int {
            if (*sim_cmd) return run_simulate(sim, out);
            if (*ds_cmd) return run_gen_dataset(ds, out);
            if (*tr_cmd) return run_train(tr, out);
            if (*se_cmd) return run_sensitivity(se, out);
            if (*pt_cmd) return run_plot_trace(trace_inputs, trace_labels, trace_column, plot_out);
            if (*ph_cmd) return run_plot_heatmap(heat_in, plot_out);
            if (*pr_cmd) return run_plot_response(resp_in, resp_columns, plot_out);
            if (*replay_cmd) return run_replay(manifest_path, out);
            return kValidation;
        },
        err);
}

} // namespace axlesim::cli
