#include "axlesim/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

namespace pt = boost::property_tree;

// Raw "section.key" -> value text with comments and quotes removed.
class Table {
public:
    Table(const pt::ptree& tree, const std::string& source) : source_(source)
    {
        static const std::map<std::string, std::set<std::string>> known = {
            {"vehicle", {"n_axles", "m_s", "I_y", "m_us", "k_s", "c_s", "k_t", "wb", "axle_offsets"}},
            {"road", {"class", "length", "step", "seed", "n_min", "n_max", "components", "reference_psd",
                      "realizations"}},
            {"sim", {"speed", "duration", "dt", "warmup", "gravity"}},
            {"sampling", {"count", "scheme", "seed", "range", "range_m_s", "range_I_y", "range_k_s", "range_c_s",
                          "range_k_t", "range_wb"}},
            {"train", {"epochs", "batch", "pretrain_epochs", "pretrain_rate", "finetune_rate", "momentum", "seed",
                       "split", "hidden", "window", "stride", "gradient_shards", "threads"}},
        };
        for (const auto& [section, body] : tree) {
            const auto it = known.find(section);
            if (it == known.end()) {
                throw ValidationError(source_ + ": unknown section [" + section + "]");
            }
            for (const auto& [key, node] : body) {
                if (!it->second.count(key)) {
                    throw ValidationError(source_ + ": unknown config key '" + section + "." + key + "'");
                }
                values_[section + "." + key] = clean(node.data());
            }
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    const std::string& text(const std::string& key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            throw ValidationError(source_ + ": missing config key '" + key + "'");
        }
        return it->second;
    }

    double number(const std::string& key) const
    {
        try {
            return csv::parse_double(text(key));
        } catch (const IoError&) {
            throw ValidationError(source_ + ": config key '" + key + "' must be a number");
        }
    }

    std::size_t count(const std::string& key) const
    {
        const double v = number(key);
        if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ValidationError(source_ + ": config key '" + key + "' must be a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    bool is_list(const std::string& key) const
    {
        const auto& t = text(key);
        return !t.empty() && t.front() == '[';
    }

    std::vector<double> list(const std::string& key) const
    {
        const auto& t = text(key);
        if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
            throw ValidationError(source_ + ": config key '" + key + "' must be a list [a, b, ...]");
        }
        std::vector<double> out;
        const auto inner = csv::trim(std::string_view(t).substr(1, t.size() - 2));
        if (inner.empty()) {
            return out;
        }
        for (const auto& field : csv::split(inner)) {
            try {
                out.push_back(csv::parse_double(field));
            } catch (const IoError&) {
                throw ValidationError(source_ + ": config key '" + key + "' has a non-numeric entry");
            }
        }
        return out;
    }

    // Scalar broadcast to n entries, or a list of exactly n entries.
    std::vector<double> per_axle(const std::string& key, std::size_t n) const
    {
        if (!is_list(key)) {
            return std::vector<double>(n, number(key));
        }
        auto values = list(key);
        if (values.size() != n) {
            throw ValidationError(source_ + ": config key '" + key + "' needs " + std::to_string(n) + " entries");
        }
        return values;
    }

private:
    static std::string clean(const std::string& raw)
    {
        std::string value = raw;
        bool quoted = false;
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (value[i] == '"') {
                quoted = !quoted;
            } else if (value[i] == '#' && !quoted) {
                value.resize(i);
                break;
            }
        }
        std::string trimmed(csv::trim(value));
        if (trimmed.size() >= 2 && trimmed.front() == '"' && trimmed.back() == '"') {
            trimmed = trimmed.substr(1, trimmed.size() - 2);
        }
        return trimmed;
    }

    std::string source_;
    std::map<std::string, std::string> values_;
};

VehicleParams parse_vehicle(const Table& t)
{
    VehicleParams v;
    v.axle_count = t.count("vehicle.n_axles");
    if (v.axle_count == 0) {
        throw ValidationError("config key 'vehicle.n_axles' must be at least 1");
    }
    v.sprung_mass = t.number("vehicle.m_s");
    v.pitch_inertia = t.number("vehicle.I_y");
    v.unsprung_masses = t.per_axle("vehicle.m_us", v.axle_count);
    v.spring_coeffs = t.per_axle("vehicle.k_s", v.axle_count);
    v.damping_coeffs = t.per_axle("vehicle.c_s", v.axle_count);
    v.tire_stiffnesses = t.per_axle("vehicle.k_t", v.axle_count);
    const double wb = t.number("vehicle.wb");
    if (t.has("vehicle.axle_offsets")) {
        v.axle_offsets = t.per_axle("vehicle.axle_offsets", v.axle_count);
    } else {
        v.axle_offsets = equidistant_offsets(v.axle_count, wb);
    }
    v.validate();
    return v;
}

SamplingScheme parse_scheme(const std::string& text)
{
    if (text == "lhs" || text == "latin_hypercube") {
        return SamplingScheme::LatinHypercube;
    }
    if (text == "uniform") {
        return SamplingScheme::UniformRandom;
    }
    throw ValidationError("unknown sampling scheme '" + text + "' (expected lhs or uniform)");
}

template <typename Fn>
void list_line(std::ostream& out, const char* key, const std::vector<double>& values, Fn fmt)
{
    out << key << " = [";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? ", " : "") << fmt(values[i]);
    }
    out << "]\n";
}

} // namespace

RunConfig parse_config(std::istream& in, const std::string& source)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    const Table t(tree, source);

    RunConfig c;
    c.vehicle = parse_vehicle(t);

    if (t.has("road.class")) c.road.iso_class = parse_iso_class(t.text("road.class"));
    if (t.has("road.length")) c.road.length = t.number("road.length");
    if (t.has("road.step")) c.road.spatial_step = t.number("road.step");
    if (t.has("road.seed")) c.road.seed = t.count("road.seed");
    if (t.has("road.n_min")) c.road.min_frequency = t.number("road.n_min");
    if (t.has("road.n_max")) c.road.max_frequency = t.number("road.n_max");
    if (t.has("road.components")) c.road.components = t.count("road.components");
    if (t.has("road.reference_psd")) c.road.reference_psd_override = t.number("road.reference_psd");
    if (t.has("road.realizations")) c.road_realizations = t.count("road.realizations");
    c.road.validate();
    if (c.road_realizations == 0) {
        throw ValidationError("config key 'road.realizations' must be at least 1");
    }

    if (t.has("sim.speed")) c.sim.speed = t.number("sim.speed");
    if (t.has("sim.duration")) c.sim.duration = t.number("sim.duration");
    if (t.has("sim.dt")) c.sim.time_step = t.number("sim.dt");
    if (t.has("sim.warmup")) c.sim.warmup = t.number("sim.warmup");
    if (t.has("sim.gravity")) c.sim.gravity = t.number("sim.gravity");
    c.sim.validate();

    if (t.has("sampling.count")) c.sampling.sample_count = t.count("sampling.count");
    if (t.has("sampling.scheme")) c.sampling.scheme = parse_scheme(t.text("sampling.scheme"));
    if (t.has("sampling.seed")) c.sampling.seed = t.count("sampling.seed");
    if (t.has("sampling.range")) c.sampling.ranges.fill(t.number("sampling.range"));
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        const std::string key = "sampling.range_" + std::string(kParamNames[p]);
        if (t.has(key)) c.sampling.ranges[p] = t.number(key);
    }
    c.sampling.validate();

    if (t.has("train.epochs")) c.train.epochs = t.count("train.epochs");
    if (t.has("train.batch")) c.train.batch_size = t.count("train.batch");
    if (t.has("train.pretrain_epochs")) c.train.pretrain_epochs = t.count("train.pretrain_epochs");
    if (t.has("train.pretrain_rate")) c.train.pretrain_rate = t.number("train.pretrain_rate");
    if (t.has("train.finetune_rate")) c.train.finetune_rate = t.number("train.finetune_rate");
    if (t.has("train.momentum")) c.train.momentum = t.number("train.momentum");
    if (t.has("train.seed")) c.train.seed = t.count("train.seed");
    if (t.has("train.gradient_shards")) c.train.gradient_shards = t.count("train.gradient_shards");
    if (t.has("train.threads")) c.train.threads = static_cast<unsigned>(t.count("train.threads"));
    if (t.has("train.split")) {
        const auto split = t.list("train.split");
        if (split.size() != 3) {
            throw ValidationError("config key 'train.split' needs [train, validation, test]");
        }
        c.train.train_fraction = split[0];
        c.train.validation_fraction = split[1];
        c.train.test_fraction = split[2];
    }
    if (t.has("train.hidden")) {
        c.architecture.hidden.clear();
        for (double w : t.list("train.hidden")) {
            if (!(w >= 1.0) || w != static_cast<double>(static_cast<std::size_t>(w))) {
                throw ValidationError("config key 'train.hidden' must list positive integers");
            }
            c.architecture.hidden.push_back(static_cast<std::size_t>(w));
        }
    }
    if (t.has("train.window")) c.architecture.window = t.count("train.window");
    if (t.has("train.stride")) c.architecture.stride = t.count("train.stride");
    c.train.validate();
    c.architecture.validate(kTargetSize);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse_config(in, path);
}

std::string to_config_text(const RunConfig& c)
{
    const auto num = [](double v) { return csv::format(v); };
    std::ostringstream out;
    const auto& v = c.vehicle;
    out << "[vehicle]\n"
        << "n_axles = " << v.axle_count << '\n'
        << "m_s = " << num(v.sprung_mass) << '\n'
        << "I_y = " << num(v.pitch_inertia) << '\n';
    list_line(out, "m_us", v.unsprung_masses, num);
    list_line(out, "k_s", v.spring_coeffs, num);
    list_line(out, "c_s", v.damping_coeffs, num);
    list_line(out, "k_t", v.tire_stiffnesses, num);
    out << "wb = " << num(v.wheelbase()) << '\n';
    list_line(out, "axle_offsets", v.axle_offsets, num);

    out << "\n[road]\n"
        << "class = \"" << to_string(c.road.iso_class) << "\"\n"
        << "length = " << num(c.road.length) << '\n'
        << "step = " << num(c.road.spatial_step) << '\n'
        << "seed = " << c.road.seed << '\n'
        << "n_min = " << num(c.road.min_frequency) << '\n'
        << "n_max = " << num(c.road.max_frequency) << '\n'
        << "components = " << c.road.components << '\n';
    if (c.road.reference_psd_override) {
        out << "reference_psd = " << num(*c.road.reference_psd_override) << '\n';
    }
    out << "realizations = " << c.road_realizations << '\n';

    out << "\n[sim]\n"
        << "speed = " << num(c.sim.speed) << '\n'
        << "duration = " << num(c.sim.duration) << '\n'
        << "dt = " << num(c.sim.time_step) << '\n'
        << "warmup = " << num(c.sim.warmup) << '\n'
        << "gravity = " << num(c.sim.gravity) << '\n';

    out << "\n[sampling]\n"
        << "count = " << c.sampling.sample_count << '\n'
        << "scheme = \"" << (c.sampling.scheme == SamplingScheme::LatinHypercube ? "lhs" : "uniform") << "\"\n"
        << "seed = " << c.sampling.seed << '\n';
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        out << "range_" << kParamNames[p] << " = " << num(c.sampling.ranges[p]) << '\n';
    }

    out << "\n[train]\n"
        << "epochs = " << c.train.epochs << '\n'
        << "batch = " << c.train.batch_size << '\n'
        << "pretrain_epochs = " << c.train.pretrain_epochs << '\n'
        << "pretrain_rate = " << num(c.train.pretrain_rate) << '\n'
        << "finetune_rate = " << num(c.train.finetune_rate) << '\n'
        << "momentum = " << num(c.train.momentum) << '\n'
        << "seed = " << c.train.seed << '\n'
        << "split = [" << num(c.train.train_fraction) << ", " << num(c.train.validation_fraction) << ", "
        << num(c.train.test_fraction) << "]\n"
        << "gradient_shards = " << c.train.gradient_shards << '\n'
        << "threads = " << c.train.threads << '\n';
    std::vector<double> hidden(c.architecture.hidden.begin(), c.architecture.hidden.end());
    list_line(out, "hidden", hidden, [](double w) { return std::to_string(static_cast<std::size_t>(w)); });
    out << "window = " << c.architecture.window << '\n' << "stride = " << c.architecture.stride << '\n';
    return out.str();
}

std::vector<RoadProfile> make_roads(const RunConfig& config)
{
    std::vector<RoadProfile> roads;
    for (std::size_t r = 0; r < config.road_realizations; ++r) {
        RoadSpec spec = config.road;
        spec.seed = config.road.seed + r;
        roads.push_back(generate_profile(spec));
    }
    return roads;
}

} // namespace axlesim
