#include "axlesim/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

constexpr const char* kMagic = "axlesim-checkpoint";

void write_f64(std::ostream& out, double value)
{
    auto bits = std::bit_cast<std::uint64_t>(value);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(bits & 0xFFu);
        bits >>= 8;
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& in)
{
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw IoError("checkpoint truncated in weight data");
    }
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) {
        bits = (bits << 8) | bytes[i];
    }
    return std::bit_cast<double>(bits);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            write_f64(out, m(r, c));
        }
    }
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = read_f64(in);
        }
    }
}

template <typename Array>
void write_array(std::ostream& out, const char* key, const Array& values)
{
    out << key;
    for (double v : values) {
        out << ' ' << csv::format(v);
    }
    out << '\n';
}

template <typename Array>
void read_array(std::istringstream& line, Array& values)
{
    for (auto& v : values) {
        std::string token;
        if (!(line >> token)) {
            throw IoError("checkpoint: too few values in header array");
        }
        v = csv::parse_double(token);
    }
}

} // namespace

void write_checkpoint(std::ostream& out, const MtlNetwork& net)
{
    out << kMagic << ' ' << kCheckpointVersion << '\n';
    out << "head " << (net.head_kind == HeadKind::Dense ? "dense" : "locally_connected") << '\n';
    out << "input_size " << kDesignSize << '\n';
    out << "hidden";
    for (auto w : net.hidden_widths()) {
        out << ' ' << w;
    }
    out << '\n';
    out << "tasks " << net.tasks() << '\n';
    out << "window " << net.window << '\n';
    out << "stride " << net.stride << '\n';
    write_array(out, "input_mean", net.inputs.mean);
    write_array(out, "input_std", net.inputs.stddev);
    write_array(out, "input_min", net.inputs.min);
    write_array(out, "input_max", net.inputs.max);
    write_array(out, "target_min", net.targets.min);
    write_array(out, "target_max", net.targets.max);
    out << "target_band " << csv::format(TargetScaler::kLow) << ' ' << csv::format(TargetScaler::kHigh) << '\n';
    out << "data float64-le row-major\n";
    out << "end\n";

    for (const auto& layer : net.hidden) {
        write_matrix(out, layer.weights);
        write_matrix(out, layer.bias);
    }
    write_matrix(out, net.head.weights);
    write_matrix(out, net.head.bias);
    if (!out) {
        throw IoError("failed writing checkpoint");
    }
}

MtlNetwork read_checkpoint(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("checkpoint is empty");
    }
    {
        std::istringstream first(line);
        std::string magic;
        int version = 0;
        first >> magic >> version;
        if (magic != kMagic) {
            throw IoError("not an axlesim checkpoint");
        }
        if (version != kCheckpointVersion) {
            throw IoError("unsupported checkpoint version " + std::to_string(version));
        }
    }

    MtlNetwork net;
    std::vector<std::size_t> widths;
    std::size_t tasks = 0;
    std::size_t input_size = 0;
    bool ended = false;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "end") {
            ended = true;
            break;
        }
        if (key == "head") {
            std::string kind;
            fields >> kind;
            if (kind == "dense") {
                net.head_kind = HeadKind::Dense;
            } else if (kind == "locally_connected") {
                net.head_kind = HeadKind::LocallyConnected;
            } else {
                throw IoError("checkpoint: unknown head '" + kind + "'");
            }
        } else if (key == "input_size") {
            fields >> input_size;
        } else if (key == "hidden") {
            std::size_t w = 0;
            while (fields >> w) {
                widths.push_back(w);
            }
        } else if (key == "tasks") {
            fields >> tasks;
        } else if (key == "window") {
            fields >> net.window;
        } else if (key == "stride") {
            fields >> net.stride;
        } else if (key == "input_mean") {
            read_array(fields, net.inputs.mean);
        } else if (key == "input_std") {
            read_array(fields, net.inputs.stddev);
        } else if (key == "input_min") {
            read_array(fields, net.inputs.min);
        } else if (key == "input_max") {
            read_array(fields, net.inputs.max);
        } else if (key == "target_min") {
            read_array(fields, net.targets.min);
        } else if (key == "target_max") {
            read_array(fields, net.targets.max);
        }
    }
    if (!ended) {
        throw IoError("checkpoint header not terminated by 'end'");
    }
    if (input_size != kDesignSize || tasks != kTargetSize || widths.empty()) {
        throw IoError("checkpoint shape does not match 6 inputs / 6 tasks");
    }

    std::size_t fan_in = input_size;
    for (auto w : widths) {
        DenseLayer layer;
        layer.weights.resize(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(w));
        layer.bias.resize(static_cast<Eigen::Index>(w));
        read_matrix(in, layer.weights);
        Eigen::MatrixXd bias(1, layer.bias.size());
        read_matrix(in, bias);
        layer.bias = bias.row(0);
        net.hidden.push_back(std::move(layer));
        fan_in = w;
    }
    net.head.weights.resize(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(tasks));
    read_matrix(in, net.head.weights);
    Eigen::MatrixXd bias(1, static_cast<Eigen::Index>(tasks));
    read_matrix(in, bias);
    net.head.bias = bias.row(0);
    try {
        net.head_mask = make_head_mask(net.head_kind, fan_in, tasks, net.window, net.stride);
    } catch (const ValidationError& e) {
        throw IoError(std::string("checkpoint: ") + e.what());
    }
    return net;
}

void save_checkpoint(const std::string& path, const MtlNetwork& net)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_checkpoint(out, net);
}

MtlNetwork load_checkpoint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint '" + path + "'");
    }
    return read_checkpoint(in);
}

} // namespace axlesim
