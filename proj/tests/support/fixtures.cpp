#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace axlesim::support {

VehicleParams random_vehicle(std::mt19937_64& rng, std::size_t axles)
{
    auto draw = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    VehicleParams v;
    v.axle_count = axles;
    v.sprung_mass = draw(500.0, 40000.0);
    v.pitch_inertia = draw(100.0, 1e6);
    for (std::size_t i = 0; i < axles; ++i) {
        v.unsprung_masses.push_back(draw(20.0, 1000.0));
        v.spring_coeffs.push_back(draw(1e4, 5e5));
        v.damping_coeffs.push_back(draw(500.0, 5e4));
        v.tire_stiffnesses.push_back(draw(1e5, 2e6));
        v.axle_offsets.push_back(draw(-4.0, 4.0));
    }
    std::sort(v.axle_offsets.begin(), v.axle_offsets.end(), std::greater<>());
    // keep axles strictly apart
    for (std::size_t i = 1; i < axles; ++i) {
        v.axle_offsets[i] = std::min(v.axle_offsets[i], v.axle_offsets[i - 1] - 0.1);
    }
    return v;
}

RoadProfile bump_profile(double length, double step, double start, double width, double height)
{
    RoadProfile p = flat_profile(length, step);
    for (std::size_t i = 0; i < p.elevations.size(); ++i) {
        const double x = static_cast<double>(i) * step - start;
        if (x >= 0.0 && x <= width) {
            p.elevations[i] = 0.5 * height * (1.0 - std::cos(2.0 * std::numbers::pi * x / width));
        }
    }
    return p;
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("axlesim_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<DatasetRow> synthetic_rows(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const DesignVector base = design_of(reference_vehicle());
    std::vector<DatasetRow> rows(count);
    for (auto& row : rows) {
        DesignVector r{};
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            r[p] = u(rng);
            row.inputs[p] = base[p] * (1.0 + 0.3 * r[p]);
        }
        row.targets[0] = 1.0 + 0.4 * r[2] - 0.3 * r[0] + 0.05 * r[3] * r[3];
        row.targets[1] = 2.0 + 0.5 * r[1] * r[5] - 0.4 * r[1];
        row.targets[2] = 0.5 + 0.1 * std::sin(1.5 * r[5]) + 0.05 * r[2];
        row.targets[3] = 3.0 - 0.6 * r[3] + 0.2 * r[4];
        row.targets[4] = 10.0 + 2.0 * r[4] + r[0] * r[4];
        row.targets[5] = 1.0 + 0.1 * (r[0] + r[1] + r[2] + r[3] + r[4] + r[5]);
    }
    return rows;
}

} // namespace axlesim::support
