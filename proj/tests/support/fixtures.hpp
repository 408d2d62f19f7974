#pragma once

#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "axlesim/dataset.hpp"
#include "axlesim/road.hpp"
#include "axlesim/vehicle.hpp"

namespace axlesim::support {

/// Valid vehicle with independently drawn per-axle values and sorted offsets.
VehicleParams random_vehicle(std::mt19937_64& rng, std::size_t axles);

/// Flat road with one raised-cosine bump of `height` on [start, start + width].
RoadProfile bump_profile(double length, double step, double start, double width, double height);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

/// Rows whose targets are smooth closed-form functions of the inputs, spread
/// +/-30% around the reference design. Cheap stand-in for simulated data.
std::vector<DatasetRow> synthetic_rows(std::size_t count, std::uint64_t seed);

} // namespace axlesim::support
