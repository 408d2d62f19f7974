#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "axlesim/dataset.hpp"
#include "axlesim/road.hpp"
#include "axlesim/simulation.hpp"
#include "axlesim/train_config.hpp"
#include "axlesim/vehicle.hpp"

namespace axlesim {

/// Everything a run needs, resolved from a config file plus defaults.
struct RunConfig {
    VehicleParams vehicle = reference_vehicle();
    RoadSpec road;
    std::size_t road_realizations = 1; // metrics averaged over seeds seed, seed+1, ...
    SimConfig sim;
    SamplingSpec sampling;
    TrainConfig train;
    Architecture architecture;
};

/// Parses the TOML-style format:
///
///   [vehicle]            # all keys required
///   n_axles = 4
///   m_s = 20337.8
///   k_s = [1.2e5, 1.3e5, 1.3e5, 1.2e5]   # lists override per axle
///   ...
///   [road] [sim] [sampling] [train]       # optional, defaults apply
///
/// Unknown keys and missing vehicle keys raise ValidationError naming the key.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text form that parse_config reads back to an identical RunConfig.
std::string to_config_text(const RunConfig& config);

/// Road profiles for the configured realizations (consecutive seeds).
std::vector<RoadProfile> make_roads(const RunConfig& config);

} // namespace axlesim
