#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace axlesim {

/// ISO 8608 road roughness classes, A (very good) to H (very poor).
enum class IsoClass { A, B, C, D, E, F, G, H };

std::string to_string(IsoClass iso_class);
IsoClass parse_iso_class(const std::string& text);

/// Reference spatial frequency n0 of the displacement PSD, cycles/m.
inline constexpr double kReferenceSpatialFrequency = 0.1;

/// Geometric-mean displacement PSD G_d(n0) for a class, m^3.
double reference_psd(IsoClass iso_class);

/// Displacement PSD G_d(n) = G_d(n0) (n/n0)^-2.
double displacement_psd(double reference, double spatial_frequency);

struct RoadSpec {
    IsoClass iso_class = IsoClass::C;
    double length = 250.0;       // m
    double spatial_step = 0.05;  // m
    std::uint64_t seed = 1;
    double min_frequency = 0.011; // cycles/m
    double max_frequency = 2.83;  // cycles/m
    std::size_t components = 256;
    /// Replaces the class value of G_d(n0) when set.
    std::optional<double> reference_psd_override;

    void validate() const;
    double effective_reference_psd() const;
};

struct RoadProfile {
    std::vector<double> elevations; // m
    double spatial_step = 0.05;     // m
    double length = 0.0;            // m
    IsoClass iso_class = IsoClass::C;
    std::uint64_t seed = 0;

    /// Linear interpolation; throws RangeError outside [0, length].
    double height_at(double position) const;
};

/// Number of samples floor(length / step) + 1, tolerant to representation error in the ratio.
std::size_t sample_count(double length, double spatial_step);

/// Superposition of N log-spaced cosines with seeded uniform phases.
RoadProfile generate_profile(const RoadSpec& spec);

/// Flat (all-zero) profile, used for equilibrium checks.
RoadProfile flat_profile(double length, double spatial_step);

void write_profile_csv(std::ostream& out, const RoadProfile& profile);
RoadProfile read_profile_csv(std::istream& in);

} // namespace axlesim
