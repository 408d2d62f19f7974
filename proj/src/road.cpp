#include "axlesim/road.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "axlesim/csv.hpp"
#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

constexpr std::array<const char*, 8> kClassNames = {"A", "B", "C", "D", "E", "F", "G", "H"};

} // namespace

std::string to_string(IsoClass iso_class)
{
    return kClassNames[static_cast<std::size_t>(iso_class)];
}

IsoClass parse_iso_class(const std::string& text)
{
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (text == kClassNames[i]) {
            return static_cast<IsoClass>(i);
        }
    }
    throw ValidationError("unknown ISO 8608 class '" + text + "' (expected A-H)");
}

double reference_psd(IsoClass iso_class)
{
    // ISO 8608 geometric means: 16e-6 m^3 for class A, x4 per class.
    return 16e-6 * std::pow(4.0, static_cast<double>(iso_class));
}

double displacement_psd(double reference, double spatial_frequency)
{
    const double ratio = spatial_frequency / kReferenceSpatialFrequency;
    return reference / (ratio * ratio);
}

void RoadSpec::validate() const
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("road length must be positive");
    }
    if (!(spatial_step > 0.0) || spatial_step > length) {
        throw ValidationError("road spatial_step must be positive and not exceed the length");
    }
    if (!(min_frequency > 0.0)) {
        throw ValidationError("road min_frequency must be positive");
    }
    if (!(max_frequency >= min_frequency)) {
        throw ValidationError("road max_frequency must not be below min_frequency");
    }
    if (spatial_step > 0.5 / max_frequency) {
        throw ValidationError("road spatial_step violates Nyquist: step must be <= 1/(2 max_frequency)");
    }
    if (components == 0) {
        throw ValidationError("road components must be at least 1");
    }
    if (reference_psd_override && !(*reference_psd_override >= 0.0)) {
        throw ValidationError("road reference PSD override must be non-negative");
    }
}

double RoadSpec::effective_reference_psd() const
{
    return reference_psd_override ? *reference_psd_override : reference_psd(iso_class);
}

std::size_t sample_count(double length, double spatial_step)
{
    return static_cast<std::size_t>(std::floor(length / spatial_step + 1e-9)) + 1;
}

double RoadProfile::height_at(double position) const
{
    if (!(position >= 0.0) || position > length) {
        std::ostringstream msg;
        msg << "road position " << position << " m outside [0, " << length << "] m";
        throw RangeError(msg.str());
    }
    const double scaled = position / spatial_step;
    auto index = static_cast<std::size_t>(scaled);
    if (index + 1 >= elevations.size()) {
        return elevations.back();
    }
    const double frac = scaled - static_cast<double>(index);
    if (frac == 0.0) {
        return elevations[index];
    }
    return elevations[index] + frac * (elevations[index + 1] - elevations[index]);
}

RoadProfile generate_profile(const RoadSpec& spec)
{
    spec.validate();

    RoadProfile profile;
    profile.spatial_step = spec.spatial_step;
    profile.length = spec.length;
    profile.iso_class = spec.iso_class;
    profile.seed = spec.seed;
    profile.elevations.assign(sample_count(spec.length, spec.spatial_step), 0.0);

    const std::size_t count = spec.components;
    const double reference = spec.effective_reference_psd();
    const double ratio = std::pow(spec.max_frequency / spec.min_frequency, 1.0 / static_cast<double>(count));

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

    std::vector<double> wavenumber(count), amplitude(count), phase(count);
    double lower = spec.min_frequency;
    for (std::size_t j = 0; j < count; ++j) {
        const double upper = (j + 1 == count) ? spec.max_frequency : lower * ratio;
        const double centre = std::sqrt(lower * upper);
        const double band = upper - lower;
        wavenumber[j] = 2.0 * std::numbers::pi * centre;
        amplitude[j] = std::sqrt(2.0 * displacement_psd(reference, centre) * band);
        phase[j] = phase_dist(rng);
        lower = upper;
    }

    for (std::size_t k = 0; k < profile.elevations.size(); ++k) {
        const double x = static_cast<double>(k) * spec.spatial_step;
        double h = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            h += amplitude[j] * std::cos(wavenumber[j] * x + phase[j]);
        }
        profile.elevations[k] = h;
    }
    return profile;
}

RoadProfile flat_profile(double length, double spatial_step)
{
    if (!(length > 0.0) || !(spatial_step > 0.0)) {
        throw ValidationError("flat profile needs positive length and step");
    }
    RoadProfile profile;
    profile.spatial_step = spatial_step;
    profile.length = length;
    profile.elevations.assign(sample_count(length, spatial_step), 0.0);
    return profile;
}

void write_profile_csv(std::ostream& out, const RoadProfile& profile)
{
    out << "# iso_class=" << to_string(profile.iso_class) << " seed=" << profile.seed
        << " step=" << csv::format(profile.spatial_step) << " length=" << csv::format(profile.length)
        << '\n';
    out << "position_m,height_m\n";
    for (std::size_t k = 0; k < profile.elevations.size(); ++k) {
        out << csv::format(static_cast<double>(k) * profile.spatial_step) << ','
            << csv::format(profile.elevations[k]) << '\n';
    }
    if (!out) {
        throw IoError("failed writing road profile CSV");
    }
}

RoadProfile read_profile_csv(std::istream& in)
{
    RoadProfile profile;
    std::string line;
    bool have_step = false;
    bool have_length = false;

    if (!std::getline(in, line) || line.empty() || line[0] != '#') {
        throw IoError("road CSV: missing '#' metadata line");
    }
    std::istringstream meta(line.substr(1));
    std::string token;
    while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw IoError("road CSV: malformed metadata token '" + token + "'");
        }
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "iso_class") {
            profile.iso_class = parse_iso_class(value);
        } else if (key == "seed") {
            const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), profile.seed);
            if (ec != std::errc() || end != value.data() + value.size()) {
                throw IoError("road CSV: bad seed '" + value + "'");
            }
        } else if (key == "step") {
            profile.spatial_step = csv::parse_double(value);
            have_step = true;
        } else if (key == "length") {
            profile.length = csv::parse_double(value);
            have_length = true;
        }
    }
    if (!have_step || !(profile.spatial_step > 0.0)) {
        throw IoError("road CSV: metadata must carry a positive step");
    }
    if (!std::getline(in, line) || csv::trim(line) != "position_m,height_m") {
        throw IoError("road CSV: expected header 'position_m,height_m'");
    }
    while (std::getline(in, line)) {
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 2) {
            throw IoError("road CSV: expected two columns in line '" + line + "'");
        }
        profile.elevations.push_back(csv::parse_double(fields[1]));
    }
    if (profile.elevations.empty()) {
        throw IoError("road CSV: no samples");
    }
    if (!have_length) {
        profile.length = static_cast<double>(profile.elevations.size() - 1) * profile.spatial_step;
    }
    return profile;
}

} // namespace axlesim
