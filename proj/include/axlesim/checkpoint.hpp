#pragma once

#include <iosfwd>
#include <string>

#include "axlesim/network.hpp"

namespace axlesim {

inline constexpr int kCheckpointVersion = 1;

/// Plain-text header (format version, widths, head layout, scaler constants
/// at 17 significant digits) terminated by a line "end", followed by every
/// weight block row-major as little-endian float64: for each hidden layer its
/// weights then bias, then the head weights and bias.
void write_checkpoint(std::ostream& out, const MtlNetwork& net);
MtlNetwork read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const MtlNetwork& net);
MtlNetwork load_checkpoint(const std::string& path);

} // namespace axlesim
