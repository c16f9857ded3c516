#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bkiexp/grid_map.hpp"

namespace bkiexp {

enum class PgmFormat { Ascii /* P2 */, Binary /* P5 */ };

/// Pixel thresholds on the 0..255 scale: >= 205 is free, everything else is
/// treated as occupied (unknown is not a ground-truth state).
inline constexpr int kPgmFreeThreshold = 205;
inline constexpr int kPgmOccupiedThreshold = 50;

/// One pixel per cell; image row 0 is the top of the map (max y).
GroundTruthGrid parse_pgm(std::string_view bytes, double resolution_m);
GroundTruthGrid read_pgm(const std::filesystem::path& path, double resolution_m);

std::string encode_pgm(const GroundTruthGrid& truth, PgmFormat format = PgmFormat::Binary);
void write_pgm(const GroundTruthGrid& truth, const std::filesystem::path& path,
               PgmFormat format = PgmFormat::Binary);

}  // namespace bkiexp
