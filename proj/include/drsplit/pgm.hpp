#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drsplit/grid.hpp"

namespace drsplit {

/// Parses a P5 (binary) or P2 (ASCII) PGM. Values are divided by maxval;
/// maxval above 255 means 16-bit big-endian samples in P5.
GridImage parse_pgm(const std::vector<std::uint8_t>& bytes);
GridImage read_pgm(const std::string& path);

/// P5 with header "P5\n<w> <h>\n<maxval>\n"; values clamped to [0, 1] and
/// quantized as floor(v * maxval + 0.5).
std::vector<std::uint8_t> encode_pgm(const GridImage& img, int maxval = 255);
void write_pgm(const GridImage& img, const std::string& path, int maxval = 255);

}  // namespace drsplit
