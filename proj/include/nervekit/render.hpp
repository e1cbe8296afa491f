#pragma once

#include "nervekit/ifs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nervekit {

// Row 0 is the top edge (y = 1).
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> on;  // row-major

  bool at(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t filled() const;
};

// Union of the depth-m cells of J_1; cell [a, a+1]/n^m covers pixel columns
// floor(a W / n^m) .. ceil((a+1) W / n^m) - 1, rows likewise after flipping y.
Raster raster_2d(const GridIfs& ifs, int m, int width, int height);

// P6, 8-bit, black on white.
std::string ppm_bytes(const Raster& raster);
void write_ppm(const Raster& raster, const std::string& path);

}  // namespace nervekit
