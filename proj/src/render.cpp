#include "nervekit/render.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace nervekit {

std::size_t Raster::filled() const { return static_cast<std::size_t>(std::count(on.begin(), on.end(), 1)); }

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b; }
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

Raster raster_2d(const GridIfs& ifs, int m, int width, int height) {
  if (ifs.dim() != 2) throw std::invalid_argument("raster_2d needs d = 2 (use a slice for d >= 3)");
  if (width < 1 || height < 1) throw std::invalid_argument("raster size must be positive");
  Raster r{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0)};
  std::int64_t sx = 1, sy = 1;
  for (int i = 0; i < m; ++i) {
    sx *= ifs.n()[0];
    sy *= ifs.n()[1];
    if (sx * width > (std::int64_t{1} << 50) || sy * height > (std::int64_t{1} << 50))
      throw std::invalid_argument("render depth too large");
  }
  for (const Cell& c : approximation_cells(ifs, 1, m)) {
    const std::int64_t x0 = floor_div(c.corner[0] * width, sx);
    const std::int64_t x1 = ceil_div((c.corner[0] + 1) * width, sx);
    // y grows upwards, rows downwards
    const std::int64_t y0 = floor_div((sy - c.corner[1] - 1) * height, sy);
    const std::int64_t y1 = ceil_div((sy - c.corner[1]) * height, sy);
    for (std::int64_t y = y0; y < y1; ++y)
      std::fill(r.on.begin() + y * width + x0, r.on.begin() + y * width + x1, 1);
  }
  return r;
}

std::string ppm_bytes(const Raster& raster) {
  std::string out = "P6\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
  out.reserve(out.size() + raster.on.size() * 3);
  for (std::uint8_t v : raster.on) {
    const char c = v ? '\0' : '\xff';
    out.append(3, c);
  }
  return out;
}

void write_ppm(const Raster& raster, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  const std::string bytes = ppm_bytes(raster);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace nervekit
