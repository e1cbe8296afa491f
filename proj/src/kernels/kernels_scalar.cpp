#include "nervekit/kernels.hpp"

#include <algorithm>

namespace nervekit::kernels {

namespace {

void add_constant(const std::int32_t* in, std::int32_t add, std::int32_t* out,
                  std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = in[i] + add;
}

void neighbor_probe(const std::int32_t* const* coords, const std::int32_t* offset,
                    const ProbeGeometry& g, std::int32_t* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::int32_t idx = 0;
    bool inside = true;
    for (int k = 0; k < g.dim; ++k) {
      const std::int32_t c = coords[k][i] + offset[k];
      if (c < 0 || c >= g.extent[k]) {
        inside = false;
        break;
      }
      idx += c * g.stride[k];
    }
    out[i] = inside ? g.table[idx] : -1;
  }
}

void minmax(const std::int32_t* in, std::size_t count, std::int32_t* lo, std::int32_t* hi) {
  if (count == 0) return;
  auto [mn, mx] = std::minmax_element(in, in + count);
  *lo = *mn;
  *hi = *mx;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{add_constant, neighbor_probe, minmax};
  return t;
}

}  // namespace nervekit::kernels
