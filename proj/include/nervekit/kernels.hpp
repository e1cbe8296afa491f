#pragma once

// Data-parallel lattice loops, each with a scalar reference and an AVX2
// variant.  The variant is picked once at startup; NERVEKIT_ISA=scalar forces
// the reference path.

#include <cstddef>
#include <cstdint>

namespace nervekit::kernels {

enum class Isa { Scalar, Avx2 };

struct ProbeGeometry {
  int dim = 0;
  const std::int32_t* extent = nullptr;  // per axis
  const std::int32_t* stride = nullptr;  // per axis, into the dense table
  const std::int32_t* table = nullptr;   // vertex id or -1
};

struct Table {
  // out[i] = in[i] + add
  void (*add_constant)(const std::int32_t* in, std::int32_t add, std::int32_t* out,
                       std::size_t count);
  // out[i] = table[sum_k (coords[k][i] + offset[k]) * stride[k]] when every
  // shifted coordinate lies in [0, extent[k]), else -1.
  void (*neighbor_probe)(const std::int32_t* const* coords, const std::int32_t* offset,
                         const ProbeGeometry& geometry, std::int32_t* out, std::size_t count);
  // lo/hi over in[0..count); untouched when count == 0.
  void (*minmax)(const std::int32_t* in, std::size_t count, std::int32_t* lo, std::int32_t* hi);
};

const Table& scalar_table();
const Table& avx2_table();

bool avx2_available();
Isa active_isa();
const Table& table_for(Isa isa);
inline const Table& active() { return table_for(active_isa()); }

const char* to_string(Isa isa);

}  // namespace nervekit::kernels
