#include "nervekit/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace nervekit::kernels {

bool avx2_available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("NERVEKIT_ISA");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

const Table& table_for(Isa isa) {
  if (isa == Isa::Avx2 && avx2_available()) return avx2_table();
  return scalar_table();
}

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace nervekit::kernels
