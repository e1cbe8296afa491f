#pragma once

#include "nervekit/affine1d.hpp"
#include "nervekit/json_io.hpp"
#include "nervekit/nerve.hpp"

#include <set>
#include <string>
#include <utility>

namespace fixtures {

using namespace nervekit;

inline std::string data_path(const std::string& name) { return std::string(NERVEKIT_SOURCE_DIR) + "/data/" + name; }

inline AffineSystem1D two_generator() { return affine_from_json(read_json_file(data_path("two_generator.json"))); }
inline GridIfs corner_free() { return grid_from_json(read_json_file(data_path("corner_free_2x2.json"))); }
inline GridIfs carpet() { return grid_from_json(read_json_file(data_path("carpet.json"))); }

inline GridIfs product_cantor() {
  std::vector<Digit> keep{{0, 0}, {0, 2}, {2, 0}, {2, 2}};
  return GridIfs({3, 3}, std::vector<std::vector<Digit>>{keep}, TailPolicy::periodic(1));
}

inline GridIfs full_grid(std::vector<int> n) {
  std::size_t a = 1;
  for (int v : n) a *= v;
  return GridIfs(n, std::vector<LevelSet>{LevelSet::full(a)}, TailPolicy::full());
}

// Edges as unordered label pairs.
inline std::set<std::pair<std::string, std::string>> edge_labels(const Nerve& nerve) {
  std::set<std::pair<std::string, std::string>> out;
  const auto& e = nerve.complex.flat(1);
  for (std::size_t i = 0; i + 1 < e.size(); i += 2) {
    std::string a = nerve.labels.at(e[i]), b = nerve.labels.at(e[i + 1]);
    if (b < a) std::swap(a, b);
    out.emplace(a, b);
  }
  return out;
}

}  // namespace fixtures
