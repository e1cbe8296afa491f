#pragma once

#include "nervekit/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace nervekit {

// Column-major sparse integer matrix; each column sorted by row.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}
  std::size_t nonzeros() const;
};

struct SmithResult {
  std::size_t rank = 0;
  std::vector<BigInt> divisors;  // nonzero invariant factors, d_1 | d_2 | ...
  bool big = false;              // finished in arbitrary precision

  std::vector<BigInt> torsion() const;  // divisors > 1
};

// Unit pivots are eliminated sparsely first (fewest entries in row times
// column); the remainder goes through dense Smith reduction, in 64-bit
// arithmetic with a restart in arbitrary precision on overflow.
SmithResult smith_ranks(const SparseMatrix& m);

// Rank over Q.
std::size_t rank_over_q(const SparseMatrix& m);

}  // namespace nervekit
