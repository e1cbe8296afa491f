#include "nervekit/smith.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace nervekit {

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.size();
  return n;
}

std::vector<BigInt> SmithResult::torsion() const {
  std::vector<BigInt> t;
  for (const BigInt& d : divisors)
    if (d > 1) t.push_back(d);
  return t;
}

namespace {

struct Overflow {};

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }

template <class T>
T absval(const T& v) { return v < 0 ? T(-v) : v; }

template <class T>
using Column = std::map<std::uint32_t, T>;

// Eliminates +-1 pivots; returns the leftover columns (rows renumbered
// densely) and the number of unit pivots removed.
template <class T>
std::pair<std::size_t, std::vector<Column<T>>> eliminate_units(const SparseMatrix& m) {
  std::vector<Column<T>> cols(m.cols);
  std::vector<std::set<std::uint32_t>> row_cols(m.rows);
  for (std::size_t c = 0; c < m.cols; ++c)
    for (auto [r, v] : m.columns[c])
      if (v != 0) {
        cols[c][r] = T(v);
        row_cols[r].insert(static_cast<std::uint32_t>(c));
      }
  std::vector<char> col_done(m.cols, 0);
  std::size_t units = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    // columns in order of increasing length keep fill-in low
    std::vector<std::uint32_t> order;
    for (std::size_t c = 0; c < m.cols; ++c)
      if (!col_done[c] && !cols[c].empty()) order.push_back(static_cast<std::uint32_t>(c));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return cols[a].size() < cols[b].size(); });
    for (std::uint32_t c : order) {
      if (col_done[c] || cols[c].empty()) continue;
      std::uint32_t pivot_row = 0;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      for (const auto& [r, v] : cols[c])
        if (absval(v) == 1 && row_cols[r].size() < best) {
          best = row_cols[r].size();
          pivot_row = r;
        }
      if (best == std::numeric_limits<std::size_t>::max()) continue;
      const T pv = cols[c].at(pivot_row);
      // clear pivot_row from every other column: col -= (entry / pv) * pivot column
      std::vector<std::uint32_t> others(row_cols[pivot_row].begin(), row_cols[pivot_row].end());
      for (std::uint32_t o : others) {
        if (o == c) continue;
        const T factor = mul(cols[o].at(pivot_row), pv);  // pv = +-1, so 1/pv = pv
        for (const auto& [r, v] : cols[c]) {
          T nv = add(cols[o].count(r) ? cols[o][r] : T(0), mul(T(-factor), v));
          if (nv == 0) {
            if (cols[o].erase(r)) row_cols[r].erase(o);
          } else {
            if (!cols[o].count(r)) row_cols[r].insert(o);
            cols[o][r] = nv;
          }
        }
      }
      for (const auto& [r, v] : cols[c]) row_cols[r].erase(c);
      cols[c].clear();
      col_done[c] = 1;
      ++units;
      progress = true;
    }
  }
  std::vector<Column<T>> rest;
  for (std::size_t c = 0; c < m.cols; ++c)
    if (!col_done[c] && !cols[c].empty()) rest.push_back(std::move(cols[c]));
  return {units, std::move(rest)};
}

template <class T>
T floor_div(const T& a, const T& b) {
  T q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

// Dense Smith form; returns the nonzero diagonal, normalized to a
// divisibility chain.
template <class T>
std::vector<T> dense_smith(std::vector<std::vector<T>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<T> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || absval(a[i][j]) < absval(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return diag;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const T q = floor_div(a[i][t], a[t][t]);
        for (std::size_t j = t; j < cols; ++j) a[i][j] = add(a[i][j], mul(T(-q), a[t][j]));
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const T q = floor_div(a[t][j], a[t][t]);
        for (std::size_t i = t; i < rows; ++i) a[i][j] = add(a[i][j], mul(T(-q), a[i][t]));
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // pivot must divide the rest; otherwise fold the offending row in
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] = add(a[t][j], a[bad][j]);
    }
    diag.push_back(absval(a[t][t]));
  }
  return diag;
}

template <class T>
SmithResult run(const SparseMatrix& m) {
  auto [units, rest] = eliminate_units<T>(m);
  SmithResult result;
  result.rank = units;
  result.divisors.assign(units, BigInt(1));
  if (rest.empty()) return result;
  std::map<std::uint32_t, std::size_t> row_id;
  for (const auto& c : rest)
    for (const auto& [r, v] : c) row_id.emplace(r, 0);
  std::size_t next = 0;
  for (auto& [r, id] : row_id) id = next++;
  if (row_id.size() * rest.size() > (std::size_t{1} << 26))
    throw std::runtime_error("residual matrix too large for dense Smith reduction");
  std::vector<std::vector<T>> dense(row_id.size(), std::vector<T>(rest.size(), T(0)));
  for (std::size_t c = 0; c < rest.size(); ++c)
    for (const auto& [r, v] : rest[c]) dense[row_id[r]][c] = v;
  for (const T& d : dense_smith(std::move(dense))) {
    result.divisors.push_back(BigInt(d));
    ++result.rank;
  }
  std::sort(result.divisors.begin(), result.divisors.end());
  return result;
}

}  // namespace

SmithResult smith_ranks(const SparseMatrix& m) {
  try {
    return run<std::int64_t>(m);
  } catch (const Overflow&) {
    SmithResult r = run<BigInt>(m);
    r.big = true;
    return r;
  }
}

std::size_t rank_over_q(const SparseMatrix& m) { return smith_ranks(m).rank; }

}  // namespace nervekit
