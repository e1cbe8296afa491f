#pragma once

// Non-autonomous grid systems on [0,1]^d.
//
// A digit is an index tuple (i_1..i_d) with 0 <= i_k < n_k.  Internally a
// digit is stored as its flat mixed-radix index with axis 0 most
// significant, so flat order coincides with lexicographic tuple order.
// Levels are numbered from 1 as in the usual coding convention.

#include "nervekit/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nervekit {

using Digit = std::vector<int>;
using FlatDigit = std::uint32_t;

struct TailPolicy {
  enum class Kind { Full, Periodic, Truncate };
  Kind kind = Kind::Full;
  int period = 0;

  static TailPolicy full() { return {Kind::Full, 0}; }
  static TailPolicy periodic(int p) { return {Kind::Periodic, p}; }
  static TailPolicy truncate() { return {Kind::Truncate, 0}; }

  bool operator==(const TailPolicy&) const = default;
};

std::string to_string(TailPolicy::Kind kind);

// Subset of the alphabet I, kept both as a sorted list and a membership map.
class LevelSet {
 public:
  LevelSet() = default;
  LevelSet(std::vector<FlatDigit> digits, std::size_t alphabet_size);

  static LevelSet full(std::size_t alphabet_size);

  bool contains(FlatDigit digit) const {
    return digit < member_.size() && member_[digit] != 0;
  }
  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  const std::vector<FlatDigit>& digits() const { return digits_; }
  // Position of `digit` in the sorted list; digit must be a member.
  std::uint32_t rank_of(FlatDigit digit) const { return rank_[digit]; }

  bool operator==(const LevelSet& other) const { return digits_ == other.digits_; }

 private:
  std::vector<FlatDigit> digits_;
  std::vector<std::uint8_t> member_;
  std::vector<std::uint32_t> rank_;
};

class GridIfs {
 public:
  // Throws std::invalid_argument on an empty level, an out-of-range digit,
  // a bad subdivision count or an invalid period.
  GridIfs(std::vector<int> n, const std::vector<std::vector<Digit>>& levels,
          TailPolicy tail);
  GridIfs(std::vector<int> n, std::vector<LevelSet> levels, TailPolicy tail);

  int dim() const { return static_cast<int>(n_.size()); }
  const std::vector<int>& n() const { return n_; }
  int horizon() const { return static_cast<int>(levels_.size()); }
  const TailPolicy& tail() const { return tail_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  const std::vector<LevelSet>& stored_levels() const { return levels_; }

  // c = max_k 1/n_k
  Rational contraction() const;

  FlatDigit flatten(const Digit& digit) const;
  Digit unflatten(FlatDigit digit) const;
  int component(FlatDigit digit, int axis) const { return components_[digit * n_.size() + axis]; }

  // Level positions fold every level t >= 1 onto a finite graph:
  // 1..H are the stored levels; beyond the horizon Full and Truncate map to
  // the sentinel H+1, Periodic folds back into the last `period` levels.
  int position_of(int level) const;
  int next_position(int position) const;
  int position_count() const { return horizon() + 1; }
  // nullptr for the Truncate sentinel (unknown levels).
  const LevelSet* level_at_position(int position) const;
  const LevelSet* level(int t) const { return level_at_position(position_of(t)); }
  bool level_known(int t) const { return level(t) != nullptr; }

 private:
  void validate_and_index();

  std::vector<int> n_;
  std::vector<LevelSet> levels_;
  TailPolicy tail_;
  std::size_t alphabet_size_ = 0;
  std::vector<int> components_;
  LevelSet full_;
};

struct Word {
  int start_level = 1;
  std::vector<FlatDigit> digits;

  int depth() const { return static_cast<int>(digits.size()); }
  bool operator==(const Word&) const = default;
};

// Closed lattice box prod_k [a_k, a_k + 1] / n_k^depth.
struct Cell {
  int depth = 0;
  std::vector<std::int64_t> corner;

  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

// Throws std::invalid_argument when a digit is missing from its level or
// the level is unknown (Truncate tail beyond the horizon).
Cell word_cell(const GridIfs& ifs, const Word& word);

// Cells of all words of length m starting at level j, in lexicographic word
// order.  Throws when some level j..j+m-1 is unknown.
std::vector<Cell> approximation_cells(const GridIfs& ifs, int j, int m);

// prod_{t=j}^{j+m-1} #I^(t), saturating at UINT64_MAX.
std::uint64_t word_count(const GridIfs& ifs, int j, int m);

struct LevelSample {
  int r = 0;
  std::uint64_t seed = 0;
  std::vector<LevelSet> levels;
};

// `count` independent uniform draws from P_r(I).
LevelSample sample_levels(const std::vector<int>& n, int r, int count, std::uint64_t seed);

// Corner given as a 0/1 vector.  True iff the constant coding of that corner
// stays inside every level from j on.
bool corner_membership(const GridIfs& ifs, int j, const std::vector<int>& corner);

// True iff no J_j (j >= 1) contains a corner of the cube.  For d != 2 all 2^d
// corners are checked, which generalizes the planar four-corner condition.
bool no_corner_check(const GridIfs& ifs);
inline bool no_corner_is_generalized(const GridIfs& ifs) { return ifs.dim() != 2; }

// Smallest digit of `axis` (0-based) absent from the projection of `level`.
std::optional<int> detect_cut(const LevelSet& level, const GridIfs& ifs, int axis);
std::optional<int> detect_cut(const std::vector<Digit>& level, const std::vector<int>& n,
                              int axis);

// Eventually periodic stream of axis digits; value = 0.p_1 p_2 ... (base n)
// followed by the cycle repeated forever.
struct AxisStream {
  std::vector<int> prefix;
  std::vector<int> cycle;
  bool approximate = false;  // Truncate tail: levels beyond horizon assumed full
};

Rational evaluate_stream(const AxisStream& stream, int base);

struct CoreLineWitness {
  int axis = 0;                     // direction of the segment
  std::vector<AxisStream> streams;  // one per axis; entry `axis` is empty
  std::vector<Rational> coords;     // x*_l for l != axis (entry `axis` = 0)
};

// Segment {x*} x [0,1] x {x*} inside J_j along `axis`, built greedily from
// the complement of the hat-projected deletions.  Returns nullopt unless
// #(I \ I^(t)) < prod_{l != axis} n_l for every t >= j.
std::optional<CoreLineWitness> core_line_witness(const GridIfs& ifs, int j, int axis);

struct CoreSlabWitness {
  int axis = 0;
  AxisStream stream;
  Rational value;
  bool hypothesis_holds = false;
};

// Point x of the one-dimensional set J~ with [0,1]^{axis} x {x} x [0,1]^.. in
// J_j.  With require_hypothesis the condition #(I \ I^(t)) < n_axis
// gates the result; otherwise any digit left unblocked at every level works.
std::optional<CoreSlabWitness> core_slab_witness(const GridIfs& ifs, int j, int axis,
                                                 bool require_hypothesis = true);

}  // namespace nervekit
