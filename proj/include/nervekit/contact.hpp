#pragma once

// Exact intersection decisions for pieces f_v(J_k) of grid systems.
//
// Equal-depth cells meet iff their lattice corners differ by at most one per
// axis, so a tuple of touching cells occupies some translate of {0,1}^d.  A
// contact state is the set of occupied points of that unit block, stored as a
// bitmask over the 2^d points (point b has coordinate (b >> k) & 1 on axis
// k), translated so that every axis minimum is 0.

#include "nervekit/ifs.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace nervekit {

struct OffsetState {
  std::vector<std::vector<int>> offsets;  // offsets[0] is the zero vector

  auto operator<=>(const OffsetState&) const = default;
};

// Offsets of equal-depth cells relative to the first; none when some pair is
// more than one lattice step apart on an axis.
std::optional<OffsetState> initial_state(const std::vector<Cell>& cells);

// Every state reachable in one level: o'_p = n * o_p + i_p - i_0 with all
// i_p in `level`, kept when pairwise differences stay in {-1,0,1}^d.
// Sorted and deduplicated.
std::vector<OffsetState> transitions(const OffsetState& state, const std::vector<Digit>& level,
                                     const std::vector<int>& n);

using PointMask = std::uint64_t;

// Canonical mask of a set of lattice points, or none if they do not fit in
// one unit block.  Points must share a dimension <= 6.
std::optional<PointMask> canonical_mask(const std::vector<std::vector<std::int64_t>>& points);

// Coordinates of point `bit` of the unit block.
inline int point_coord(unsigned bit, int axis) { return static_cast<int>((bit >> axis) & 1U); }

struct WordStream {
  std::vector<FlatDigit> prefix;
  std::vector<FlatDigit> cycle;
};

struct Verdict {
  enum class Kind { Nonempty, Empty, Unknown };
  Kind kind = Kind::Unknown;
  // Empty: extra levels below the words after which the outer boxes are
  // disjoint.  Unknown: levels the contact persisted for.
  int depth = 0;
  // Nonempty (when available): continuation after each word.
  std::vector<WordStream> witness;
  std::optional<std::vector<Rational>> point;
};

const char* to_string(Verdict::Kind kind);

// One move of a contact: digits chosen for each ordered point and the
// resulting canonical points, in the same order.
struct ContactMove {
  std::vector<FlatDigit> digits;
  std::vector<unsigned> points;
};

// All refinements of an ordered point set through `level`.
std::vector<ContactMove> contact_moves(const GridIfs& ifs, const LevelSet& level,
                                       const std::vector<unsigned>& points);

// Contact automaton over (level position, canonical mask) for every mask of
// at most `max_arity` points.  Survival is the greatest fixed point of "has a
// surviving successor"; under Truncate the sentinel after the horizon counts
// as surviving.
class ContactAutomaton {
 public:
  ContactAutomaton(const GridIfs& ifs, int max_arity);

  const GridIfs& ifs() const { return ifs_; }
  int max_arity() const { return max_arity_; }
  bool exact() const { return ifs_.tail().kind != TailPolicy::Kind::Truncate; }

  const std::vector<PointMask>& masks() const { return masks_; }
  bool has_mask(PointMask mask) const { return mask_index_.count(mask) != 0; }
  bool alive(int position, PointMask mask) const;
  const std::vector<PointMask>& successors(int position, PointMask mask) const;

  // Number of surviving (position, mask) nodes after each pruning round,
  // starting with the unpruned count.
  const std::vector<std::size_t>& pruning_history() const { return history_; }

  // First number of levels after which the forward frontier from (position,
  // mask) is empty; none when the contact survives.
  std::optional<int> death_depth(int position, PointMask mask) const;

 private:
  std::size_t node(int position, std::size_t mask_idx) const {
    return static_cast<std::size_t>(position - 1) * masks_.size() + mask_idx;
  }

  const GridIfs& ifs_;
  int max_arity_;
  std::vector<PointMask> masks_;
  std::unordered_map<PointMask, std::size_t> mask_index_;
  std::vector<std::vector<PointMask>> succ_;
  std::vector<char> alive_;
  std::vector<int> round_;
  std::vector<std::size_t> history_;
};

// Decides f_{w_0}(J_k) ∩ ... ∩ f_{w_q}(J_k) for words of equal depth starting
// at level j (k = j + depth).  Exact under Full and Periodic tails; Unknown
// is possible only under Truncate.
Verdict decide_tuple_intersection(const GridIfs& ifs, int j, const std::vector<Word>& words);
Verdict decide_tuple_intersection(const ContactAutomaton& automaton, int j,
                                  const std::vector<Word>& words);

}  // namespace nervekit
