#pragma once

// Non-autonomous systems of rational affine maps x -> a x + b on [0,1].
// Three-valued: Empty by separated outer intervals, Nonempty by a common
// eventually periodic point or by a covered level, Unknown otherwise.

#include "nervekit/contact.hpp"
#include "nervekit/rational.hpp"

#include <string>
#include <vector>

namespace nervekit {

struct AffineMap {
  Rational slope;
  Rational offset;

  Rational operator()(const Rational& x) const { return slope * x + offset; }
};

struct Interval {
  Rational lo, hi;
};

class AffineSystem1D {
 public:
  // levels[t-1] holds the maps of level t; beyond the stored levels the last
  // `period` levels repeat.  Throws when a slope is outside (0,1) or a map
  // leaves [0,1].
  AffineSystem1D(std::vector<std::vector<AffineMap>> levels, int period,
                 std::vector<std::string> symbols = {});

  int horizon() const { return static_cast<int>(levels_.size()); }
  int period() const { return period_; }
  int position_of(int level) const;
  const std::vector<AffineMap>& level(int t) const { return levels_[position_of(t) - 1]; }
  std::size_t level_size(int t) const { return level(t).size(); }
  // Symbol name of map i (defaults to a, b, c, ...).
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::vector<AffineMap>>& stored_levels() const { return levels_; }

  // f_w(X) for a word starting at level j.
  Interval word_interval(int j, const std::vector<FlatDigit>& word) const;

 private:
  std::vector<std::vector<AffineMap>> levels_;
  int period_;
  std::vector<std::string> symbols_;
};

struct AffineBudget {
  int depth = 10;   // outer-interval refinement levels
  int prefix = 4;   // eventually periodic codings: prefix length
  int cycle = 2;    // cycle length in multiples of the period
};

// Monotone check of J_t = [0,1]: some block length L (a multiple of the
// period, t in the periodic part) whose composites from t cover [0,1].
bool covers_unit_interval(const AffineSystem1D& sys, int t, int max_block);

Verdict affine1d_oracle(const AffineSystem1D& sys, int j, const std::vector<std::vector<FlatDigit>>& words,
                        const AffineBudget& budget = {});

}  // namespace nervekit
