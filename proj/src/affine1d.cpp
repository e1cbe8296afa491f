#include "nervekit/affine1d.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace nervekit {

AffineSystem1D::AffineSystem1D(std::vector<std::vector<AffineMap>> levels, int period,
                               std::vector<std::string> symbols)
    : levels_(std::move(levels)), period_(period), symbols_(std::move(symbols)) {
  if (levels_.empty()) throw std::invalid_argument("affine system needs at least one level");
  if (period_ < 1 || period_ > horizon()) throw std::invalid_argument("period must lie in [1, horizon]");
  std::size_t widest = 0;
  for (std::size_t t = 0; t < levels_.size(); ++t) {
    if (levels_[t].empty()) throw std::invalid_argument("empty level " + std::to_string(t + 1));
    for (const AffineMap& f : levels_[t]) {
      if (f.slope <= 0 || f.slope >= 1) throw std::invalid_argument("slope outside (0,1)");
      if (f.offset < 0 || f.offset > 1 - f.slope) throw std::invalid_argument("map leaves [0,1]");
    }
    widest = std::max(widest, levels_[t].size());
  }
  for (std::size_t i = symbols_.size(); i < widest; ++i)
    symbols_.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
}

int AffineSystem1D::position_of(int level) const {
  if (level < 1) throw std::invalid_argument("levels are numbered from 1");
  if (level <= horizon()) return level;
  return horizon() - period_ + 1 + (level - horizon() - 1) % period_;
}

Interval AffineSystem1D::word_interval(int j, const std::vector<FlatDigit>& word) const {
  Rational lo = 0, hi = 1;
  for (std::size_t t = word.size(); t-- > 0;) {
    const auto& maps = level(j + static_cast<int>(t));
    if (word[t] >= maps.size()) throw std::invalid_argument("symbol not in level");
    lo = maps[word[t]](lo);
    hi = maps[word[t]](hi);
  }
  return {lo, hi};
}

namespace {

using Union = std::vector<Interval>;

Union merged(Union parts) {
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Union out;
  for (Interval& iv : parts) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = iv.hi;
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

Union intersect(const Union& a, const Union& b) {
  Union out;
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    const Rational& lo = std::max(a[i].lo, b[k].lo);
    const Rational& hi = std::min(a[i].hi, b[k].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[k].hi) ++i; else ++k;
  }
  return out;
}

// Union of all depth-e images of [0,1] starting at level t.
Union outer(const AffineSystem1D& sys, int t, int e) {
  if (e == 0) return {{Rational(0), Rational(1)}};
  const Union inner = outer(sys, t + 1, e - 1);
  Union parts;
  for (const AffineMap& f : sys.level(t))
    for (const Interval& iv : inner) parts.push_back({f(iv.lo), f(iv.hi)});
  return merged(std::move(parts));
}

Union image(const AffineSystem1D& sys, int j, const std::vector<FlatDigit>& word, const Union& u) {
  Union out;
  for (const Interval& iv : u) {
    Rational lo = iv.lo, hi = iv.hi;
    for (std::size_t t = word.size(); t-- > 0;) {
      const AffineMap& f = sys.level(j + static_cast<int>(t))[word[t]];
      lo = f(lo);
      hi = f(hi);
    }
    out.push_back({lo, hi});
  }
  return out;
}

bool is_unit(const Union& u) { return u.size() == 1 && u[0].lo == 0 && u[0].hi == 1; }

Rational apply(const AffineSystem1D& sys, int j, const std::vector<FlatDigit>& word, Rational x) {
  for (std::size_t t = word.size(); t-- > 0;) x = sys.level(j + static_cast<int>(t))[word[t]](x);
  return x;
}

// Every word of length `len` from level t, in lexicographic order.
std::vector<std::vector<FlatDigit>> all_words(const AffineSystem1D& sys, int t, int len) {
  std::vector<std::vector<FlatDigit>> out{{}};
  for (int s = 0; s < len; ++s) {
    std::vector<std::vector<FlatDigit>> next;
    for (const auto& w : out)
      for (FlatDigit i = 0; i < sys.level_size(t + s); ++i) {
        next.push_back(w);
        next.back().push_back(i);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

bool covers_unit_interval(const AffineSystem1D& sys, int t, int max_block) {
  const int periodic_from = sys.horizon() - sys.period() + 1;
  // A block repeating forever from t' with full image gives J_{t'} = [0,1].
  auto block_covers = [&](int from) {
    for (int len = sys.period(); len <= max_block; len += sys.period())
      if (is_unit(outer(sys, from, len))) return true;
    return false;
  };
  const int first = std::max(t, periodic_from);
  for (int from = first; from < first + sys.period(); ++from) {
    if (!block_covers(from)) continue;
    if (from == t || is_unit(outer(sys, t, from - t))) return true;
  }
  return false;
}

Verdict affine1d_oracle(const AffineSystem1D& sys, int j, const std::vector<std::vector<FlatDigit>>& words,
                        const AffineBudget& budget) {
  if (words.empty()) throw std::invalid_argument("empty tuple");
  const std::size_t m = words[0].size();
  for (const auto& w : words) {
    if (w.size() != m) throw std::invalid_argument("words of different depth");
    sys.word_interval(j, w);
  }
  const int k = j + static_cast<int>(m);
  const int max_block = std::max(2 * sys.period(), 8);

  Verdict verdict;
  for (int e = 0; e <= budget.depth; ++e) {
    const Union base = outer(sys, k, e);
    Union common = image(sys, j, words[0], base);
    for (std::size_t p = 1; p < words.size() && !common.empty(); ++p)
      common = intersect(common, merged(image(sys, j, words[p], base)));
    if (common.empty()) {
      verdict.kind = Verdict::Kind::Empty;
      verdict.depth = e;
      return verdict;
    }
    if (covers_unit_interval(sys, k + e, max_block)) {
      verdict.kind = Verdict::Kind::Nonempty;
      verdict.depth = e;
      verdict.point = std::vector<Rational>{common[0].lo};
      break;
    }
  }

  // Eventually periodic codings: fixed point of the cycle composite, pulled
  // back through the prefix and the word.
  const int periodic_from = sys.horizon() - sys.period() + 1;
  std::map<Rational, std::vector<WordStream>> hits;
  for (std::size_t p = 0; p < words.size(); ++p) {
    std::map<Rational, WordStream> mine;
    for (int a = 0; a <= budget.prefix; ++a) {
      const int s = k + a;
      if (s < periodic_from) continue;
      for (int c = 1; c <= budget.cycle; ++c) {
        const int len = c * sys.period();
        for (const auto& cycle : all_words(sys, s, len)) {
          const Rational at0 = apply(sys, s, cycle, Rational(0));
          const Rational at1 = apply(sys, s, cycle, Rational(1));
          const Rational slope = at1 - at0;
          const Rational fixed = at0 / (1 - slope);
          for (const auto& prefix : all_words(sys, k, a)) {
            const Rational x = apply(sys, j, words[p], apply(sys, k, prefix, fixed));
            if (!mine.count(x)) {
              WordStream ws;
              ws.prefix.assign(prefix.begin(), prefix.end());
              ws.cycle.assign(cycle.begin(), cycle.end());
              mine.emplace(x, std::move(ws));
            }
          }
        }
      }
    }
    if (p == 0) {
      for (auto& [x, ws] : mine) hits[x].push_back(std::move(ws));
    } else {
      for (auto it = hits.begin(); it != hits.end();) {
        auto found = mine.find(it->first);
        if (found == mine.end()) {
          it = hits.erase(it);
        } else {
          it->second.push_back(found->second);
          ++it;
        }
      }
    }
  }
  if (!hits.empty()) {
    auto& [x, streams] = *hits.begin();
    if (verdict.kind != Verdict::Kind::Nonempty) verdict.depth = 0;
    verdict.kind = Verdict::Kind::Nonempty;
    verdict.witness = streams;
    verdict.point = std::vector<Rational>{x};
    return verdict;
  }
  if (verdict.kind == Verdict::Kind::Nonempty) return verdict;
  verdict.kind = Verdict::Kind::Unknown;
  verdict.depth = budget.depth;
  return verdict;
}

}  // namespace nervekit
