#pragma once

// Brute-force references used by the tests and the acceptance run.  Nothing
// here goes through the contact automaton or the lattice kernels.

#include "nervekit/contact.hpp"
#include "nervekit/ifs.hpp"
#include "nervekit/rng.hpp"

#include <map>
#include <string>
#include <set>
#include <vector>

namespace oracle {

using namespace nervekit;
using Corner = std::vector<std::int64_t>;

struct BruteContact {
  bool separated = false;
  int depth = 0;  // separated: first refinement depth with no touching tuple; else levels checked
};

inline bool touching(const Corner& a, const Corner& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] - b[k] > 1 || b[k] - a[k] > 1) return false;
  return true;
}

// Depth-by-depth refinement of the cells of each word, keeping only cells
// that take part in some pairwise touching tuple.  Stops after max_extra
// refinements or at the first unknown level.
inline BruteContact brute_contact(const GridIfs& ifs, int j, const std::vector<Word>& words, int max_extra) {
  const std::size_t q = words.size();
  const int d = ifs.dim();
  std::vector<std::set<Corner>> sets(q);
  int m = words[0].depth();
  for (std::size_t p = 0; p < q; ++p) {
    Corner c(d, 0);
    for (int t = 0; t < m; ++t) {
      Digit dig = ifs.unflatten(words[p].digits[t]);
      for (int k = 0; k < d; ++k) c[k] = c[k] * ifs.n()[k] + dig[k];
    }
    sets[p].insert(c);
  }
  for (int extra = 0;; ++extra) {
    // every tuple of pairwise touching cells, one per word
    std::vector<std::set<Corner>> used(q);
    std::vector<const Corner*> pick(q);
    auto search = [&](auto& self, std::size_t p) -> void {
      if (p == q) {
        for (std::size_t i = 0; i < q; ++i) used[i].insert(*pick[i]);
        return;
      }
      for (const Corner& c : sets[p]) {
        bool ok = true;
        for (std::size_t i = 0; i < p && ok; ++i) ok = touching(c, *pick[i]);
        if (!ok) continue;
        pick[p] = &c;
        self(self, p + 1);
      }
    };
    search(search, 0);
    if (used[0].empty()) return {true, extra};
    if (extra == max_extra) return {false, extra};
    const LevelSet* level = ifs.level(j + m + extra);
    if (level == nullptr) return {false, extra};
    for (std::size_t p = 0; p < q; ++p) {
      std::set<Corner> next;
      for (const Corner& c : used[p])
        for (FlatDigit f : level->digits()) {
          Corner child(d);
          for (int k = 0; k < d; ++k) child[k] = c[k] * ifs.n()[k] + ifs.component(f, k);
          next.insert(child);
        }
      sets[p] = std::move(next);
    }
  }
}

// Point coded by word followed by prefix and cycle^inf, per axis, by summing
// the geometric series directly.
inline std::vector<Rational> coded_point(const GridIfs& ifs, const Word& word, const WordStream& s) {
  std::vector<Rational> x(ifs.dim());
  for (int k = 0; k < ifs.dim(); ++k) {
    const BigInt n = ifs.n()[k];
    Rational scale = 1;
    Rational sum = 0;
    auto take = [&](FlatDigit f) {
      scale /= Rational(n);
      sum += scale * ifs.component(f, k);
    };
    for (FlatDigit f : word.digits) take(f);
    for (FlatDigit f : s.prefix) take(f);
    // cycle of length L repeated: block value times 1 / (1 - n^-L)
    Rational block = 0, inner = scale;
    for (FlatDigit f : s.cycle) {
      inner /= Rational(n);
      block += inner * ifs.component(f, k);
    }
    Rational shrink = 1;
    for (std::size_t i = 0; i < s.cycle.size(); ++i) shrink /= Rational(n);
    if (!s.cycle.empty()) sum += block / (1 - shrink);
    x[k] = sum;
  }
  return x;
}

// Every digit of the stream lies in its level, checked far enough for the
// cycle and the tail period to realign.
inline bool stream_valid(const GridIfs& ifs, int k, const WordStream& s) {
  if (s.cycle.empty()) return false;
  const int span = static_cast<int>(s.prefix.size() + s.cycle.size() * (ifs.horizon() + 1)) + ifs.horizon() + 2;
  for (int i = 0; i < span; ++i) {
    FlatDigit f = i < static_cast<int>(s.prefix.size())
                      ? s.prefix[i]
                      : s.cycle[(i - s.prefix.size()) % s.cycle.size()];
    const LevelSet* level = ifs.level(k + i);
    if (level == nullptr || !level->contains(f)) return false;
  }
  return true;
}

// Random grid system with d <= 2, n_k <= 3 and arbitrary non-empty levels.
inline GridIfs random_small_system(Rng& rng, int max_horizon = 6) {
  const int d = 1 + static_cast<int>(rng.below(2));
  std::vector<int> n(d);
  std::size_t alphabet = 1;
  for (int& v : n) {
    v = 2 + static_cast<int>(rng.below(2));
    alphabet *= v;
  }
  const int h = 1 + static_cast<int>(rng.below(max_horizon));
  std::vector<LevelSet> levels;
  for (int t = 0; t < h; ++t) {
    std::vector<FlatDigit> keep;
    // biased towards dense levels so that contacts survive often
    while (keep.empty())
      for (FlatDigit f = 0; f < alphabet; ++f)
        if (rng.below(4) != 0) keep.push_back(f);
    levels.emplace_back(keep, alphabet);
  }
  TailPolicy tail;
  switch (rng.below(3)) {
    case 0: tail = TailPolicy::full(); break;
    case 1: tail = TailPolicy::periodic(1 + static_cast<int>(rng.below(h))); break;
    default: tail = TailPolicy::truncate(); break;
  }
  return GridIfs(n, std::move(levels), tail);
}

// All words of levels j..j+m-1.
inline std::vector<Word> all_words(const GridIfs& ifs, int j, int m) {
  std::vector<Word> out{Word{j, {}}};
  for (int t = j; t < j + m; ++t) {
    std::vector<Word> next;
    for (const Word& w : out)
      for (FlatDigit f : ifs.level(t)->digits()) {
        Word x = w;
        x.digits.push_back(f);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

// Checks one verdict against brute force; returns a description of the
// disagreement or an empty string.
inline std::string check_verdict(const GridIfs& ifs, int j, const std::vector<Word>& words, const Verdict& v,
                                 int max_extra = 6) {
  const int k = j + words[0].depth();
  BruteContact b = brute_contact(ifs, j, words, max_extra);
  switch (v.kind) {
    case Verdict::Kind::Empty: {
      if (b.separated) return b.depth == v.depth ? "" : "empty at depth " + std::to_string(v.depth) +
                                                          ", brute force separates at " + std::to_string(b.depth);
      // dies later than the brute-force horizon: look deeper
      BruteContact deep = brute_contact(ifs, j, words, v.depth);
      if (deep.separated && deep.depth == v.depth) return "";
      return "empty verdict not confirmed by boxes";
    }
    case Verdict::Kind::Unknown:
      if (ifs.tail().kind != TailPolicy::Kind::Truncate) return "unknown under an exact tail";
      if (b.separated) return "unknown but boxes separate";
      if (ifs.level_known(j + words[0].depth() + b.depth)) return "unknown before the horizon";
      return "";
    case Verdict::Kind::Nonempty: {
      if (b.separated) return "nonempty but boxes separate at depth " + std::to_string(b.depth);
      if (v.witness.size() != words.size()) return "witness arity";
      std::vector<Rational> first;
      for (std::size_t p = 0; p < words.size(); ++p) {
        if (!stream_valid(ifs, k, v.witness[p])) return "witness digits outside their levels";
        auto x = coded_point(ifs, words[p], v.witness[p]);
        if (p == 0) first = x;
        else if (x != first) return "witness points differ";
      }
      if (v.point && *v.point != first) return "reported point differs from the coded point";
      return "";
    }
  }
  return "bad verdict";
}

// Words near a random first word, so that contacts are common.
inline std::vector<Word> random_tuple(const GridIfs& ifs, Rng& rng, int j, int m, std::size_t arity) {
  auto words = all_words(ifs, j, m);
  std::vector<Word> out{words[rng.below(words.size())]};
  auto corner = [&](const Word& w) {
    Corner c(ifs.dim(), 0);
    for (FlatDigit f : w.digits)
      for (int a = 0; a < ifs.dim(); ++a) c[a] = c[a] * ifs.n()[a] + ifs.component(f, a);
    return c;
  };
  std::vector<Word> near;
  for (const Word& w : words)
    if (w.digits != out[0].digits && touching(corner(w), corner(out[0]))) near.push_back(w);
  // occasionally a far word, to exercise the initial separation
  if (rng.below(8) == 0) near.push_back(words[rng.below(words.size())]);
  while (out.size() < arity && !near.empty()) {
    std::size_t i = rng.below(near.size());
    bool fresh = true;
    for (const Word& w : out) fresh = fresh && w.digits != near[i].digits;
    if (fresh) out.push_back(near[i]);
    near.erase(near.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

}  // namespace oracle
