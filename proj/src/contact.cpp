#include "nervekit/contact.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace nervekit {

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Nonempty: return "nonempty";
    case Verdict::Kind::Empty: return "empty";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

bool pairwise_touching(const std::vector<std::vector<int>>& offsets) {
  for (std::size_t a = 0; a < offsets.size(); ++a)
    for (std::size_t b = a + 1; b < offsets.size(); ++b)
      for (std::size_t k = 0; k < offsets[a].size(); ++k)
        if (std::abs(offsets[a][k] - offsets[b][k]) > 1) return false;
  return true;
}

}  // namespace

std::optional<OffsetState> initial_state(const std::vector<Cell>& cells) {
  if (cells.empty()) throw std::invalid_argument("empty tuple");
  for (const Cell& c : cells)
    if (c.depth != cells[0].depth || c.corner.size() != cells[0].corner.size())
      throw std::invalid_argument("cells of different depth");
  OffsetState state;
  for (const Cell& c : cells) {
    std::vector<int> o(c.corner.size());
    for (std::size_t k = 0; k < o.size(); ++k) {
      const std::int64_t diff = c.corner[k] - cells[0].corner[k];
      if (diff < -1 || diff > 1) return std::nullopt;
      o[k] = static_cast<int>(diff);
    }
    state.offsets.push_back(std::move(o));
  }
  if (!pairwise_touching(state.offsets)) return std::nullopt;
  return state;
}

std::vector<OffsetState> transitions(const OffsetState& state, const std::vector<Digit>& level,
                                     const std::vector<int>& n) {
  const std::size_t arity = state.offsets.size();
  std::set<OffsetState> found;
  std::vector<std::size_t> choice(arity, 0);
  if (level.empty() || arity == 0) return {};
  while (true) {
    OffsetState next;
    const Digit& i0 = level[choice[0]];
    for (std::size_t p = 0; p < arity; ++p) {
      const Digit& ip = level[choice[p]];
      std::vector<int> o(n.size());
      for (std::size_t k = 0; k < n.size(); ++k) o[k] = n[k] * state.offsets[p][k] + ip[k] - i0[k];
      next.offsets.push_back(std::move(o));
    }
    if (pairwise_touching(next.offsets)) found.insert(std::move(next));
    std::size_t p = 0;
    while (p < arity && ++choice[p] == level.size()) choice[p++] = 0;
    if (p == arity) break;
  }
  return {found.begin(), found.end()};
}

std::optional<PointMask> canonical_mask(const std::vector<std::vector<std::int64_t>>& points) {
  if (points.empty()) return PointMask{0};
  const std::size_t d = points[0].size();
  if (d > 6) throw std::invalid_argument("unit-block masks need dimension <= 6");
  std::vector<std::int64_t> lo(points[0]), hi(points[0]);
  for (const auto& p : points)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  for (std::size_t k = 0; k < d; ++k)
    if (hi[k] - lo[k] > 1) return std::nullopt;
  PointMask mask = 0;
  for (const auto& p : points) {
    unsigned bit = 0;
    for (std::size_t k = 0; k < d; ++k) bit |= static_cast<unsigned>(p[k] - lo[k]) << k;
    mask |= PointMask{1} << bit;
  }
  return mask;
}

namespace {

std::vector<unsigned> mask_points(PointMask mask) {
  std::vector<unsigned> pts;
  for (unsigned b = 0; b < 64; ++b)
    if ((mask >> b) & 1U) pts.push_back(b);
  return pts;
}

PointMask points_mask(const std::vector<unsigned>& pts) {
  PointMask mask = 0;
  for (unsigned b : pts) mask |= PointMask{1} << b;
  return mask;
}

}  // namespace

std::vector<ContactMove> contact_moves(const GridIfs& ifs, const LevelSet& level,
                                       const std::vector<unsigned>& points) {
  const int d = ifs.dim();
  const std::size_t count = points.size();
  std::vector<char> forced(d, 0);
  for (int k = 0; k < d; ++k) {
    bool zero = false, one = false;
    for (unsigned b : points) (point_coord(b, k) ? one : zero) = true;
    forced[k] = zero && one;
  }
  // Along a spanning axis the lower cell must take the last digit and the
  // upper one the first; free axes only need a common window of width one.
  std::vector<std::vector<FlatDigit>> cand(count);
  for (std::size_t p = 0; p < count; ++p) {
    for (FlatDigit t : level.digits()) {
      bool ok = true;
      for (int k = 0; k < d && ok; ++k)
        if (forced[k]) ok = ifs.component(t, k) == (point_coord(points[p], k) ? 0 : ifs.n()[k] - 1);
      if (ok) cand[p].push_back(t);
    }
    if (cand[p].empty()) return {};
  }

  std::vector<ContactMove> moves;
  std::vector<FlatDigit> pick(count);
  std::vector<int> lo(d), hi(d);
  auto rec = [&](auto&& self, std::size_t p, const std::vector<int>& lo_in,
                 const std::vector<int>& hi_in) -> void {
    if (p == count) {
      ContactMove move{pick, std::vector<unsigned>(count, 0)};
      for (std::size_t q = 0; q < count; ++q) {
        unsigned bit = 0;
        for (int k = 0; k < d; ++k) {
          const int c = forced[k] ? point_coord(points[q], k) : ifs.component(pick[q], k) - lo_in[k];
          bit |= static_cast<unsigned>(c) << k;
        }
        move.points[q] = bit;
      }
      moves.push_back(std::move(move));
      return;
    }
    for (FlatDigit t : cand[p]) {
      std::vector<int> l = lo_in, h = hi_in;
      bool ok = true;
      for (int k = 0; k < d && ok; ++k) {
        if (forced[k]) continue;
        const int c = ifs.component(t, k);
        if (p == 0) {
          l[k] = h[k] = c;
        } else {
          l[k] = std::min(l[k], c);
          h[k] = std::max(h[k], c);
          ok = h[k] - l[k] <= 1;
        }
      }
      if (!ok) continue;
      pick[p] = t;
      self(self, p + 1, l, h);
    }
  };
  rec(rec, 0, lo, hi);
  return moves;
}

namespace {

void enumerate_masks(unsigned point_count, int dim, int max_arity, std::vector<PointMask>& out) {
  const std::size_t limit = std::size_t{1} << 20;
  std::vector<PointMask> low_half(dim, 0);
  for (int k = 0; k < dim; ++k)
    for (unsigned b = 0; b < point_count; ++b)
      if (!point_coord(b, k)) low_half[k] |= PointMask{1} << b;
  auto rec = [&](auto&& self, unsigned next, int size, PointMask mask) -> void {
    if (size > 0) {
      bool canonical = true;
      for (int k = 0; k < dim && canonical; ++k) canonical = (mask & low_half[k]) != 0;
      if (canonical) {
        out.push_back(mask);
        if (out.size() > limit) throw std::invalid_argument("too many contact states");
      }
    }
    if (size == max_arity) return;
    for (unsigned b = next; b < point_count; ++b) self(self, b + 1, size + 1, mask | (PointMask{1} << b));
  };
  rec(rec, 0, 0, 0);
  std::sort(out.begin(), out.end());
}

}  // namespace

ContactAutomaton::ContactAutomaton(const GridIfs& ifs, int max_arity) : ifs_(ifs) {
  const int d = ifs.dim();
  if (d > 6) throw std::invalid_argument("contact automaton supports dimension <= 6");
  const unsigned point_count = 1U << d;
  max_arity_ = std::clamp(max_arity, 1, static_cast<int>(point_count));
  enumerate_masks(point_count, d, max_arity_, masks_);
  for (std::size_t i = 0; i < masks_.size(); ++i) mask_index_[masks_[i]] = i;

  const int positions = ifs.position_count();
  const std::size_t nodes = static_cast<std::size_t>(positions) * masks_.size();
  succ_.assign(nodes, {});
  std::vector<char> sentinel(nodes, 0);
  for (int pos = 1; pos <= positions; ++pos) {
    const LevelSet* level = ifs.level_at_position(pos);
    for (std::size_t m = 0; m < masks_.size(); ++m) {
      if (level == nullptr) {
        sentinel[node(pos, m)] = 1;
        continue;
      }
      std::vector<PointMask>& out = succ_[node(pos, m)];
      for (const ContactMove& mv : contact_moves(ifs, *level, mask_points(masks_[m])))
        out.push_back(points_mask(mv.points));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }

  // Round in which a node is pruned = 1 + the round of its last surviving
  // successor; 0 marks survivors.
  std::vector<std::vector<std::size_t>> pred(nodes);
  std::vector<std::size_t> pending(nodes, 0);
  for (int pos = 1; pos <= positions; ++pos) {
    const int next = ifs.next_position(pos);
    for (std::size_t m = 0; m < masks_.size(); ++m) {
      const std::size_t x = node(pos, m);
      for (PointMask s : succ_[x]) pred[node(next, mask_index_.at(s))].push_back(x);
      pending[x] = succ_[x].size();
    }
  }
  std::vector<int> round(nodes, 0);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < nodes; ++x)
    if (!sentinel[x] && pending[x] == 0) {
      round[x] = 1;
      queue.push_back(x);
    }
  int last_round = 0;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    last_round = std::max(last_round, round[x]);
    for (std::size_t p : pred[x])
      if (--pending[p] == 0) {
        round[p] = round[x] + 1;
        queue.push_back(p);
      }
  }
  alive_.assign(nodes, 1);
  std::vector<std::size_t> dead_by(last_round + 2, 0);
  for (std::size_t x = 0; x < nodes; ++x)
    if (round[x] > 0) {
      alive_[x] = 0;
      ++dead_by[round[x]];
    }
  history_.push_back(nodes);
  std::size_t surviving = nodes;
  for (int r = 1; r <= last_round; ++r) {
    surviving -= dead_by[r];
    history_.push_back(surviving);
  }
  round_ = std::move(round);
}

bool ContactAutomaton::alive(int position, PointMask mask) const {
  auto it = mask_index_.find(mask);
  if (it == mask_index_.end()) throw std::invalid_argument("mask outside automaton");
  return alive_[node(position, it->second)] != 0;
}

const std::vector<PointMask>& ContactAutomaton::successors(int position, PointMask mask) const {
  return succ_[node(position, mask_index_.at(mask))];
}

std::optional<int> ContactAutomaton::death_depth(int position, PointMask mask) const {
  const int r = round_[node(position, mask_index_.at(mask))];
  if (r == 0) return std::nullopt;
  return r;
}

Verdict decide_tuple_intersection(const GridIfs& ifs, int j, const std::vector<Word>& words) {
  std::set<std::vector<FlatDigit>> distinct;
  for (const Word& w : words) distinct.insert(w.digits);
  ContactAutomaton automaton(ifs, static_cast<int>(std::max<std::size_t>(1, distinct.size())));
  return decide_tuple_intersection(automaton, j, words);
}

Verdict decide_tuple_intersection(const ContactAutomaton& automaton, int j,
                                  const std::vector<Word>& words) {
  const GridIfs& ifs = automaton.ifs();
  if (words.empty()) throw std::invalid_argument("empty tuple");
  const int m = words[0].depth();
  for (const Word& w : words) {
    if (w.depth() != m) throw std::invalid_argument("words of different depth");
    if (w.start_level != j) throw std::invalid_argument("word starts at a different level");
  }

  // Distinct cells become distinct points; repeated words share one.
  std::vector<std::vector<std::int64_t>> corners;
  std::vector<std::size_t> slot(words.size());
  for (std::size_t p = 0; p < words.size(); ++p) {
    Cell c = word_cell(ifs, words[p]);
    auto it = std::find(corners.begin(), corners.end(), c.corner);
    slot[p] = static_cast<std::size_t>(it - corners.begin());
    if (it == corners.end()) corners.push_back(c.corner);
  }
  if (static_cast<int>(corners.size()) > automaton.max_arity())
    throw std::invalid_argument("tuple arity above automaton cap");

  Verdict verdict;
  auto mask = canonical_mask(corners);
  if (!mask) {
    verdict.kind = Verdict::Kind::Empty;
    verdict.depth = 0;
    return verdict;
  }
  const int k = j + m;
  int pos = ifs.position_of(k);
  if (!automaton.alive(pos, *mask)) {
    verdict.kind = Verdict::Kind::Empty;
    verdict.depth = *automaton.death_depth(pos, *mask);
    return verdict;
  }
  if (!automaton.exact()) {
    verdict.kind = Verdict::Kind::Unknown;
    verdict.depth = std::max(0, ifs.horizon() - k + 1);
    return verdict;
  }

  const int d = ifs.dim();
  std::vector<std::int64_t> lo(corners[0]);
  for (const auto& c : corners)
    for (int a = 0; a < d; ++a) lo[a] = std::min(lo[a], c[a]);
  std::vector<unsigned> points(corners.size(), 0);
  for (std::size_t q = 0; q < corners.size(); ++q)
    for (int a = 0; a < d; ++a) points[q] |= static_cast<unsigned>(corners[q][a] - lo[a]) << a;

  // Deterministic forward walk through surviving states until a repeat.
  std::map<std::pair<int, std::vector<unsigned>>, std::size_t> seen;
  std::vector<std::vector<FlatDigit>> steps;
  std::size_t cycle_start = 0;
  while (true) {
    auto key = std::make_pair(pos, points);
    auto hit = seen.find(key);
    if (hit != seen.end()) {
      cycle_start = hit->second;
      break;
    }
    seen.emplace(std::move(key), steps.size());
    const int next = ifs.next_position(pos);
    const ContactMove* chosen = nullptr;
    auto moves = contact_moves(ifs, *ifs.level_at_position(pos), points);
    for (const ContactMove& mv : moves)
      if (automaton.alive(next, points_mask(mv.points))) {
        chosen = &mv;
        break;
      }
    if (chosen == nullptr) throw std::logic_error("surviving contact without surviving move");
    steps.push_back(chosen->digits);
    points = chosen->points;
    pos = next;
  }

  verdict.kind = Verdict::Kind::Nonempty;
  for (std::size_t p = 0; p < words.size(); ++p) {
    WordStream s;
    for (std::size_t t = 0; t < steps.size(); ++t)
      (t < cycle_start ? s.prefix : s.cycle).push_back(steps[t][slot[p]]);
    verdict.witness.push_back(std::move(s));
  }
  std::vector<Rational> point(d);
  const WordStream& s0 = verdict.witness[0];
  for (int a = 0; a < d; ++a) {
    AxisStream axis;
    for (FlatDigit t : s0.prefix) axis.prefix.push_back(ifs.component(t, a));
    for (FlatDigit t : s0.cycle) axis.cycle.push_back(ifs.component(t, a));
    const BigInt scale = ipow(ifs.n()[a], m);
    point[a] = (Rational(BigInt(corners[slot[0]][a])) + evaluate_stream(axis, ifs.n()[a])) /
               Rational(scale);
  }
  verdict.point = std::move(point);
  return verdict;
}

}  // namespace nervekit
