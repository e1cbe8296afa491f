#include "nervekit/ifs.hpp"

#include "nervekit/rng.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nervekit {

std::string to_string(TailPolicy::Kind kind) {
  switch (kind) {
    case TailPolicy::Kind::Full: return "full";
    case TailPolicy::Kind::Periodic: return "periodic";
    case TailPolicy::Kind::Truncate: return "truncate";
  }
  return "?";
}

LevelSet::LevelSet(std::vector<FlatDigit> digits, std::size_t alphabet_size)
    : digits_(std::move(digits)), member_(alphabet_size, 0), rank_(alphabet_size, 0) {
  std::sort(digits_.begin(), digits_.end());
  digits_.erase(std::unique(digits_.begin(), digits_.end()), digits_.end());
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (digits_[i] >= alphabet_size) throw std::invalid_argument("digit outside alphabet");
    member_[digits_[i]] = 1;
    rank_[digits_[i]] = static_cast<std::uint32_t>(i);
  }
}

LevelSet LevelSet::full(std::size_t alphabet_size) {
  std::vector<FlatDigit> all(alphabet_size);
  std::iota(all.begin(), all.end(), 0U);
  return LevelSet(std::move(all), alphabet_size);
}

namespace {

std::size_t alphabet_of(const std::vector<int>& n) {
  if (n.empty()) throw std::invalid_argument("dimension must be positive");
  std::size_t size = 1;
  for (int nk : n) {
    if (nk < 2) throw std::invalid_argument("subdivision counts must be >= 2");
    size *= static_cast<std::size_t>(nk);
    if (size > (std::size_t{1} << 31)) throw std::invalid_argument("alphabet too large");
  }
  return size;
}

std::vector<LevelSet> flatten_levels(const std::vector<int>& n,
                                     const std::vector<std::vector<Digit>>& levels) {
  const std::size_t alphabet = alphabet_of(n);
  std::vector<LevelSet> out;
  out.reserve(levels.size());
  for (std::size_t t = 0; t < levels.size(); ++t) {
    std::vector<FlatDigit> flat;
    for (const Digit& digit : levels[t]) {
      if (digit.size() != n.size())
        throw std::invalid_argument("digit arity does not match dimension at level " +
                                    std::to_string(t + 1));
      std::uint64_t idx = 0;
      for (std::size_t k = 0; k < n.size(); ++k) {
        if (digit[k] < 0 || digit[k] >= n[k])
          throw std::invalid_argument("digit out of range at level " + std::to_string(t + 1));
        idx = idx * static_cast<std::uint64_t>(n[k]) + static_cast<std::uint64_t>(digit[k]);
      }
      flat.push_back(static_cast<FlatDigit>(idx));
    }
    out.emplace_back(std::move(flat), alphabet);
  }
  return out;
}

}  // namespace

GridIfs::GridIfs(std::vector<int> n, const std::vector<std::vector<Digit>>& levels,
                 TailPolicy tail)
    : GridIfs(n, flatten_levels(n, levels), tail) {}

GridIfs::GridIfs(std::vector<int> n, std::vector<LevelSet> levels, TailPolicy tail)
    : n_(std::move(n)), levels_(std::move(levels)), tail_(tail) {
  validate_and_index();
}

void GridIfs::validate_and_index() {
  alphabet_size_ = alphabet_of(n_);
  for (std::size_t t = 0; t < levels_.size(); ++t) {
    if (levels_[t].empty())
      throw std::invalid_argument("empty index set at level " + std::to_string(t + 1));
    if (levels_[t].digits().back() >= alphabet_size_)
      throw std::invalid_argument("digit out of range at level " + std::to_string(t + 1));
  }
  if (tail_.kind == TailPolicy::Kind::Periodic &&
      (tail_.period < 1 || tail_.period > horizon()))
    throw std::invalid_argument("period must lie in [1, horizon]");
  const std::size_t d = n_.size();
  components_.assign(alphabet_size_ * d, 0);
  for (std::size_t idx = 0; idx < alphabet_size_; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = d; k-- > 0;) {
      components_[idx * d + k] = static_cast<int>(rest % static_cast<std::size_t>(n_[k]));
      rest /= static_cast<std::size_t>(n_[k]);
    }
  }
  full_ = LevelSet::full(alphabet_size_);
}

Rational GridIfs::contraction() const {
  return make_rational(1, *std::min_element(n_.begin(), n_.end()));
}

FlatDigit GridIfs::flatten(const Digit& digit) const {
  if (digit.size() != n_.size()) throw std::invalid_argument("digit arity mismatch");
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < n_.size(); ++k) {
    if (digit[k] < 0 || digit[k] >= n_[k]) throw std::invalid_argument("digit out of range");
    idx = idx * static_cast<std::uint64_t>(n_[k]) + static_cast<std::uint64_t>(digit[k]);
  }
  return static_cast<FlatDigit>(idx);
}

Digit GridIfs::unflatten(FlatDigit digit) const {
  Digit out(n_.size());
  for (std::size_t k = 0; k < n_.size(); ++k) out[k] = component(digit, static_cast<int>(k));
  return out;
}

int GridIfs::position_of(int level) const {
  if (level < 1) throw std::invalid_argument("levels are numbered from 1");
  const int h = horizon();
  if (level <= h) return level;
  if (tail_.kind == TailPolicy::Kind::Periodic)
    return h - tail_.period + 1 + (level - h - 1) % tail_.period;
  return h + 1;
}

int GridIfs::next_position(int position) const {
  const int h = horizon();
  if (position < h) return position + 1;
  if (position == h && tail_.kind == TailPolicy::Kind::Periodic) return h - tail_.period + 1;
  return h + 1;
}

const LevelSet* GridIfs::level_at_position(int position) const {
  if (position >= 1 && position <= horizon()) return &levels_[position - 1];
  if (position == horizon() + 1) {
    if (tail_.kind == TailPolicy::Kind::Full) return &full_;
    return nullptr;
  }
  throw std::out_of_range("level position out of range");
}

namespace {

void check_depth_fits(const GridIfs& ifs, int depth) {
  for (int nk : ifs.n()) {
    long double extent = 1;
    for (int i = 0; i < depth; ++i) extent *= nk;
    if (extent > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 4))
      throw std::invalid_argument("cell depth exceeds 64-bit lattice range");
  }
}

}  // namespace

Cell word_cell(const GridIfs& ifs, const Word& word) {
  check_depth_fits(ifs, word.depth());
  Cell cell{word.depth(), std::vector<std::int64_t>(ifs.dim(), 0)};
  for (int t = 0; t < word.depth(); ++t) {
    const LevelSet* level = ifs.level(word.start_level + t);
    if (level == nullptr)
      throw std::invalid_argument("level " + std::to_string(word.start_level + t) +
                                  " beyond truncated horizon");
    const FlatDigit digit = word.digits[t];
    if (!level->contains(digit))
      throw std::invalid_argument("digit not in level " + std::to_string(word.start_level + t));
    for (int k = 0; k < ifs.dim(); ++k)
      cell.corner[k] = cell.corner[k] * ifs.n()[k] + ifs.component(digit, k);
  }
  return cell;
}

std::uint64_t word_count(const GridIfs& ifs, int j, int m) {
  std::uint64_t count = 1;
  for (int t = j; t < j + m; ++t) {
    const LevelSet* level = ifs.level(t);
    if (level == nullptr) throw std::invalid_argument("level beyond truncated horizon");
    if (count > UINT64_MAX / level->size()) return UINT64_MAX;
    count *= level->size();
  }
  return count;
}

std::vector<Cell> approximation_cells(const GridIfs& ifs, int j, int m) {
  if (m < 0) throw std::invalid_argument("negative depth");
  check_depth_fits(ifs, m);
  std::vector<Cell> cells{Cell{0, std::vector<std::int64_t>(ifs.dim(), 0)}};
  for (int t = j; t < j + m; ++t) {
    const LevelSet* level = ifs.level(t);
    if (level == nullptr)
      throw std::invalid_argument("level " + std::to_string(t) + " beyond truncated horizon");
    std::vector<Cell> next;
    next.reserve(cells.size() * level->size());
    for (const Cell& parent : cells) {
      for (FlatDigit digit : level->digits()) {
        Cell child{parent.depth + 1, parent.corner};
        for (int k = 0; k < ifs.dim(); ++k)
          child.corner[k] = child.corner[k] * ifs.n()[k] + ifs.component(digit, k);
        next.push_back(std::move(child));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

LevelSample sample_levels(const std::vector<int>& n, int r, int count, std::uint64_t seed) {
  const std::size_t alphabet = alphabet_of(n);
  if (r < 1 || static_cast<std::size_t>(r) > alphabet - 1)
    throw std::invalid_argument("r must lie in [1, #I - 1]");
  if (count < 0) throw std::invalid_argument("negative sample count");
  Rng rng(seed);
  LevelSample sample{r, seed, {}};
  sample.levels.reserve(count);
  std::vector<FlatDigit> perm(alphabet);
  for (int draw = 0; draw < count; ++draw) {
    std::iota(perm.begin(), perm.end(), 0U);
    for (int i = 0; i < r; ++i) {
      auto pick = static_cast<std::size_t>(i) + rng.below(alphabet - static_cast<std::size_t>(i));
      std::swap(perm[i], perm[pick]);
    }
    sample.levels.emplace_back(std::vector<FlatDigit>(perm.begin() + r, perm.end()), alphabet);
  }
  return sample;
}

namespace {

// Walks level positions starting at `position` until the first repeat.
template <class Visit>
void walk_positions(const GridIfs& ifs, int position, Visit&& visit) {
  std::vector<char> seen(ifs.position_count() + 1, 0);
  while (!seen[position]) {
    seen[position] = 1;
    visit(position);
    position = ifs.next_position(position);
  }
}

// Splits a sequence of per-position choices into prefix and cycle, given the
// positions visited and the position the walk returned to.
template <class T>
std::pair<std::vector<T>, std::vector<T>> split_lasso(const std::vector<int>& positions,
                                                      const std::vector<T>& values,
                                                      int return_position) {
  auto it = std::find(positions.begin(), positions.end(), return_position);
  auto cut = static_cast<std::size_t>(it - positions.begin());
  return {std::vector<T>(values.begin(), values.begin() + cut),
          std::vector<T>(values.begin() + cut, values.end())};
}

}  // namespace

bool corner_membership(const GridIfs& ifs, int j, const std::vector<int>& corner) {
  if (static_cast<int>(corner.size()) != ifs.dim()) throw std::invalid_argument("corner arity");
  Digit digit(ifs.dim());
  for (int k = 0; k < ifs.dim(); ++k) {
    if (corner[k] != 0 && corner[k] != 1) throw std::invalid_argument("corner must be 0/1");
    digit[k] = corner[k] == 0 ? 0 : ifs.n()[k] - 1;
  }
  const FlatDigit flat = ifs.flatten(digit);
  bool present = true;
  walk_positions(ifs, ifs.position_of(j), [&](int position) {
    const LevelSet* level = ifs.level_at_position(position);
    if (level != nullptr && !level->contains(flat)) present = false;
  });
  return present;
}

bool no_corner_check(const GridIfs& ifs) {
  int last = ifs.horizon();
  if (ifs.tail().kind == TailPolicy::Kind::Full) last = ifs.horizon() + 1;
  const int d = ifs.dim();
  for (std::uint32_t bits = 0; bits < (1U << d); ++bits) {
    std::vector<int> corner(d);
    for (int k = 0; k < d; ++k) corner[k] = (bits >> k) & 1U;
    // Presence from j implies presence from j+1, so the last start decides.
    if (last >= 1 && corner_membership(ifs, last, corner)) return false;
  }
  return true;
}

std::optional<int> detect_cut(const LevelSet& level, const GridIfs& ifs, int axis) {
  if (axis < 0 || axis >= ifs.dim()) throw std::invalid_argument("axis out of range");
  std::vector<char> hit(ifs.n()[axis], 0);
  for (FlatDigit digit : level.digits()) hit[ifs.component(digit, axis)] = 1;
  for (int i = 0; i < ifs.n()[axis]; ++i)
    if (!hit[i]) return i;
  return std::nullopt;
}

std::optional<int> detect_cut(const std::vector<Digit>& level, const std::vector<int>& n,
                              int axis) {
  if (axis < 0 || axis >= static_cast<int>(n.size()))
    throw std::invalid_argument("axis out of range");
  std::vector<char> hit(n[axis], 0);
  for (const Digit& digit : level) hit.at(digit.at(axis)) = 1;
  for (int i = 0; i < n[axis]; ++i)
    if (!hit[i]) return i;
  return std::nullopt;
}

Rational evaluate_stream(const AxisStream& stream, int base) {
  BigInt prefix = 0;
  for (int digit : stream.prefix) prefix = prefix * base + digit;
  Rational value(prefix, ipow(base, static_cast<int>(stream.prefix.size())));
  if (!stream.cycle.empty()) {
    BigInt cycle = 0;
    for (int digit : stream.cycle) cycle = cycle * base + digit;
    BigInt period = ipow(base, static_cast<int>(stream.cycle.size())) - 1;
    value += Rational(cycle, period * ipow(base, static_cast<int>(stream.prefix.size())));
  }
  return value;
}

std::optional<CoreLineWitness> core_line_witness(const GridIfs& ifs, int j, int axis) {
  const int d = ifs.dim();
  if (axis < 0 || axis >= d) throw std::invalid_argument("axis out of range");
  std::size_t transverse = 1;
  for (int k = 0; k < d; ++k)
    if (k != axis) transverse *= static_cast<std::size_t>(ifs.n()[k]);

  bool ok = true;
  bool approximate = false;
  std::vector<int> positions;
  std::vector<FlatDigit> choices;
  walk_positions(ifs, ifs.position_of(j), [&](int position) {
    if (!ok) return;
    const LevelSet* level = ifs.level_at_position(position);
    positions.push_back(position);
    if (level == nullptr) {
      approximate = true;
      choices.push_back(0);
      return;
    }
    const std::size_t removed = ifs.alphabet_size() - level->size();
    if (removed >= transverse) {
      ok = false;
      return;
    }
    // A transverse tuple is blocked when some deleted digit projects onto it.
    std::vector<char> blocked(ifs.alphabet_size(), 0);
    for (FlatDigit digit = 0; digit < ifs.alphabet_size(); ++digit) {
      if (level->contains(digit)) continue;
      Digit tuple = ifs.unflatten(digit);
      tuple[axis] = 0;
      blocked[ifs.flatten(tuple)] = 1;
    }
    for (FlatDigit digit = 0; digit < ifs.alphabet_size(); ++digit) {
      if (ifs.component(digit, axis) != 0 || blocked[digit]) continue;
      choices.push_back(digit);
      return;
    }
    ok = false;  // unreachable when removed < transverse
  });
  if (!ok) return std::nullopt;

  const int back = ifs.next_position(positions.back());
  auto [prefix, cycle] = split_lasso(positions, choices, back);
  CoreLineWitness witness;
  witness.axis = axis;
  witness.streams.resize(d);
  witness.coords.assign(d, Rational(0));
  for (int k = 0; k < d; ++k) {
    if (k == axis) continue;
    AxisStream& stream = witness.streams[k];
    stream.approximate = approximate;
    for (FlatDigit digit : prefix) stream.prefix.push_back(ifs.component(digit, k));
    for (FlatDigit digit : cycle) stream.cycle.push_back(ifs.component(digit, k));
    witness.coords[k] = evaluate_stream(stream, ifs.n()[k]);
  }
  return witness;
}

std::optional<CoreSlabWitness> core_slab_witness(const GridIfs& ifs, int j, int axis,
                                                 bool require_hypothesis) {
  const int d = ifs.dim();
  if (axis < 0 || axis >= d) throw std::invalid_argument("axis out of range");
  const int nk = ifs.n()[axis];
  bool ok = true;
  bool hypothesis = true;
  bool approximate = false;
  std::vector<int> positions;
  std::vector<int> choices;
  walk_positions(ifs, ifs.position_of(j), [&](int position) {
    if (!ok) return;
    const LevelSet* level = ifs.level_at_position(position);
    positions.push_back(position);
    if (level == nullptr) {
      approximate = true;
      choices.push_back(0);
      return;
    }
    if (ifs.alphabet_size() - level->size() >= static_cast<std::size_t>(nk)) hypothesis = false;
    std::vector<char> blocked(nk, 0);
    for (FlatDigit digit = 0; digit < ifs.alphabet_size(); ++digit)
      if (!level->contains(digit)) blocked[ifs.component(digit, axis)] = 1;
    for (int i = 0; i < nk; ++i) {
      if (!blocked[i]) {
        choices.push_back(i);
        return;
      }
    }
    ok = false;
  });
  if (!ok || (require_hypothesis && !hypothesis)) return std::nullopt;

  const int back = ifs.next_position(positions.back());
  auto [prefix, cycle] = split_lasso(positions, choices, back);
  CoreSlabWitness witness;
  witness.axis = axis;
  witness.stream = AxisStream{std::move(prefix), std::move(cycle), approximate};
  witness.value = evaluate_stream(witness.stream, nk);
  witness.hypothesis_holds = hypothesis;
  return witness;
}

}  // namespace nervekit
