#include "nervekit/complex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nervekit {

const char* to_string(VerdictMode mode) {
  switch (mode) {
    case VerdictMode::Exact: return "exact";
    case VerdictMode::Outer: return "outer";
    case VerdictMode::Inner: return "inner";
  }
  return "?";
}

VerdictMode parse_verdict_mode(const std::string& text) {
  if (text == "exact") return VerdictMode::Exact;
  if (text == "outer") return VerdictMode::Outer;
  if (text == "inner") return VerdictMode::Inner;
  throw std::invalid_argument("verdict mode must be exact, outer or inner");
}

void SimplicialComplex::add(std::span<const Vertex> simplex) {
  if (simplex.size() < 2) throw std::invalid_argument("simplices below dimension 1 are implicit");
  const std::size_t q = simplex.size() - 1;
  if (flat_.size() <= q) flat_.resize(q + 1);
  const std::size_t at = flat_[q].size();
  for (Vertex v : simplex) {
    if (v >= vertices_) throw std::invalid_argument("simplex vertex out of range");
    flat_[q].push_back(v);
  }
  std::sort(flat_[q].begin() + static_cast<std::ptrdiff_t>(at), flat_[q].end());
  if (std::adjacent_find(flat_[q].begin() + static_cast<std::ptrdiff_t>(at), flat_[q].end()) !=
      flat_[q].end())
    throw std::invalid_argument("repeated vertex in simplex");
  sealed_ = false;
}

void SimplicialComplex::add_edge(Vertex a, Vertex b) {
  const Vertex e[2] = {std::min(a, b), std::max(a, b)};
  add(e);
}

namespace {

void sort_tuples(std::vector<Vertex>& flat, std::size_t arity) {
  const std::size_t n = flat.size() / arity;
  if (arity == 2) {
    std::vector<std::uint64_t> packed(n);
    for (std::size_t i = 0; i < n; ++i)
      packed[i] = (std::uint64_t{flat[2 * i]} << 32) | flat[2 * i + 1];
    std::sort(packed.begin(), packed.end());
    packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
    flat.resize(packed.size() * 2);
    for (std::size_t i = 0; i < packed.size(); ++i) {
      flat[2 * i] = static_cast<Vertex>(packed[i] >> 32);
      flat[2 * i + 1] = static_cast<Vertex>(packed[i] & 0xffffffffU);
    }
    return;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(flat.begin() + a * arity, flat.begin() + (a + 1) * arity,
                                        flat.begin() + b * arity, flat.begin() + (b + 1) * arity);
  };
  auto same = [&](std::size_t a, std::size_t b) {
    return std::equal(flat.begin() + a * arity, flat.begin() + (a + 1) * arity, flat.begin() + b * arity);
  };
  std::sort(order.begin(), order.end(), less);
  order.erase(std::unique(order.begin(), order.end(), same), order.end());
  std::vector<Vertex> out;
  out.reserve(order.size() * arity);
  for (std::size_t i : order) out.insert(out.end(), flat.begin() + i * arity, flat.begin() + (i + 1) * arity);
  flat = std::move(out);
}

}  // namespace

void SimplicialComplex::seal() {
  for (std::size_t q = 1; q < flat_.size(); ++q) sort_tuples(flat_[q], q + 1);
  while (flat_.size() > 2 && flat_.back().empty()) flat_.pop_back();
  sealed_ = true;
  std::vector<Vertex> face;
  for (std::size_t q = 2; q < flat_.size(); ++q) {
    for (std::size_t i = 0; i < count(static_cast<int>(q)); ++i) {
      auto s = simplex(static_cast<int>(q), i);
      for (std::size_t drop = 0; drop <= q; ++drop) {
        face.clear();
        for (std::size_t t = 0; t <= q; ++t)
          if (t != drop) face.push_back(s[t]);
        if (!find(static_cast<int>(q) - 1, face))
          throw std::logic_error("complex not closed under faces");
      }
    }
  }
}

int SimplicialComplex::dimension() const {
  for (std::size_t q = flat_.size(); q-- > 1;)
    if (!flat_[q].empty()) return static_cast<int>(q);
  return vertices_ > 0 ? 0 : -1;
}

std::size_t SimplicialComplex::count(int q) const {
  if (q == 0) return vertices_;
  if (q < 0 || static_cast<std::size_t>(q) >= flat_.size()) return 0;
  return flat_[q].size() / (q + 1);
}

std::optional<std::size_t> SimplicialComplex::find(int q, std::span<const Vertex> sorted) const {
  if (!sealed_) throw std::logic_error("complex not sealed");
  if (q == 0) {
    if (sorted.size() == 1 && sorted[0] < vertices_) return sorted[0];
    return std::nullopt;
  }
  const std::size_t n = count(q);
  const std::size_t arity = static_cast<std::size_t>(q) + 1;
  if (sorted.size() != arity) return std::nullopt;
  std::size_t lo = 0, hi = n;
  const Vertex* base = flat_[q].data();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (std::lexicographical_compare(base + mid * arity, base + (mid + 1) * arity, sorted.begin(), sorted.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < n && std::equal(sorted.begin(), sorted.end(), base + lo * arity)) return lo;
  return std::nullopt;
}

bool SimplicialComplex::contains(std::span<const Vertex> sorted) const {
  if (sorted.empty()) return false;
  return find(static_cast<int>(sorted.size()) - 1, sorted).has_value();
}

bool is_subcomplex(const SimplicialComplex& sub, const SimplicialComplex& of) {
  if (sub.vertex_count() != of.vertex_count()) return false;
  for (int q = 1; q <= sub.dimension(); ++q)
    for (std::size_t i = 0; i < sub.count(q); ++i)
      if (!of.find(q, sub.simplex(q, i))) return false;
  return true;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --sets_;
  return true;
}

std::size_t ComponentPartition::largest() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

ComponentPartition components(const SimplicialComplex& complex) {
  const std::size_t n = complex.vertex_count();
  UnionFind uf(n);
  const auto& edges = complex.flat(1);
  for (std::size_t i = 0; i + 1 < edges.size(); i += 2) uf.unite(edges[i], edges[i + 1]);
  ComponentPartition part;
  part.id.assign(n, 0);
  std::vector<std::uint32_t> root_id(n, UINT32_MAX);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = uf.find(v);
    if (root_id[r] == UINT32_MAX) {
      root_id[r] = static_cast<std::uint32_t>(part.sizes.size());
      part.sizes.push_back(0);
    }
    part.id[v] = root_id[r];
    ++part.sizes[root_id[r]];
  }
  return part;
}

std::size_t WordSpace::size() const {
  std::size_t n = 1;
  for (const auto& s : symbols) n *= s.size();
  return n;
}

std::vector<FlatDigit> WordSpace::word(Vertex v) const {
  std::vector<FlatDigit> w(symbols.size());
  std::size_t rest = v;
  for (std::size_t t = symbols.size(); t-- > 0;) {
    w[t] = symbols[t][rest % symbols[t].size()];
    rest /= symbols[t].size();
  }
  return w;
}

std::optional<Vertex> WordSpace::index(const std::vector<FlatDigit>& word) const {
  if (word.size() != symbols.size()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    auto it = std::lower_bound(symbols[t].begin(), symbols[t].end(), word[t]);
    if (it == symbols[t].end() || *it != word[t]) return std::nullopt;
    idx = idx * symbols[t].size() + static_cast<std::size_t>(it - symbols[t].begin());
  }
  return static_cast<Vertex>(idx);
}

}  // namespace nervekit
