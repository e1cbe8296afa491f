#include "nervekit/nerve.hpp"

#include "nervekit/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nervekit {

namespace {

std::int64_t checked_pow(int n, int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) {
    v *= n;
    if (v > std::numeric_limits<std::int32_t>::max())
      throw std::invalid_argument("lattice extent exceeds 32-bit coordinates");
  }
  return v;
}

}  // namespace

LatticeBlock build_block(const GridIfs& ifs, int j, int k, const kernels::Table& kt) {
  if (k < j) throw std::invalid_argument("block needs j <= k");
  const int d = ifs.dim();
  LatticeBlock block;
  block.depth = k - j;
  block.coords.assign(d, std::vector<std::int32_t>{0});
  std::vector<std::int32_t> scale(d, 1);
  for (int t = k - 1; t >= j; --t) {
    const LevelSet* level = ifs.level(t);
    if (level == nullptr)
      throw std::invalid_argument("level " + std::to_string(t) + " beyond truncated horizon");
    const std::size_t old = block.coords[0].size();
    std::vector<std::vector<std::int32_t>> next(d, std::vector<std::int32_t>(old * level->size()));
    std::size_t at = 0;
    for (FlatDigit c : level->digits()) {
      for (int a = 0; a < d; ++a)
        kt.add_constant(block.coords[a].data(), ifs.component(c, a) * scale[a], next[a].data() + at, old);
      at += old;
    }
    block.coords = std::move(next);
    for (int a = 0; a < d; ++a) scale[a] = static_cast<std::int32_t>(checked_pow(ifs.n()[a], k - t));
  }
  block.extent.resize(d);
  for (int a = 0; a < d; ++a) block.extent[a] = static_cast<std::int32_t>(checked_pow(ifs.n()[a], block.depth));
  return block;
}

LatticeIndex::LatticeIndex(const LatticeBlock& block, const kernels::Table& kt, std::uint64_t dense_limit)
    : block_(block), kt_(kt) {
  const int d = static_cast<int>(block.extent.size());
  long double cells = 1;
  for (std::int32_t e : block.extent) cells *= e;
  stride_.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * block.extent[a + 1];
  if (cells <= static_cast<long double>(dense_limit)) {
    table_.assign(static_cast<std::size_t>(cells), -1);
    for (std::size_t v = 0; v < block.size(); ++v) {
      std::int64_t idx = 0;
      for (int a = 0; a < d; ++a) idx += std::int64_t{block.coords[a][v]} * stride_[a];
      table_[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(v);
    }
    return;
  }
  if (cells > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
    throw std::invalid_argument("lattice too large to index");
  sparse_.reserve(block.size());
  std::vector<std::int32_t> c(d);
  for (std::size_t v = 0; v < block.size(); ++v) {
    for (int a = 0; a < d; ++a) c[a] = block.coords[a][v];
    sparse_.emplace(key(c.data()), static_cast<std::int32_t>(v));
  }
}

std::uint64_t LatticeIndex::key(const std::int32_t* c) const {
  std::uint64_t k = 0;
  for (std::size_t a = 0; a < block_.extent.size(); ++a)
    k = k * static_cast<std::uint64_t>(block_.extent[a]) + static_cast<std::uint64_t>(c[a]);
  return k;
}

void LatticeIndex::probe(const std::vector<std::int32_t>& offset, std::vector<std::int32_t>& out) const {
  const std::size_t n = block_.size();
  const int d = static_cast<int>(block_.extent.size());
  out.resize(n);
  if (dense()) {
    std::vector<const std::int32_t*> coords(d);
    for (int a = 0; a < d; ++a) coords[a] = block_.coords[a].data();
    kernels::ProbeGeometry g{d, block_.extent.data(), stride_.data(), table_.data()};
    kt_.neighbor_probe(coords.data(), offset.data(), g, out.data(), n);
    return;
  }
  std::vector<std::int32_t> c(d);
  for (std::size_t v = 0; v < n; ++v) {
    bool inside = true;
    for (int a = 0; a < d && inside; ++a) {
      c[a] = block_.coords[a][v] + offset[a];
      inside = c[a] >= 0 && c[a] < block_.extent[a];
    }
    out[v] = -1;
    if (!inside) continue;
    auto it = sparse_.find(key(c.data()));
    if (it != sparse_.end()) out[v] = it->second;
  }
}

std::size_t default_cell_budget() {
  if (const char* env = std::getenv("NERVE_CELL_BUDGET")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("NERVE_CELL_BUDGET must be a positive integer");
    }
  }
  return 5'000'000;
}

NerveEngine::NerveEngine(GridIfs ifs, int max_arity) : ifs_(std::make_unique<GridIfs>(std::move(ifs))) {
  const int cap = 1 << ifs_->dim();
  automaton_ = std::make_unique<ContactAutomaton>(*ifs_, max_arity <= 0 ? cap : std::min(max_arity, cap));
  no_corner_ = no_corner_check(*ifs_);
}

std::string grid_label(const GridIfs& ifs, const std::vector<FlatDigit>& word) {
  std::string out;
  for (FlatDigit t : word) {
    out += '(';
    for (int a = 0; a < ifs.dim(); ++a) {
      if (a) out += ',';
      out += std::to_string(ifs.component(t, a));
    }
    out += ')';
  }
  return out;
}

std::string affine_label(const AffineSystem1D& sys, const std::vector<FlatDigit>& word) {
  if (word.size() == 1) return sys.symbol(word[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ',';
    out += sys.symbol(word[i]);
  }
  return out + ")";
}

namespace {

void check_budget(std::uint64_t vertices, std::size_t budget) {
  if (vertices > budget)
    throw BudgetExceeded("nerve has " + std::to_string(vertices) + " vertices, budget " +
                         std::to_string(budget));
}

// Decides whether an apparently surviving tuple counts, tallying Unknowns.
struct Policy {
  bool exact;
  VerdictMode mode;
  std::size_t* unknown;

  bool present(std::size_t found) const {
    if (exact || found == 0) return true;
    *unknown += found;
    if (mode == VerdictMode::Exact)
      throw std::runtime_error("undecided contact beyond the truncated horizon (exact mode)");
    return mode == VerdictMode::Outer;
  }
};

}  // namespace

Nerve NerveEngine::build(int j, int k, const NerveOptions& opts) const {
  const GridIfs& ifs = *ifs_;
  if (j < 1 || k <= j) throw std::invalid_argument("nerve needs 1 <= j < k");
  if (ifs.tail().kind == TailPolicy::Kind::Truncate && k > ifs.horizon() + 1)
    throw std::invalid_argument("k beyond the truncated horizon");
  check_budget(word_count(ifs, j, k - j), opts.cell_budget);

  const int d = ifs.dim();
  Nerve nerve;
  nerve.meta.j = j;
  nerve.meta.k = k;
  nerve.meta.mode = opts.mode;
  int maxdim = (1 << d) - 1;
  if (opts.maxdim >= 0) maxdim = std::min(maxdim, opts.maxdim);
  if (opts.auto_cap && d == 2 && no_corner_ && maxdim > 1) {
    maxdim = 1;
    nerve.meta.maxdim_capped = true;
  }
  if (maxdim + 1 > automaton_->max_arity()) throw std::invalid_argument("tuple arity above cap");
  nerve.meta.maxdim = maxdim;
  nerve.words.j = j;
  nerve.words.k = k;
  for (int t = j; t < k; ++t) nerve.words.symbols.push_back(ifs.level(t)->digits());

  const LatticeBlock block = build_block(ifs, j, k);
  const LatticeIndex index(block);
  const std::size_t n = block.size();
  nerve.complex = SimplicialComplex(n);
  const int pos = ifs.position_of(k);
  Policy policy{automaton_->exact(), opts.mode, &nerve.meta.unknown};

  std::vector<std::int32_t> hit;
  if (maxdim >= 1) {
    int codes = 1;
    for (int a = 0; a < d; ++a) codes *= 3;
    std::vector<std::int32_t> e(d);
    for (int code = 0; code < codes; ++code) {
      int rest = code;
      for (int a = d - 1; a >= 0; --a) {
        e[a] = rest % 3 - 1;
        rest /= 3;
      }
      auto first = std::find_if(e.begin(), e.end(), [](int x) { return x != 0; });
      if (first == e.end() || *first < 0) continue;
      unsigned p0 = 0, p1 = 0;
      for (int a = 0; a < d; ++a) {
        if (e[a] < 0) p0 |= 1U << a;
        if (e[a] > 0) p1 |= 1U << a;
      }
      const PointMask mask = (PointMask{1} << p0) | (PointMask{1} << p1);
      if (!automaton_->alive(pos, mask)) continue;
      index.probe(e, hit);
      std::size_t found = 0;
      for (std::size_t v = 0; v < n; ++v) found += hit[v] >= 0;
      if (!policy.present(found)) continue;
      for (std::size_t v = 0; v < n; ++v)
        if (hit[v] >= 0) nerve.complex.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(hit[v]));
    }
  }

  std::vector<std::int32_t> ok;
  std::vector<Vertex> tuple;
  for (int q = 2; q <= maxdim; ++q) {
    for (PointMask mask : automaton_->masks()) {
      if (std::popcount(mask) != q + 1 || !automaton_->alive(pos, mask)) continue;
      std::vector<unsigned> pts;
      for (unsigned b = 0; b < 64; ++b)
        if ((mask >> b) & 1U) pts.push_back(b);
      std::vector<std::vector<std::int32_t>> partner(q);
      for (int i = 1; i <= q; ++i) {
        std::vector<std::int32_t> rel(d);
        for (int a = 0; a < d; ++a) rel[a] = point_coord(pts[i], a) - point_coord(pts[0], a);
        index.probe(rel, partner[i - 1]);
      }
      std::size_t found = 0;
      for (std::size_t v = 0; v < n; ++v) {
        bool all = true;
        for (int i = 0; i < q && all; ++i) all = partner[i][v] >= 0;
        found += all;
      }
      if (!policy.present(found)) continue;
      for (std::size_t v = 0; v < n; ++v) {
        tuple.assign(1, static_cast<Vertex>(v));
        for (int i = 0; i < q; ++i) {
          if (partner[i][v] < 0) break;
          tuple.push_back(static_cast<Vertex>(partner[i][v]));
        }
        if (static_cast<int>(tuple.size()) == q + 1) nerve.complex.add(tuple);
      }
    }
  }
  nerve.complex.seal();
  if (opts.labels) {
    nerve.labels.reserve(n);
    for (std::size_t v = 0; v < n; ++v)
      nerve.labels.push_back(grid_label(ifs, nerve.words.word(static_cast<Vertex>(v))));
  }
  return nerve;
}

Nerve build_nerve(const GridIfs& ifs, int j, int k, const NerveOptions& opts) {
  int arity = 1 << ifs.dim();
  if (opts.maxdim >= 0) arity = std::min(arity, opts.maxdim + 1);
  NerveEngine engine(ifs, std::max(arity, 2));
  return engine.build(j, k, opts);
}

Nerve build_nerve(const AffineSystem1D& sys, int j, int k, const NerveOptions& opts) {
  if (j < 1 || k <= j) throw std::invalid_argument("nerve needs 1 <= j < k");
  Nerve nerve;
  nerve.meta.j = j;
  nerve.meta.k = k;
  nerve.meta.mode = opts.mode;
  nerve.meta.maxdim = opts.maxdim < 0 ? 1 : opts.maxdim;
  nerve.words.j = j;
  nerve.words.k = k;
  std::uint64_t count = 1;
  for (int t = j; t < k; ++t) {
    std::vector<FlatDigit> s(sys.level_size(t));
    for (FlatDigit i = 0; i < s.size(); ++i) s[i] = i;
    count *= s.size();
    nerve.words.symbols.push_back(std::move(s));
  }
  check_budget(count, opts.cell_budget);
  const std::size_t n = nerve.words.size();
  nerve.complex = SimplicialComplex(n);
  Policy policy{false, opts.mode, &nerve.meta.unknown};

  std::vector<std::vector<FlatDigit>> words(n);
  std::vector<Interval> box(n);
  for (std::size_t v = 0; v < n; ++v) {
    words[v] = nerve.words.word(static_cast<Vertex>(v));
    box[v] = sys.word_interval(j, words[v]);
  }
  auto decide = [&](const std::vector<Vertex>& s) {
    std::vector<std::vector<FlatDigit>> ws;
    for (Vertex v : s) ws.push_back(words[v]);
    const Verdict verdict = affine1d_oracle(sys, j, ws, opts.affine);
    if (verdict.kind == Verdict::Kind::Nonempty) return true;
    if (verdict.kind == Verdict::Kind::Empty) return false;
    return policy.present(1);
  };

  // cliques grow one vertex at a time; a simplex needs all its faces
  std::vector<std::vector<Vertex>> layer;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  if (nerve.meta.maxdim >= 1) {
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b) {
        if (box[a].hi < box[b].lo || box[b].hi < box[a].lo) continue;
        std::vector<Vertex> s{a, b};
        if (!decide(s)) continue;
        adj[a][b] = adj[b][a] = 1;
        nerve.complex.add(s);
        layer.push_back(std::move(s));
      }
  }
  for (int q = 2; q <= nerve.meta.maxdim && !layer.empty(); ++q) {
    std::vector<std::vector<Vertex>> next;
    for (const auto& s : layer)
      for (Vertex w = s.back() + 1; w < n; ++w) {
        if (!std::all_of(s.begin(), s.end(), [&](Vertex v) { return adj[v][w] != 0; })) continue;
        std::vector<Vertex> t = s;
        t.push_back(w);
        bool faces = true;
        for (std::size_t drop = 0; drop + 1 < t.size() && faces; ++drop) {
          std::vector<Vertex> f;
          for (std::size_t i = 0; i < t.size(); ++i)
            if (i != drop) f.push_back(t[i]);
          faces = std::binary_search(layer.begin(), layer.end(), f);
        }
        if (!faces || !decide(t)) continue;
        nerve.complex.add(t);
        next.push_back(std::move(t));
      }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  nerve.complex.seal();
  if (opts.labels)
    for (std::size_t v = 0; v < n; ++v) nerve.labels.push_back(affine_label(sys, words[v]));
  return nerve;
}

SimplicialMap projection_phi(const Nerve& fine, const Nerve& coarse) {
  if (fine.meta.j != coarse.meta.j || fine.meta.k != coarse.meta.k + 1)
    throw std::invalid_argument("projection needs N_{j,k+1} and N_{j,k}");
  if (coarse.meta.k <= coarse.meta.j) throw std::invalid_argument("degenerate projection");
  const std::size_t last = fine.words.symbols.back().size();
  if (fine.complex.vertex_count() != coarse.complex.vertex_count() * last)
    throw std::invalid_argument("complexes not built on matching levels");
  SimplicialMap map{&fine, &coarse, std::vector<Vertex>(fine.complex.vertex_count())};
  for (std::size_t v = 0; v < map.vertex.size(); ++v) map.vertex[v] = static_cast<Vertex>(v / last);
  return map;
}

SimplicialMap embed_xi(const Nerve& tail, const Nerve& whole, const std::vector<FlatDigit>& u) {
  const int j = whole.meta.j, k = tail.meta.j;
  if (tail.meta.k != whole.meta.k || k <= j) throw std::invalid_argument("embedding needs N_{k,l} and N_{j,l}, j < k");
  if (static_cast<int>(u.size()) != k - j) throw std::invalid_argument("prefix length must be k - j");
  WordSpace prefix{j, k, {whole.words.symbols.begin(), whole.words.symbols.begin() + (k - j)}};
  auto ui = prefix.index(u);
  if (!ui) throw std::invalid_argument("prefix is not a word of levels j..k-1");
  const std::size_t base = std::size_t{*ui} * tail.complex.vertex_count();
  SimplicialMap map{&tail, &whole, std::vector<Vertex>(tail.complex.vertex_count())};
  for (std::size_t v = 0; v < map.vertex.size(); ++v) map.vertex[v] = static_cast<Vertex>(base + v);
  return map;
}

namespace {

std::vector<Vertex> image_of(const SimplicialMap& map, std::span<const Vertex> s) {
  std::vector<Vertex> img;
  for (Vertex v : s) img.push_back(map.vertex[v]);
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

}  // namespace

bool is_simplicial(const SimplicialMap& map) {
  const SimplicialComplex& dom = map.domain->complex;
  const SimplicialComplex& cod = map.codomain->complex;
  for (Vertex v : map.vertex)
    if (v >= cod.vertex_count()) return false;
  for (int q = 1; q <= dom.dimension(); ++q)
    for (std::size_t i = 0; i < dom.count(q); ++i) {
      auto img = image_of(map, dom.simplex(q, i));
      if (img.size() > 1 && !cod.contains(img)) return false;
    }
  return true;
}

bool simplex_surjective(const SimplicialMap& map) {
  const SimplicialComplex& dom = map.domain->complex;
  const SimplicialComplex& cod = map.codomain->complex;
  std::vector<char> hit(cod.vertex_count(), 0);
  for (Vertex v : map.vertex) hit[v] = 1;
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
  for (int q = 1; q <= cod.dimension(); ++q) {
    std::vector<char> covered(cod.count(q), 0);
    for (std::size_t i = 0; i < dom.count(q); ++i) {
      auto img = image_of(map, dom.simplex(q, i));
      if (static_cast<int>(img.size()) != q + 1) continue;
      if (auto at = cod.find(q, img)) covered[*at] = 1;
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) return false;
  }
  return true;
}

bool vertex_injective(const SimplicialMap& map) {
  std::vector<Vertex> v = map.vertex;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

SimplicialComplex subcomplex_M(const Nerve& whole, const Nerve& tail) {
  if (tail.meta.k != whole.meta.k || tail.meta.j <= whole.meta.j)
    throw std::invalid_argument("subcomplex needs N_{j,l} and N_{k,l}, j < k");
  const std::size_t tv = tail.complex.vertex_count();
  const std::size_t wv = whole.complex.vertex_count();
  if (tv == 0 || wv % tv != 0) throw std::invalid_argument("level mismatch");
  SimplicialComplex m(wv);
  std::vector<Vertex> s;
  for (std::size_t u = 0; u < wv / tv; ++u)
    for (int q = 1; q <= tail.complex.dimension(); ++q)
      for (std::size_t i = 0; i < tail.complex.count(q); ++i) {
        s.clear();
        for (Vertex v : tail.complex.simplex(q, i)) s.push_back(static_cast<Vertex>(u * tv + v));
        m.add(s);
      }
  m.seal();
  return m;
}

std::vector<std::uint32_t> component_map(const SimplicialMap& map, const ComponentPartition& dom,
                                         const ComponentPartition& cod) {
  std::vector<std::uint32_t> out(dom.count(), UINT32_MAX);
  for (std::size_t v = 0; v < map.vertex.size(); ++v) {
    const std::uint32_t target = cod.id[map.vertex[v]];
    std::uint32_t& slot = out[dom.id[v]];
    if (slot == UINT32_MAX) slot = target;
    else if (slot != target) throw std::logic_error("map not well defined on components");
  }
  return out;
}

bool onto(const std::vector<std::uint32_t>& cmap, std::size_t codomain_count) {
  std::vector<char> hit(codomain_count, 0);
  for (std::uint32_t c : cmap)
    if (c < codomain_count) hit[c] = 1;
  return std::find(hit.begin(), hit.end(), 0) == hit.end();
}

bool bijective(const std::vector<std::uint32_t>& cmap, std::size_t codomain_count) {
  return cmap.size() == codomain_count && onto(cmap, codomain_count);
}

ConnectivityReport connectivity_report(const NerveEngine& engine, int kmax, const NerveOptions& opts) {
  NerveOptions o = opts;
  o.maxdim = 1;
  o.labels = false;
  ConnectivityReport report;
  for (int k = 2; k <= kmax; ++k) {
    ConnectivityRow row;
    row.k = k;
    row.components_1k = components(engine.build(1, k, o).complex).count();
    row.components_kk1 = components(engine.build(k, k + 1, o).complex).count();
    report.connected_all = report.connected_all && row.components_1k == 1;
    if (row.components_kk1 == 1) ++report.level_connected;
    else report.level_connected_all = false;
    report.rows.push_back(row);
  }
  return report;
}

Rational disconnection_certificate(const GridIfs& ifs, int k, const ComponentPartition& part) {
  const Rational c = ifs.contraction();
  Rational p = 1;
  for (int i = 0; i < k - 1; ++i) p *= c;
  return p * Rational(static_cast<long long>(part.largest()));
}

Rational disconnection_certificate(const NerveEngine& engine, int k, const NerveOptions& opts) {
  NerveOptions o = opts;
  o.maxdim = 1;
  o.labels = false;
  return disconnection_certificate(engine.ifs(), k, components(engine.build(1, k, o).complex));
}

CutAudit cut_projection_audit(const NerveEngine& engine, int m, int j, int axis, const NerveOptions& opts) {
  const GridIfs& ifs = engine.ifs();
  if (m - 1 < j) throw std::invalid_argument("audit needs m - 1 >= j");
  CutAudit audit;
  const int n = ifs.n().at(axis);
  audit.bound = Rational(n - 1, ipow(n, j)) + Rational(2, ipow(n, m - 1));
  audit.widest = 0;
  auto cut = detect_cut(*ifs.level(j), ifs, axis);
  if (!cut) return audit;
  audit.cut = true;
  audit.digit = *cut;

  NerveOptions o = opts;
  o.maxdim = 1;
  o.labels = false;
  const Nerve nerve = engine.build(1, m, o);
  const ComponentPartition part = components(nerve.complex);
  const LatticeBlock block = build_block(ifs, 1, m);
  audit.components = part.count();

  // group vertex coordinates by component, then one min/max per group
  std::vector<std::size_t> start(part.count() + 1, 0);
  for (std::uint32_t c : part.id) ++start[c + 1];
  for (std::size_t c = 0; c < part.count(); ++c) start[c + 1] += start[c];
  std::vector<std::int32_t> grouped(part.id.size());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t v = 0; v < part.id.size(); ++v) grouped[fill[part.id[v]]++] = block.coords[axis][v];

  const kernels::Table& kt = kernels::active();
  const std::int64_t nj = static_cast<std::int64_t>(ipow(n, j));
  const std::int64_t limit = (n - 1) * static_cast<std::int64_t>(ipow(n, m - 1)) + 2 * nj;
  std::int64_t widest = 0;
  for (std::size_t c = 0; c < part.count(); ++c) {
    std::int32_t lo = 0, hi = 0;
    kt.minmax(grouped.data() + start[c], start[c + 1] - start[c], &lo, &hi);
    const std::int64_t span = std::int64_t{hi} + 1 - lo;
    widest = std::max(widest, span);
    if (span * nj > limit) ++audit.violations;
  }
  audit.widest = Rational(widest, ipow(n, m - 1));
  return audit;
}

std::string to_dot(const Nerve& nerve) {
  std::ostringstream out;
  out << "graph N_" << nerve.meta.j << "_" << nerve.meta.k << " {\n";
  for (std::size_t v = 0; v < nerve.complex.vertex_count(); ++v) {
    out << "  " << v;
    if (v < nerve.labels.size()) out << " [label=\"" << nerve.labels[v] << "\"]";
    out << ";\n";
  }
  const auto& e = nerve.complex.flat(1);
  for (std::size_t i = 0; i + 1 < e.size(); i += 2) out << "  " << e[i] << " -- " << e[i + 1] << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace nervekit
