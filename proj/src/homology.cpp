#include "nervekit/homology.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace nervekit {

SparseMatrix boundary_matrix(const SimplicialComplex& complex, int q) {
  if (q < 1) throw std::invalid_argument("boundary needs q >= 1");
  SparseMatrix m(complex.count(q - 1), complex.count(q));
  std::vector<Vertex> face;
  for (std::size_t i = 0; i < m.cols; ++i) {
    auto s = complex.simplex(q, i);
    auto& col = m.columns[i];
    for (int drop = 0; drop <= q; ++drop) {
      face.clear();
      for (int t = 0; t <= q; ++t)
        if (t != drop) face.push_back(s[t]);
      auto row = complex.find(q - 1, face);
      if (!row) throw std::logic_error("missing face");
      col.emplace_back(static_cast<std::uint32_t>(*row), drop % 2 == 0 ? 1 : -1);
    }
    std::sort(col.begin(), col.end());
  }
  return m;
}

BettiReport betti(const SimplicialComplex& complex, HomologyMethod method) {
  BettiReport report;
  const int dim = complex.dimension();
  if (dim < 0) {
    report.method = "empty";
    return report;
  }
  if (method != HomologyMethod::Snf && dim <= 1) {
    const std::size_t c = components(complex).count();
    report.betti.push_back(c);
    report.betti.push_back(complex.count(1) + c - complex.vertex_count());
    report.torsion.assign(report.betti.size(), {});
    report.method = "union-find+euler-graph";
    return report;
  }
  if (method == HomologyMethod::Fast) throw std::invalid_argument("fast homology needs a graph");
  // H_1 is always reported, zero or not
  const int top = std::max(dim, 1);
  std::vector<SmithResult> snf(top + 2);
  for (int q = 1; q <= dim; ++q) snf[q] = smith_ranks(boundary_matrix(complex, q));
  for (int q = 0; q <= top; ++q) {
    const std::size_t out = q >= 1 ? snf[q].rank : 0;
    const std::size_t in = snf[q + 1].rank;
    report.betti.push_back(complex.count(q) - out - in);
    report.torsion.push_back(snf[q + 1].torsion());
  }
  report.method = "snf";
  return report;
}

BettiReport betti(const Nerve& nerve, HomologyMethod method) {
  BettiReport r = betti(nerve.complex, method);
  r.meta = nerve.meta;
  return r;
}

namespace {

std::size_t at(const std::vector<std::size_t>& v, int q) {
  return q >= 0 && static_cast<std::size_t>(q) < v.size() ? v[q] : 0;
}

}  // namespace

RelativeReport relative_betti(const SimplicialComplex& n, const SimplicialComplex& m) {
  if (!is_subcomplex(m, n)) throw std::invalid_argument("M is not a subcomplex of N");
  const int dim = n.dimension();
  RelativeReport report;
  if (dim < 0) return report;
  // relative basis: simplices of N outside M, renumbered per dimension
  std::vector<std::vector<std::int64_t>> rel(dim + 1);
  std::vector<std::size_t> rel_count(dim + 2, 0);
  rel[0].assign(n.vertex_count(), -1);
  for (int q = 1; q <= dim; ++q) {
    rel[q].assign(n.count(q), -1);
    for (std::size_t i = 0; i < n.count(q); ++i)
      if (!m.find(q, n.simplex(q, i))) rel[q][i] = static_cast<std::int64_t>(rel_count[q]++);
  }
  std::vector<SmithResult> snf(dim + 2);
  for (int q = 1; q <= dim; ++q) {
    const SparseMatrix full = boundary_matrix(n, q);
    SparseMatrix r(rel_count[q - 1], rel_count[q]);
    for (std::size_t c = 0; c < full.cols; ++c) {
      if (rel[q][c] < 0) continue;
      for (auto [row, v] : full.columns[c])
        if (rel[q - 1][row] >= 0) r.columns[rel[q][c]].emplace_back(static_cast<std::uint32_t>(rel[q - 1][row]), v);
    }
    snf[q] = smith_ranks(r);
  }
  for (int q = 0; q <= dim; ++q) {
    const std::size_t out = q >= 1 ? snf[q].rank : 0;
    report.betti.push_back(rel_count[q] - out - snf[q + 1].rank);
    report.torsion.push_back(snf[q + 1].torsion());
  }
  if (dim <= 1 && rel_count[0] == 0)
    for (std::size_t i = 0; i < n.count(1); ++i)
      if (rel[1][i] >= 0) report.basis.emplace_back(n.simplex(1, i)[0], n.simplex(1, i)[1]);
  return report;
}

bool digits_adjacent(const GridIfs& ifs, FlatDigit a, FlatDigit b) {
  int differing = 0;
  for (int k = 0; k < ifs.dim(); ++k) {
    const int diff = std::abs(ifs.component(a, k) - ifs.component(b, k));
    if (diff > 1) return false;
    differing += diff;
  }
  return differing == 1;
}

std::vector<CrossEdge> cross_edge_basis(const GridIfs& ifs, const Nerve& nerve) {
  const std::size_t block = nerve.complex.vertex_count() / nerve.words.symbols.front().size();
  std::vector<CrossEdge> out;
  const auto& e = nerve.complex.flat(1);
  for (std::size_t i = 0; i + 1 < e.size(); i += 2) {
    const std::size_t ia = e[i] / block, ib = e[i + 1] / block;
    if (ia == ib) continue;
    out.push_back({e[i], e[i + 1],
                   digits_adjacent(ifs, nerve.words.symbols.front()[ia], nerve.words.symbols.front()[ib])});
  }
  return out;
}

RecursionReport rank_recursion_check(const NerveEngine& engine, int j, int l, HomologyMethod method,
                                     const NerveOptions& opts) {
  if (l < j + 2) throw std::invalid_argument("recursion needs l >= j + 2");
  RecursionReport report;
  report.hypothesis = engine.ifs().dim() == 2 && engine.no_corner();
  const Nerve whole = engine.build(j, l, opts);
  const Nerve tail = engine.build(j + 1, l, opts);
  const BettiReport bw = betti(whole, method);
  const BettiReport bt = betti(tail, method);
  report.cross = cross_edge_basis(engine.ifs(), whole).size();
  report.lhs = static_cast<long long>(at(bw.betti, 1)) - static_cast<long long>(at(bw.betti, 0));
  const long long tail_diff = static_cast<long long>(at(bt.betti, 1)) - static_cast<long long>(at(bt.betti, 0));
  report.rhs = static_cast<long long>(engine.ifs().level(j)->size()) * tail_diff + static_cast<long long>(report.cross);
  return report;
}

ExactSequenceReport exact_sequence_audit(const SimplicialComplex& n, const SimplicialComplex& m) {
  const BettiReport bn = betti(n, HomologyMethod::Snf);
  const BettiReport bm = betti(m, HomologyMethod::Snf);
  const RelativeReport rel = relative_betti(n, m);
  ExactSequenceReport report;
  const int top = std::max({n.dimension(), m.dimension(), 1});
  for (int q = 0; q <= top; ++q) {
    report.ranks.push_back({at(bm.betti, q), at(bn.betti, q), at(rel.betti, q)});
    const long long s = static_cast<long long>(at(bm.betti, q)) - static_cast<long long>(at(bn.betti, q)) +
                        static_cast<long long>(at(rel.betti, q));
    report.full += q % 2 == 0 ? s : -s;
  }
  auto r = [&](int q, int i) { return static_cast<long long>(report.ranks[q][i]); };
  report.six_term = r(1, 0) - r(1, 1) + r(1, 2) - r(0, 0) + r(0, 1) - r(0, 2);
  report.six_term_applies = at(rel.betti, 2) == 0;
  return report;
}

std::size_t induced_h1_rank(const SimplicialMap& map) {
  const SimplicialComplex& dom = map.domain->complex;
  const SimplicialComplex& cod = map.codomain->complex;
  const std::size_t nv = dom.vertex_count();
  const std::size_t ne = dom.count(1);

  // spanning forest of the domain's 1-skeleton
  std::vector<std::vector<std::pair<Vertex, std::size_t>>> adj(nv);
  for (std::size_t e = 0; e < ne; ++e) {
    auto s = dom.simplex(1, e);
    adj[s[0]].emplace_back(s[1], e);
    adj[s[1]].emplace_back(s[0], e);
  }
  std::vector<std::int64_t> parent_edge(nv, -1);
  std::vector<Vertex> parent(nv);
  std::vector<std::size_t> depth(nv, 0);
  std::vector<char> seen(nv, 0), tree(ne, 0);
  for (Vertex root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    parent[root] = root;
    std::vector<Vertex> queue{root};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Vertex x = queue[h];
      for (auto [y, e] : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          parent[y] = x;
          parent_edge[y] = static_cast<std::int64_t>(e);
          depth[y] = depth[x] + 1;
          tree[e] = 1;
          queue.push_back(y);
        }
    }
  }

  // columns: boundary of the codomain's 2-simplices, then images of cycles
  SparseMatrix boundary2 = boundary_matrix(cod, 2);
  if (cod.dimension() < 2) boundary2 = SparseMatrix(cod.count(1), 0);
  SparseMatrix joined = boundary2;
  const std::size_t base_rank = rank_over_q(boundary2);

  auto push = [&](std::map<std::uint32_t, std::int64_t>& chain, Vertex from, Vertex to) {
    Vertex a = map.vertex[from], b = map.vertex[to];
    if (a == b) return;
    std::int64_t sign = 1;
    if (a > b) {
      std::swap(a, b);
      sign = -1;
    }
    const Vertex e[2] = {a, b};
    auto idx = cod.find(1, e);
    if (!idx) throw std::logic_error("map is not simplicial on edges");
    chain[static_cast<std::uint32_t>(*idx)] += sign;
  };
  for (std::size_t e = 0; e < ne; ++e) {
    if (tree[e]) continue;
    auto s = dom.simplex(1, e);
    std::map<std::uint32_t, std::int64_t> chain;
    push(chain, s[0], s[1]);
    // back from s[1] to s[0] through the tree
    Vertex x = s[1], y = s[0];
    std::vector<Vertex> down;
    while (x != y) {
      if (depth[x] >= depth[y]) {
        push(chain, x, parent[x]);
        x = parent[x];
      } else {
        down.push_back(y);
        y = parent[y];
      }
    }
    for (std::size_t i = down.size(); i-- > 0;) push(chain, parent[down[i]], down[i]);
    std::vector<std::pair<std::uint32_t, std::int64_t>> col;
    for (auto [r, v] : chain)
      if (v != 0) col.emplace_back(r, v);
    joined.columns.push_back(std::move(col));
    ++joined.cols;
  }
  return rank_over_q(joined) - base_rank;
}

CechSumiTrace cech_sumi_trace(const NerveEngine& engine, int kmax, int q, const NerveOptions& opts) {
  if (q < 0) throw std::invalid_argument("q must be non-negative");
  CechSumiTrace trace;
  trace.q = q;
  Nerve current = engine.build(1, 2, opts);
  for (int k = 2; k <= kmax; ++k) {
    TraceRow row;
    row.k = k;
    const BettiReport b = betti(current);
    row.betti = at(b.betti, q);
    row.torsion = q < static_cast<int>(b.torsion.size()) && !b.torsion[q].empty();
    if (k < kmax) {
      Nerve fine = engine.build(1, k + 1, opts);
      const SimplicialMap phi = projection_phi(fine, current);
      const ComponentPartition pf = components(fine.complex), pc = components(current.complex);
      const auto cmap = component_map(phi, pf, pc);
      row.components_bijective = bijective(cmap, pc.count());
      if (q == 0) row.induced = static_cast<long long>(pc.count());
      else if (q == 1) row.induced = static_cast<long long>(induced_h1_rank(phi));
      current = std::move(fine);
    }
    trace.rows.push_back(row);
  }
  // bijective from some stage through the last checked one
  if (trace.rows.size() >= 2) {
    std::size_t last = trace.rows.size() - 1;  // last row has no map
    trace.stabilized = trace.rows[last - 1].components_bijective;
  }
  return trace;
}

LowerBoundReport recursion_lower_bound(const NerveEngine& engine, int l, const NerveOptions& opts) {
  if (l < 3) throw std::invalid_argument("lower bound needs l >= 3");
  LowerBoundReport report;
  const BettiReport whole = betti(engine.build(1, l, opts));
  const BettiReport last = betti(engine.build(l - 1, l, opts));
  report.lhs = static_cast<long long>(at(whole.betti, 1)) - static_cast<long long>(at(whole.betti, 0));
  BigInt prod = 1;
  for (int t = 1; t <= l - 2; ++t) prod *= static_cast<unsigned long long>(engine.ifs().level(t)->size());
  report.rhs = prod * BigInt(static_cast<long long>(at(last.betti, 1)) - static_cast<long long>(at(last.betti, 0)));
  return report;
}

}  // namespace nervekit
