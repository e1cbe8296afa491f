#include "catch_amalgamated.hpp"

#include "nervekit/experiments.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/rng.hpp"
#include "support/fixtures.hpp"
#include "support/linalg.hpp"

#include <algorithm>

using namespace nervekit;

namespace {

// Closes the given facets under faces.
SimplicialComplex closure(std::size_t n, const std::vector<std::vector<Vertex>>& facets) {
  SimplicialComplex k(n);
  for (auto f : facets) {
    std::sort(f.begin(), f.end());
    const unsigned m = f.size();
    for (unsigned mask = 1; mask < (1U << m); ++mask) {
      std::vector<Vertex> s;
      for (unsigned i = 0; i < m; ++i)
        if (mask >> i & 1) s.push_back(f[i]);
      if (s.size() >= 2) k.add(s);
    }
  }
  k.seal();
  return k;
}

linalg::Dense dense(const SparseMatrix& m) {
  linalg::Dense out(m.rows, std::vector<Rational>(m.cols, Rational(0)));
  for (std::size_t c = 0; c < m.cols; ++c)
    for (auto [r, v] : m.columns[c]) out[r][c] = v;
  return out;
}

SparseMatrix sparse(const std::vector<std::vector<std::int64_t>>& rows) {
  SparseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t c = 0; c < m.cols; ++c)
    for (std::size_t r = 0; r < m.rows; ++r)
      if (rows[r][c]) m.columns[c].push_back({static_cast<std::uint32_t>(r), rows[r][c]});
  return m;
}

long long euler(const SimplicialComplex& k) {
  long long e = 0;
  for (int q = 0; q <= k.dimension(); ++q) e += (q % 2 ? -1 : 1) * static_cast<long long>(k.count(q));
  return e;
}

// Everything that must hold on any complex.
void invariants(const SimplicialComplex& k) {
  for (int q = 1; q < k.dimension(); ++q) {
    auto a = dense(boundary_matrix(k, q)), b = dense(boundary_matrix(k, q + 1));
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t c = 0; c < b[0].size(); ++c) {
        Rational s = 0;
        for (std::size_t t = 0; t < b.size(); ++t) s += a[r][t] * b[t][c];
        REQUIRE(s == 0);
      }
  }
  BettiReport snf = betti(k, HomologyMethod::Snf);
  CHECK(snf.betti == linalg::betti_q(k));
  CHECK(snf.betti.at(0) == components(k).count());
  long long alt = 0;
  for (std::size_t q = 0; q < snf.betti.size(); ++q) alt += (q % 2 ? -1 : 1) * static_cast<long long>(snf.betti[q]);
  CHECK(alt == euler(k));
}

GridIfs no_corner_draw(std::vector<int> n, int r, int trial, int levels = 8) {
  TrialConfig c;
  c.n = std::move(n);
  c.r = r;
  c.kmax = levels;
  c.require_no_corner = true;
  c.tail_block = 16;
  return sample_system(c, trial);
}

}  // namespace

TEST_CASE("boundary matrices") {
  SimplicialComplex edge = closure(2, {{0, 1}});
  auto e = dense(boundary_matrix(edge, 1));
  CHECK(e == linalg::Dense{{Rational(-1)}, {Rational(1)}});
  CHECK(boundary_matrix(edge, 2).cols == 0);

  SimplicialComplex tri = closure(3, {{0, 1, 2}});
  auto t = dense(boundary_matrix(tri, 2));
  REQUIRE(t.size() == 3);
  CHECK(t[0][0] == 1);
  CHECK(t[1][0] == -1);
  CHECK(t[2][0] == 1);
  CHECK(t == linalg::boundary(tri, 2));

  Nerve n13 = build_nerve(fixtures::two_generator(), 1, 3);
  SparseMatrix d1 = boundary_matrix(n13.complex, 1);
  CHECK(d1.rows == 4);
  CHECK(d1.cols == 3);
  for (const auto& col : d1.columns) {
    REQUIRE(col.size() == 2);
    CHECK(col[0].second == -1);
    CHECK(col[1].second == 1);
  }
  CHECK(dense(d1) == linalg::boundary(n13.complex, 1));
}

TEST_CASE("smith ranks") {
  SmithResult z = smith_ranks(SparseMatrix(3, 4));
  CHECK(z.rank == 0);
  CHECK(z.divisors.empty());

  SmithResult two = smith_ranks(sparse({{2}}));
  CHECK(two.rank == 1);
  CHECK(two.divisors == std::vector<BigInt>{2});
  CHECK(two.torsion() == std::vector<BigInt>{2});

  SimplicialComplex cycle = closure(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  SmithResult c = smith_ranks(boundary_matrix(cycle, 1));
  CHECK(c.rank == 3);
  CHECK(std::all_of(c.divisors.begin(), c.divisors.end(), [](const BigInt& d) { return d == 1; }));

  // diag(2^40, 3^30): the second invariant factor is their product, past 2^63
  const std::int64_t a = std::int64_t(1) << 40, b = 205891132094649LL;
  SmithResult big = smith_ranks(sparse({{a, 0}, {0, b}}));
  CHECK(big.big);
  REQUIRE(big.divisors.size() == 2);
  CHECK(big.divisors[0] == 1);
  CHECK(big.divisors[1] == BigInt(a) * BigInt(b));

  // unit pivots are not the whole story: [[2,4],[6,8]] has divisors 2 and 4
  SmithResult m = smith_ranks(sparse({{2, 4}, {6, 8}}));
  CHECK(m.divisors == std::vector<BigInt>{2, 4});
  CHECK(rank_over_q(sparse({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("projective plane has Z/2 in degree one") {
  SimplicialComplex rp2 = closure(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                      {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
  BettiReport r = betti(rp2);
  CHECK(r.method == "snf");
  CHECK(r.betti == std::vector<std::size_t>{1, 0, 0});
  CHECK(r.torsion.at(1) == std::vector<BigInt>{2});
  CHECK(r.torsion.at(0).empty());
  invariants(rp2);
}

TEST_CASE("betti numbers of small nerves") {
  AffineSystem1D s = fixtures::two_generator();
  CHECK(betti(build_nerve(s, 1, 2)).betti == std::vector<std::size_t>{1, 0});
  CHECK(betti(build_nerve(s, 1, 3)).betti == std::vector<std::size_t>{1, 0});
  CHECK(betti(build_nerve(s, 2, 3)).betti == std::vector<std::size_t>{2, 0});
  CHECK(betti(build_nerve(s, 2, 4)).betti == std::vector<std::size_t>{2, 0});
  CHECK(betti(build_nerve(s, 1, 3)).method == "union-find+euler-graph");

  Nerve c12 = build_nerve(fixtures::carpet(), 1, 2);
  CHECK(c12.complex.vertex_count() == 8);
  BettiReport cb = betti(c12);
  CHECK(cb.betti.at(0) == 1);
  CHECK(cb.betti.at(1) == 1);
  CHECK(linalg::betti_q(c12.complex).at(1) == 1);
  invariants(c12.complex);

  // all eight cubes share the centre: one 7-simplex
  Nerve full = build_nerve(fixtures::full_grid({2, 2, 2}), 1, 2);
  CHECK(full.complex.count(7) == 1);
  BettiReport fb = betti(full);
  CHECK(fb.betti.at(0) == 1);
  for (std::size_t q = 1; q < fb.betti.size(); ++q) CHECK(fb.betti[q] == 0);
  invariants(full.complex);

  CHECK_THROWS(betti(full.complex, HomologyMethod::Fast));
}

TEST_CASE("fast path agrees with smith form on graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    SimplicialComplex g(n);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b)
        if (rng.below(3) == 0) g.add_edge(a, b);
    g.seal();
    CHECK(betti(g, HomologyMethod::Fast).betti == betti(g, HomologyMethod::Snf).betti);
    invariants(g);
  }
}

TEST_CASE("relative homology") {
  Nerve n = build_nerve(fixtures::carpet(), 1, 2);
  RelativeReport same = relative_betti(n.complex, n.complex);
  for (auto b : same.betti) CHECK(b == 0);
  CHECK(same.basis.empty());

  GridIfs g = fixtures::corner_free();
  Nerve n13 = build_nerve(g, 1, 3), n23 = build_nerve(g, 2, 3);
  SimplicialComplex m = subcomplex_M(n13, n23);
  RelativeReport rel = relative_betti(n13.complex, m);
  CHECK(rel.betti.at(0) == 0);
  CHECK(rel.betti.at(1) == 2);
  CHECK(rel.basis.size() == 2);
  for (auto [a, b] : rel.basis) {
    const Vertex e[2] = {a, b};
    CHECK(n13.complex.contains(e));
    CHECK_FALSE(m.contains(e));
  }

  SimplicialComplex other(3);
  other.seal();
  CHECK_THROWS_AS(relative_betti(n.complex, other), std::invalid_argument);
}

TEST_CASE("cross edges") {
  GridIfs g = fixtures::corner_free();
  auto engine = NerveEngine(g);
  Nerve n13 = engine.build(1, 3);
  auto cross = cross_edge_basis(g, n13);
  CHECK(cross.size() == 2);
  for (const auto& e : cross) CHECK(e.adjacent);

  CHECK(cross_edge_basis(fixtures::product_cantor(), build_nerve(fixtures::product_cantor(), 1, 4)).empty());

  for (int trial = 0; trial < 10; ++trial) {
    GridIfs d = no_corner_draw({2, 2}, 1, trial);
    for (int j = 1; j <= 4; ++j) CHECK(cross_edge_basis(d, build_nerve(d, j, j + 2)).size() == 2);
  }

  for (int trial = 0; trial < 6; ++trial) {
    GridIfs d = no_corner_draw({3, 3}, 1 + trial % 2, trial);
    for (int span = 2; span <= 3; ++span) {
      Nerve nv = build_nerve(d, 1, 1 + span);
      std::size_t bound = 2 * static_cast<std::size_t>(std::pow(3, span)) * 2;
      auto edges = cross_edge_basis(d, nv);
      CHECK(edges.size() <= bound);
      RelativeReport rel = relative_betti(nv.complex, subcomplex_M(nv, build_nerve(d, 2, 1 + span)));
      CHECK(rel.betti.at(1) == edges.size());
    }
  }
}

TEST_CASE("rank recursion") {
  NerveEngine cantor(fixtures::product_cantor());
  for (int l = 3; l <= 5; ++l) {
    RecursionReport r = rank_recursion_check(cantor, 1, l);
    const long long p = static_cast<long long>(std::pow(4, l - 1));
    CHECK(r.lhs == -p);
    CHECK(r.rhs == -p);
    CHECK(r.cross == 0);
  }

  NerveEngine cf(fixtures::corner_free());
  RecursionReport f = rank_recursion_check(cf, 1, 3);
  CHECK(f.hypothesis);
  CHECK(f.cross == 2);
  CHECK(f.equal());

  for (int trial = 0; trial < 8; ++trial) {
    NerveEngine e(no_corner_draw({2, 2}, 1, trial));
    RecursionReport r = rank_recursion_check(e, 1, 3);
    CHECK(r.hypothesis);
    CHECK(r.cross == 2);
    CHECK(r.equal());
  }
  for (int trial = 0; trial < 4; ++trial) {
    NerveEngine e(no_corner_draw({3, 3}, 1, trial));
    for (int l = 3; l <= 4; ++l) {
      RecursionReport r = rank_recursion_check(e, 1, l);
      CHECK(r.equal());
      // both sides once more, straight from the rational oracle
      auto whole = linalg::betti_q(e.build(1, l).complex), tail = linalg::betti_q(e.build(2, l).complex);
      const long long lhs = static_cast<long long>(whole.at(1)) - static_cast<long long>(whole.at(0));
      const long long rhs = static_cast<long long>(e.ifs().level(1)->size()) *
                                (static_cast<long long>(tail.at(1)) - static_cast<long long>(tail.at(0))) +
                            static_cast<long long>(r.cross);
      CHECK(lhs == r.lhs);
      CHECK(rhs == r.rhs);
    }
  }
  CHECK_THROWS(rank_recursion_check(cf, 1, 2));
}

TEST_CASE("exact sequence audits") {
  AffineSystem1D s = fixtures::two_generator();
  Nerve n13 = build_nerve(s, 1, 3), n23 = build_nerve(s, 2, 3);
  ExactSequenceReport a = exact_sequence_audit(n13.complex, subcomplex_M(n13, n23));
  CHECK(a.ok());
  CHECK(a.six_term_applies);

  GridIfs g = fixtures::corner_free();
  Nerve f13 = build_nerve(g, 1, 3), f23 = build_nerve(g, 2, 3);
  ExactSequenceReport f = exact_sequence_audit(f13.complex, subcomplex_M(f13, f23));
  CHECK(f.ok());
  CHECK(f.ranks.at(1)[2] == 2);

  for (int trial = 0; trial < 3; ++trial) {
    TrialConfig c;
    c.n = {3, 3};
    c.r = 2;
    c.kmax = 5;
    GridIfs d = sample_system(c, trial);
    NerveOptions o;
    o.maxdim = 2;
    Nerve w = build_nerve(d, 1, 4, o), t = build_nerve(d, 2, 4, o);
    ExactSequenceReport r = exact_sequence_audit(w.complex, subcomplex_M(w, t));
    CHECK(r.ok());
  }
}

TEST_CASE("induced maps on H1") {
  GridIfs c = fixtures::carpet();
  Nerve n12 = build_nerve(c, 1, 2), n13 = build_nerve(c, 1, 3);
  CHECK(induced_h1_rank(projection_phi(n13, n12)) >= 1);

  SimplicialMap id{&n13, &n13, {}};
  for (Vertex v = 0; v < n13.complex.vertex_count(); ++v) id.vertex.push_back(v);
  CHECK(induced_h1_rank(id) == betti(n13).betti.at(1));

  AffineSystem1D s = fixtures::two_generator();
  Nerve a13 = build_nerve(s, 1, 3), a12 = build_nerve(s, 1, 2);
  CHECK(induced_h1_rank(projection_phi(a13, a12)) == 0);
}

TEST_CASE("finite-stage traces") {
  NerveEngine full(fixtures::full_grid({2, 2}));
  CechSumiTrace t = cech_sumi_trace(full, 4, 1);
  REQUIRE(t.rows.size() == 3);
  for (const auto& row : t.rows) CHECK(row.betti == 0);
  CechSumiTrace t0 = cech_sumi_trace(full, 4, 0);
  for (const auto& row : t0.rows) CHECK(row.betti == 1);
  CHECK(t0.stabilized);
  CHECK(t0.rows.back().induced == -1);

  NerveEngine carpet(fixtures::carpet());
  CechSumiTrace ct = cech_sumi_trace(carpet, 4, 1);
  CHECK(ct.rows.at(0).betti == 1);
  CHECK(ct.rows.at(1).betti == 9);
  CHECK(ct.rows.at(2).betti == 73);
  for (std::size_t i = 0; i + 1 < ct.rows.size(); ++i) {
    CHECK(ct.rows[i].induced >= 1);
    CHECK(ct.rows[i].induced <= static_cast<long long>(ct.rows[i].betti));
  }
  CHECK(ct.stabilized);

  for (int trial = 0; trial < 5; ++trial) {
    NerveEngine e(no_corner_draw({2, 2}, 1, trial));
    for (const auto& row : cech_sumi_trace(e, 6, 1).rows) {
      CHECK(row.betti == 0);
      CHECK_FALSE(row.torsion);
    }
  }
}

TEST_CASE("growth bounds on corner-free draws") {
  for (int trial = 0; trial < 4; ++trial) {
    NerveEngine e(no_corner_draw({3, 3}, 1, trial));
    for (int l = 3; l <= 5; ++l) {
      LowerBoundReport lb = recursion_lower_bound(e, l);
      CHECK(lb.holds());
      // upper bound, r = 1
      const long long b1 = static_cast<long long>(betti(e.build(1, l)).betti.at(1));
      const long long last = static_cast<long long>(betti(e.build(l - 1, l)).betti.at(1));
      const long long p = l - 2;
      const double up = std::pow(8, p) * static_cast<double>(last - 1) + 2.0 * p * std::pow(8, l);
      CHECK(static_cast<double>(b1 - 1) <= up);
    }
  }
}

TEST_CASE("no torsion and no triangles without corners") {
  for (int trial = 0; trial < 6; ++trial) {
    NerveEngine e(no_corner_draw({trial % 2 ? 3 : 2, 2}, 1 + trial % 2, trial));
    REQUIRE(e.no_corner());
    for (int k = 2; k <= 4; ++k) {
      NerveOptions o;
      o.auto_cap = false;
      Nerve n = e.build(1, k, o);
      CHECK(n.complex.dimension() <= 1);
      BettiReport b = betti(n, HomologyMethod::Snf);
      for (const auto& t : b.torsion) CHECK(t.empty());
      invariants(n.complex);
    }
  }
}
