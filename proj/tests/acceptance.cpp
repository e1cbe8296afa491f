// One PASS/FAIL line per acceptance criterion.  Seeds and tolerances are
// fixed here; nothing is tuned per run.

#include "nervekit/experiments.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/render.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

using namespace nervekit;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// criterion 2
constexpr int kOracleInstances = 500;
constexpr int kOracleDepth = 6;
// criterion 3
constexpr int kRecursionTrialsPerShape = 7;
constexpr int kRecursionMaxL = 5;
// criterion 4
constexpr int kCornerFreeTrials = 100;
constexpr int kCornerFreeKmax = 8;
// criterion 5
constexpr int kGrowthTrials = 20;
constexpr int kGrowthKmax = 7;
constexpr int kGrowthFitLo = 3;
constexpr double kSlopeBelow = 0.25, kSlopeAbove = 0.10;
// criterion 6
constexpr int kPhaseTrials = 100;
constexpr int kPhaseKmax = 8;
constexpr int kCutHorizon = 12;
constexpr int kCutRequired = 99;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Edges = std::set<std::pair<std::string, std::string>>;

Outcome two_generator_goldens() {
  AffineSystem1D s = fixtures::two_generator();
  struct Case {
    int j, k;
    std::size_t vertices;
    Edges edges;
    std::vector<std::size_t> betti;
  };
  const std::vector<Case> cases = {
      {1, 2, 2, {{"a", "b"}}, {1, 0}},
      {1, 3, 4, {{"(a,a)", "(b,a)"}, {"(a,b)", "(b,a)"}, {"(a,b)", "(b,b)"}}, {1, 0}},
      {2, 3, 2, {}, {2, 0}},
      {2, 4, 4, {{"(a,a)", "(a,b)"}, {"(b,a)", "(b,b)"}}, {2, 0}},
  };
  for (const Case& c : cases) {
    Nerve n = build_nerve(s, c.j, c.k);
    if (n.complex.vertex_count() != c.vertices || fixtures::edge_labels(n) != c.edges ||
        betti(n).betti != c.betti || n.meta.unknown != 0)
      return {false, fmt("N_{%d,%d} differs", c.j, c.k)};
  }
  return {true, "4 nerves exact"};
}

Outcome oracle_equivalence() {
  Rng rng(kSeed);
  int instances = 0, tuples = 0, bad = 0;
  while (instances < kOracleInstances) {
    GridIfs g = oracle::random_small_system(rng);
    ContactAutomaton a(g, 1 << g.dim());
    bool used = false;
    for (int rep = 0; rep < 4; ++rep) {
      const int m = 1 + static_cast<int>(rng.below(2));
      const int j = 1 + static_cast<int>(rng.below(g.horizon() + 1));
      if (!g.level_known(j) || !g.level_known(j + m - 1)) continue;
      const std::size_t arity = 2 + rng.below((1U << g.dim()) - 1);
      auto words = oracle::random_tuple(g, rng, j, m, arity);
      if (words.size() < 2) continue;
      Verdict v = decide_tuple_intersection(a, j, words);
      if (!oracle::check_verdict(g, j, words, v, kOracleDepth).empty()) ++bad;
      ++tuples;
      used = true;
    }
    instances += used;
  }
  return {bad == 0, fmt("%d instances, %d tuples, %d disagreements", instances, tuples, bad)};
}

GridIfs corner_free_draw(std::vector<int> n, int r, int kmax, int trial, int tail_block = 32) {
  TrialConfig c;
  c.n = std::move(n);
  c.r = r;
  c.kmax = kmax;
  c.seed = kSeed;
  c.tail_block = tail_block;
  c.require_no_corner = true;
  return sample_system(c, trial);
}

Outcome rank_recursion() {
  int instances = 0, checks = 0, bad = 0;
  for (int n1 : {2, 3})
    for (int n2 : {2, 3})
      for (int r : {1, 2})
        for (int t = 0; t < kRecursionTrialsPerShape; ++t) {
          NerveEngine e(corner_free_draw({n1, n2}, r, kRecursionMaxL, t));
          ++instances;
          for (int l = 3; l <= kRecursionMaxL; ++l)
            for (int j = 1; j + 2 <= l; ++j) {
              RecursionReport rep = rank_recursion_check(e, j, l, HomologyMethod::Snf);
              ++checks;
              if (!rep.hypothesis || !rep.equal()) ++bad;
            }
        }
  return {bad == 0 && instances >= 50, fmt("%d instances, %d (j,l) pairs, %d unequal", instances, checks, bad)};
}

Outcome corner_free_2x2() {
  int bad_cross = 0, bad_homology = 0;
  for (int t = 0; t < kCornerFreeTrials; ++t) {
    NerveEngine e(corner_free_draw({2, 2}, 1, kCornerFreeKmax, t));
    NerveOptions o;
    o.labels = false;
    for (int j = 1; j + 2 <= kCornerFreeKmax; ++j)
      if (cross_edge_basis(e.ifs(), e.build(j, j + 2, o)).size() != 2) ++bad_cross;
    for (int k = 2; k <= kCornerFreeKmax; ++k) {
      BettiReport b = betti(e.build(1, k, o));
      if (b.betti.at(0) != 1 || b.betti.at(1) != 0) ++bad_homology;
    }
  }
  return {bad_cross == 0 && bad_homology == 0,
          fmt("%d draws: %d cross-edge misses, %d stages with H0 != Z or H1 != 0", kCornerFreeTrials, bad_cross,
              bad_homology)};
}

Outcome growth_rate() {
  TrialConfig c;
  c.n = {3, 3};
  c.r = 1;
  c.kmax = kGrowthKmax;
  c.trials = kGrowthTrials;
  c.seed = kSeed;
  c.require_no_corner = true;
  const auto recs = run_trials(c);
  const GrowthFit fit = growth_rate_fit(recs, kGrowthFitLo, kGrowthKmax);
  std::size_t triggered = 0, violations = 0;
  for (int t = 0; t < kGrowthTrials; ++t) {
    NerveEngine e(sample_system(c, t));
    NerveOptions o;
    o.labels = false;
    GrowthBoundCheck g = growth_lower_bound(e, kGrowthKmax, o);
    triggered += g.triggered;
    violations += g.violations;
  }
  const double target = std::log(8.0);
  const bool slope_ok = fit.defined && fit.slope >= target - kSlopeBelow && fit.slope <= target + kSlopeAbove;
  return {slope_ok && violations == 0,
          fmt("slope %.4f (log 8 = %.4f, +-%.4f), %zu points; lower bound %zu triggered, %zu violated", fit.slope,
              target, fit.stderr_, fit.points, triggered, violations)};
}

Outcome connectivity_phases() {
  std::string detail;
  bool ok = true;
  // r < d: always connected
  for (auto [n, r] : {std::pair{std::vector<int>{2, 2}, 1}, std::pair{std::vector<int>{2, 2, 2}, 2}}) {
    TrialConfig c;
    c.n = n;
    c.r = r;
    c.kmax = kPhaseKmax;
    c.trials = kPhaseTrials;
    c.seed = kSeed;
    c.homology = false;
    int connected = 0;
    for (const auto& rec : run_trials(c)) connected += !rec.stages.empty() && rec.stages.back().k == kPhaseKmax &&
                                                       rec.stages.back().connected;
    ok = ok && connected == kPhaseTrials;
    detail += fmt("d=%zu r=%d connected %d/%d; ", n.size(), r, connected, kPhaseTrials);
  }
  // r >= max_k prod_{l != k} n_l on 2x2, i.e. r >= 2
  for (int r : {2, 3}) {
    TrialConfig c;
    c.r = r;
    c.kmax = kCutHorizon;
    c.trials = kPhaseTrials;
    c.seed = kSeed;
    c.homology = false;
    int all_cuts = 0, decreasing = 0;
    for (const auto& rec : run_trials(c)) {
      bool axis[2] = {false, false};
      const GridIfs g({2, 2}, rec.levels, TailPolicy::full());
      for (int t = 0; t < kCutHorizon; ++t)
        for (int a = 0; a < 2; ++a) axis[a] = axis[a] || detect_cut(rec.levels[t], g, a).has_value();
      all_cuts += axis[0] && axis[1];
      bool mono = rec.stages.size() == static_cast<std::size_t>(kCutHorizon - 1);
      for (std::size_t i = 1; mono && i < rec.stages.size(); ++i)
        mono = rec.stages[i].certificate <= rec.stages[i - 1].certificate;
      decreasing += mono && rec.stages.back().certificate < rec.stages.front().certificate;
    }
    ok = ok && all_cuts >= kCutRequired && decreasing >= kCutRequired;
    detail += fmt("2x2 r=%d all-axis cuts %d/%d, certificate decreasing %d/%d; ", r, all_cuts, kPhaseTrials,
                  decreasing, kPhaseTrials);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// criterion 7 -------------------------------------------------------------

struct Audit {
  std::size_t complexes = 0, violations = 0;
  std::vector<std::string> first;

  void fail(const std::string& what) {
    ++violations;
    if (first.size() < 3) first.push_back(what);
  }
};

bool boundary_squares_to_zero(const SimplicialComplex& k) {
  for (int q = 1; q < k.dimension(); ++q) {
    SparseMatrix a = boundary_matrix(k, q), b = boundary_matrix(k, q + 1);
    for (const auto& col : b.columns) {
      std::map<std::uint32_t, std::int64_t> acc;
      for (auto [row, v] : col)
        for (auto [r2, w] : a.columns[row]) acc[r2] += v * w;
      for (auto [r2, s] : acc)
        if (s != 0) return false;
    }
  }
  return true;
}

void audit_complex(Audit& au, const std::string& name, const SimplicialComplex& k, bool planar_corner_free) {
  ++au.complexes;
  if (!boundary_squares_to_zero(k)) au.fail(name + ": boundary squared");
  BettiReport snf = betti(k, HomologyMethod::Snf);
  if (snf.betti.at(0) != components(k).count()) au.fail(name + ": H0 vs union-find");
  long long chi = 0, alt = 0;
  for (int q = 0; q <= k.dimension(); ++q) chi += (q % 2 ? -1 : 1) * static_cast<long long>(k.count(q));
  for (std::size_t q = 0; q < snf.betti.size(); ++q) alt += (q % 2 ? -1 : 1) * static_cast<long long>(snf.betti[q]);
  if (chi != alt) au.fail(name + ": Euler");
  if (planar_corner_free) {
    if (k.dimension() > 1) au.fail(name + ": 2-simplex without corners");
    for (const auto& t : snf.torsion)
      if (!t.empty()) au.fail(name + ": torsion");
  }
}

void audit_system(Audit& au, const std::string& name, const GridIfs& ifs, int kmax) {
  NerveEngine e(ifs);
  const bool cf = ifs.dim() == 2 && e.no_corner();
  NerveOptions o;
  o.auto_cap = false;
  o.labels = false;
  if (ifs.dim() > 2) o.maxdim = 3;
  std::vector<Nerve> stages;
  for (int k = 2; k <= kmax; ++k) stages.push_back(e.build(1, k, o));
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const int k = static_cast<int>(i) + 2;
    audit_complex(au, name + fmt(" N_{1,%d}", k), stages[i].complex, cf);
    if (i + 1 == stages.size()) break;
    SimplicialMap phi = projection_phi(stages[i + 1], stages[i]);
    if (!is_simplicial(phi) || !simplex_surjective(phi)) au.fail(name + ": phi not onto simplices");
    auto dom = components(stages[i + 1].complex), cod = components(stages[i].complex);
    auto cmap = component_map(phi, dom, cod);
    if (!onto(cmap, cod.count())) au.fail(name + ": components not onto");
    const bool level_connected = components(e.build(k, k + 1, o).complex).count() == 1;
    if (level_connected && !bijective(cmap, cod.count())) au.fail(name + ": components not bijective");
  }
  for (int l = 3; l <= kmax; ++l) {
    Nerve whole = e.build(1, l, o), tail = e.build(2, l, o);
    if (!exact_sequence_audit(whole.complex, subcomplex_M(whole, tail)).ok()) au.fail(name + ": exact sequence");
  }
}

Outcome structural_invariants() {
  Audit au;
  AffineSystem1D s = fixtures::two_generator();
  for (int k = 2; k <= 5; ++k) audit_complex(au, fmt("affine N_{1,%d}", k), build_nerve(s, 1, k).complex, false);
  for (int l = 3; l <= 5; ++l) {
    Nerve whole = build_nerve(s, 1, l), tail = build_nerve(s, 2, l);
    if (!exact_sequence_audit(whole.complex, subcomplex_M(whole, tail)).ok()) au.fail("affine exact sequence");
  }
  audit_system(au, "corner-free 2x2", fixtures::corner_free(), 5);
  audit_system(au, "carpet", fixtures::carpet(), 4);
  audit_system(au, "product cantor", fixtures::product_cantor(), 4);
  audit_system(au, "full 2x2", fixtures::full_grid({2, 2}), 4);
  audit_system(au, "full 2x3", fixtures::full_grid({2, 3}), 3);
  for (int t = 0; t < 10; ++t) {
    audit_system(au, fmt("2x2 r=1 #%d", t), corner_free_draw({2, 2}, 1, 6, t), 6);
    audit_system(au, fmt("3x3 r=1 #%d", t), corner_free_draw({3, 3}, 1, 4, t), 4);
    audit_system(au, fmt("2x3 r=2 #%d", t), corner_free_draw({2, 3}, 2, 5, t), 5);
    TrialConfig c;
    c.n = {3, 3};
    c.r = 2 + t % 3;
    c.kmax = 4;
    c.seed = kSeed;
    audit_system(au, fmt("3x3 r=%d #%d", c.r, t), sample_system(c, t), 4);
    c.n = {2, 2, 2};
    c.r = 1 + t % 4;
    audit_system(au, fmt("2x2x2 r=%d #%d", c.r, t), sample_system(c, t), 3);
  }
  std::string detail = fmt("%zu complexes, %zu violations", au.complexes, au.violations);
  for (const auto& f : au.first) detail += "; " + f;
  return {au.violations == 0, detail};
}

Outcome render_goldens() {
  auto golden = [](const std::string& name) {
    std::ifstream in(std::string(NERVEKIT_SOURCE_DIR) + "/tests/golden/" + name + ".ppm", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int same = 0, total = 0;
  for (int m = 1; m <= 3; ++m) {
    ++total;
    same += ppm_bytes(raster_2d(fixtures::product_cantor(), m, 81, 81)) == golden(fmt("cantor_m%d_81", m));
    ++total;
    same += ppm_bytes(raster_2d(fixtures::full_grid({2, 2}), m, 16, 16)) == golden(fmt("full_m%d_16", m));
  }
  ++total;
  same += ppm_bytes(raster_2d(fixtures::product_cantor(), 2, 20, 13)) == golden("cantor_m2_20x13");
  ++total;
  same += ppm_bytes(raster_2d(fixtures::full_grid({3, 3}), 2, 10, 10)) == golden("full3_m2_10");
  return {same == total, fmt("%d/%d rasters byte-identical", same, total)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"two-generator nerve goldens", two_generator_goldens},
      {"contact automaton vs brute force", oracle_equivalence},
      {"rank recursion", rank_recursion},
      {"corner-free 2x2: two cross edges, trivial H1", corner_free_2x2},
      {"growth rate of H1 on 3x3 r=1", growth_rate},
      {"connectivity phases", connectivity_phases},
      {"structural invariants", structural_invariants},
      {"render goldens", render_goldens},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
