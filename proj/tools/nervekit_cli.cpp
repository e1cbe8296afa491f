#include "nervekit/errors.hpp"
#include "nervekit/experiments.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/json_io.hpp"
#include "nervekit/kernels.hpp"
#include "nervekit/render.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#ifndef NERVEKIT_VERSION
#define NERVEKIT_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace nervekit;
using nlohmann::json;

namespace {

constexpr int kConfigError = 1;
constexpr int kBudgetError = 2;
constexpr int kVerifyFailed = 3;

struct Args {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> kmax, trials, maxdim;
  std::optional<unsigned> threads;
  std::optional<std::string> mode;
  int j = 1, k = 2;
  int trial = 0;
  int depth = 3, width = 243, height = 243;
  std::string data = "data";
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Collects what a run wrote, then records it next to the outputs.
struct Run {
  std::string command;
  std::vector<std::string> argv;
  fs::path dir;
  json config;  // effective, after overrides
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;

  fs::path file(const std::string& name) {
    fs::create_directories(dir);
    outputs.push_back(name);
    return dir / name;
  }

  void manifest() const {
    const std::string canon = config.dump();
    json m = {{"command", command},
              {"argv", argv},
              {"config", config},
              {"config_hash", "fnv1a64:" + hex(fnv1a(canon))},
              {"parameters", params},
              {"cell_budget", default_cell_budget()},
              {"outputs", outputs},
              {"versions",
               {{"nervekit", NERVEKIT_VERSION},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", __VERSION__},
                {"isa", kernels::active_isa() == kernels::Isa::Avx2 ? "avx2" : "scalar"}}}};
    if (seed) m["seed"] = *seed;
    fs::create_directories(dir);
    write_text_file((dir / (command + ".manifest.json")).string(), m.dump(2) + "\n");
  }
};

json load_config(const Args& a) {
  if (a.config.empty()) throw std::invalid_argument("--config is required");
  return read_json_file(a.config);
}

NerveOptions nerve_options(const Args& a) {
  NerveOptions o;
  if (a.mode) o.mode = parse_verdict_mode(*a.mode);
  if (a.maxdim) o.maxdim = *a.maxdim;
  return o;
}

std::string list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

// Either kind of system, built once.
struct System {
  std::optional<AffineSystem1D> affine;
  std::optional<NerveEngine> grid;

  explicit System(const json& j) {
    if (is_affine(j)) affine.emplace(affine_from_json(j));
    else grid.emplace(grid_from_json(j));
  }
  Nerve build(int j, int k, const NerveOptions& o) const {
    return affine ? build_nerve(*affine, j, k, o) : grid->build(j, k, o);
  }
};

void check_jk(const Args& a) {
  if (a.j < 1 || a.k <= a.j) throw std::invalid_argument("need 1 <= j < k");
}

int cmd_gen(const Args& a, Run& run) {
  TrialConfig c = a.config.empty() ? TrialConfig{} : trial_config_from_json(load_config(a));
  if (a.seed) c.seed = *a.seed;
  if (a.kmax) c.kmax = *a.kmax;
  validate(c);
  std::uint64_t used = 0;
  int redraws = 0;
  GridIfs g = sample_system(c, a.trial, &used, &redraws);
  run.config = to_json(c);
  run.seed = c.seed;
  run.params = {{"trial", a.trial}, {"level_seed", used}, {"redraws", redraws}};
  write_text_file(run.file("system.json").string(), to_json(g).dump(2) + "\n");
  std::cout << "system d=" << g.dim() << " levels=" << g.horizon() << " tail=" << to_string(g.tail().kind)
            << " no_corner=" << (no_corner_check(g) ? 1 : 0) << "\n";
  return 0;
}

int cmd_nerve(const Args& a, Run& run) {
  check_jk(a);
  run.config = load_config(a);
  System sys(run.config);
  const NerveOptions o = nerve_options(a);
  Nerve n = sys.build(a.j, a.k, o);
  run.params = {{"j", a.j}, {"k", a.k}, {"verdict_mode", to_string(o.mode)}, {"maxdim", o.maxdim}};
  const std::string stem = "nerve_" + std::to_string(a.j) + "_" + std::to_string(a.k);
  write_text_file(run.file(stem + ".json").string(), to_json(n).dump(2) + "\n");
  write_text_file(run.file(stem + ".dot").string(), to_dot(n));
  std::cout << "N_{" << a.j << "," << a.k << "}: " << n.complex.vertex_count() << " vertices";
  for (int q = 1; q <= n.complex.dimension(); ++q) std::cout << ", " << n.complex.count(q) << " " << q << "-simplices";
  std::cout << ", unknown " << n.meta.unknown << "\n";
  return 0;
}

int cmd_homology(const Args& a, Run& run) {
  check_jk(a);
  run.config = load_config(a);
  System sys(run.config);
  const NerveOptions o = nerve_options(a);
  Nerve n = sys.build(a.j, a.k, o);
  BettiReport b = betti(n);
  json out = {{"betti", to_json(b)}};
  std::cout << "N_{" << a.j << "," << a.k << "} betti " << list(b.betti);
  for (std::size_t q = 0; q < b.torsion.size(); ++q)
    if (!b.torsion[q].empty()) std::cout << " torsion H" << q << " present";
  std::cout << " (" << b.method << ")\n";

  if (a.k >= a.j + 2) {
    Nerve tail = sys.build(a.j + 1, a.k, o);
    SimplicialComplex m = subcomplex_M(n, tail);
    ExactSequenceReport ex = exact_sequence_audit(n.complex, m);
    RelativeReport rel = relative_betti(n.complex, m);
    json ranks = json::array();
    for (const auto& r : ex.ranks) ranks.push_back({{"M", r[0]}, {"N", r[1]}, {"N,M", r[2]}});
    out["relative"] = {{"betti", rel.betti}, {"basis", rel.basis}};
    out["exact_sequence"] = {{"ranks", ranks}, {"six_term", ex.six_term}, {"full", ex.full},
                             {"six_term_applies", ex.six_term_applies}, {"ok", ex.ok()}};
    std::cout << "relative to M: betti " << list(rel.betti) << ", exact sequence " << (ex.ok() ? "ok" : "BROKEN")
              << "\n";
    if (sys.grid && sys.grid->ifs().dim() == 2) {
      RecursionReport r = rank_recursion_check(*sys.grid, a.j, a.k, HomologyMethod::Snf, o);
      out["recursion"] = {{"hypothesis", r.hypothesis}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"cross", r.cross},
                          {"equal", r.equal()}};
      std::cout << "rank recursion: " << r.lhs << " vs " << r.rhs << " (cross " << r.cross << ", no-corner "
                << (r.hypothesis ? "yes" : "no") << ")\n";
    }
  }
  run.params = {{"j", a.j}, {"k", a.k}, {"verdict_mode", to_string(o.mode)}, {"maxdim", o.maxdim}};
  write_text_file(run.file("homology_" + std::to_string(a.j) + "_" + std::to_string(a.k) + ".json").string(),
                  out.dump(2) + "\n");
  return 0;
}

int cmd_components(const Args& a, Run& run) {
  const int kmax = a.kmax.value_or(4);
  if (kmax < 2) throw std::invalid_argument("--kmax must be at least 2");
  run.config = load_config(a);
  System sys(run.config);
  NerveOptions o = nerve_options(a);
  o.maxdim = 1;
  json rows = json::array();
  for (int k = 2; k <= kmax; ++k) {
    ComponentPartition p = components(sys.build(1, k, o).complex);
    json row = {{"k", k}, {"components", p.count()}, {"largest", p.largest()}, {"id", p.id}};
    if (sys.grid) {
      row["certificate"] = to_string(disconnection_certificate(sys.grid->ifs(), k, p));
      row["level_components"] = components(sys.build(k, k + 1, o).complex).count();
    }
    std::cout << "k=" << k << " components " << p.count() << " largest " << p.largest();
    if (sys.grid) std::cout << " certificate " << row["certificate"].get<std::string>();
    std::cout << "\n";
    rows.push_back(row);
  }
  json out = {{"stages", rows}};
  if (sys.grid) {
    ConnectivityReport r = connectivity_report(*sys.grid, kmax, o);
    out["connected_all"] = r.connected_all;
    out["level_connected"] = r.level_connected;
    out["level_connected_all"] = r.level_connected_all;
  }
  run.params = {{"kmax", kmax}, {"verdict_mode", to_string(o.mode)}};
  write_text_file(run.file("components.json").string(), out.dump(2) + "\n");
  return 0;
}

int cmd_percolate(const Args& a, Run& run) {
  TrialConfig c = trial_config_from_json(load_config(a));
  if (a.seed) c.seed = *a.seed;
  if (a.kmax) c.kmax = *a.kmax;
  if (a.trials) c.trials = *a.trials;
  if (a.threads) c.threads = *a.threads;
  if (a.mode) c.mode = parse_verdict_mode(*a.mode);
  validate(c);
  run.config = to_json(c);
  run.seed = c.seed;
  const auto recs = run_trials(c);
  const fs::path stem = run.file("percolate.csv").replace_extension();
  run.outputs.push_back("percolate.json");
  emit(c, recs, stem.string());

  std::size_t complete = 0, connected = 0, with_b1 = 0, truncated = 0;
  double b1 = 0;
  for (const auto& r : recs) {
    truncated += r.truncated;
    if (r.stages.empty() || r.stages.back().k != c.kmax) continue;
    ++complete;
    connected += r.stages.back().connected;
    if (r.stages.back().betti1 >= 0) {
      ++with_b1;
      b1 += static_cast<double>(r.stages.back().betti1);
    }
  }
  std::printf("trials=%d complete=%zu truncated=%zu connected=%.2f", c.trials, complete, truncated,
              complete ? static_cast<double>(connected) / complete : 0.0);
  if (with_b1) std::printf(" betti1=%g", b1 / with_b1);
  const GrowthFit fit = growth_rate_fit(recs, 2, c.kmax);
  if (fit.defined) std::printf(" growth=%.4f", fit.slope);
  std::printf("\n");
  return 0;
}

int cmd_render(const Args& a, Run& run) {
  run.config = load_config(a);
  GridIfs g = grid_from_json(run.config);
  Raster r = raster_2d(g, a.depth, a.width, a.height);
  run.params = {{"depth", a.depth}, {"width", a.width}, {"height", a.height}};
  write_ppm(r, run.file("render.ppm").string());
  std::cout << "render " << a.width << "x" << a.height << " depth " << a.depth << ": " << r.filled()
            << " pixels set\n";
  return 0;
}

using Edges = std::set<std::pair<std::string, std::string>>;

Edges edges(const Nerve& n) {
  Edges out;
  const auto& e = n.complex.flat(1);
  for (std::size_t i = 0; i + 1 < e.size(); i += 2) {
    std::string x = n.labels.at(e[i]), y = n.labels.at(e[i + 1]);
    if (y < x) std::swap(x, y);
    out.emplace(x, y);
  }
  return out;
}

int cmd_verify(const Args& a, Run& run) {
  const fs::path dir = a.data;
  int failed = 0;
  auto report = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    failed += !ok;
  };

  AffineSystem1D s = affine_from_json(read_json_file((dir / "two_generator.json").string()));
  report(edges(build_nerve(s, 1, 2)) == Edges{{"a", "b"}}, "two-generator N_{1,2}");
  report(edges(build_nerve(s, 1, 3)) == Edges{{"(a,a)", "(b,a)"}, {"(a,b)", "(b,a)"}, {"(a,b)", "(b,b)"}},
         "two-generator N_{1,3}");
  report(build_nerve(s, 2, 3).complex.count(1) == 0, "two-generator N_{2,3}");
  report(edges(build_nerve(s, 2, 4)) == Edges{{"(a,a)", "(a,b)"}, {"(b,a)", "(b,b)"}}, "two-generator N_{2,4}");
  report(betti(build_nerve(s, 1, 3)).betti == std::vector<std::size_t>{1, 0} &&
             betti(build_nerve(s, 2, 4)).betti == std::vector<std::size_t>{2, 0},
         "two-generator betti numbers");

  NerveEngine cf(grid_from_json(read_json_file((dir / "corner_free_2x2.json").string())));
  report(cf.no_corner(), "corner-free 2x2 has no corner");
  for (int j = 1; j <= 4; ++j)
    report(cross_edge_basis(cf.ifs(), cf.build(j, j + 2)).size() == 2,
           "corner-free 2x2 cross edges of N_{" + std::to_string(j) + "," + std::to_string(j + 2) + "} = 2");
  for (int l = 3; l <= 6; ++l) {
    RecursionReport r = rank_recursion_check(cf, 1, l);
    report(r.hypothesis && r.equal(), "rank recursion on corner-free 2x2, l=" + std::to_string(l));
  }
  for (int k = 2; k <= 6; ++k)
    report(betti(cf.build(1, k)).betti == std::vector<std::size_t>{1, 0},
           "corner-free 2x2 N_{1," + std::to_string(k) + "} betti [1, 0]");

  GridIfs carpet = grid_from_json(read_json_file((dir / "carpet.json").string()));
  const auto cb = betti(build_nerve(carpet, 1, 2)).betti;
  report(cb.at(0) == 1 && cb.at(1) == 1, "carpet N_{1,2} has one component and one hole");

  // drawn instances at a fixed seed
  TrialConfig c;
  c.n = {3, 3};
  c.r = 1;
  c.kmax = 5;
  c.require_no_corner = true;
  for (int t = 0; t < 3; ++t) {
    NerveEngine e(sample_system(c, t));
    report(rank_recursion_check(e, 1, 4).equal(), "rank recursion on 3x3 r=1 draw " + std::to_string(t));
  }
  run.params = {{"data", a.data}, {"failed", failed}};
  std::cout << (failed ? "verify: " + std::to_string(failed) + " mismatches\n" : "verify: all checks passed\n");
  return failed ? kVerifyFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nervekit: nerves and homology of non-autonomous fractal squares"};
  app.require_subcommand(1);
  Args a;
  std::function<int(const Args&, Run&)> handler;
  Run run;

  auto sub = [&](const char* name, const char* about, std::function<int(const Args&, Run&)> fn) {
    CLI::App* s = app.add_subcommand(name, about);
    s->add_option("--config", a.config, "JSON config or system");
    s->add_option("--out", a.out, "output directory");
    s->add_option("--seed", a.seed);
    s->add_option("--kmax", a.kmax);
    s->add_option("--trials", a.trials);
    s->add_option("--threads", a.threads);
    s->add_option("--verdict-mode", a.mode)->check(CLI::IsMember({"exact", "outer", "inner"}));
    s->add_option("--maxdim", a.maxdim);
    s->add_option("--j", a.j);
    s->add_option("--k", a.k);
    s->callback([&, name, fn] {
      run.command = name;
      handler = fn;
    });
    return s;
  };
  sub("gen", "sample a random system", cmd_gen)->add_option("--trial", a.trial, "trial index");
  sub("nerve", "write N_{j,k} as JSON and DOT", cmd_nerve);
  sub("homology", "Betti numbers of N_{j,k} and the audits", cmd_homology);
  sub("components", "components of N_{1,k} up to kmax", cmd_components);
  sub("percolate", "run random trials", cmd_percolate);
  CLI::App* render = sub("render", "rasterize a depth-m approximation", cmd_render);
  render->add_option("--depth", a.depth);
  render->add_option("--width", a.width);
  render->add_option("--height", a.height);
  sub("verify", "bundled golden checks", cmd_verify)->add_option("--data", a.data, "data directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  run.argv.assign(argv, argv + argc);
  run.dir = a.out;
  try {
    const int code = handler(a, run);
    if (run.command != "verify" || app.get_subcommand("verify")->count("--out")) run.manifest();
    return code;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
