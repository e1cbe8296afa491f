#include "nervekit/experiments.hpp"

#include "nervekit/errors.hpp"
#include "nervekit/json_io.hpp"
#include "nervekit/rng.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nervekit {

void validate(const TrialConfig& c) {
  if (c.n.empty()) throw std::invalid_argument("n must have at least one axis");
  std::size_t alphabet = 1;
  for (int v : c.n) {
    if (v < 2) throw std::invalid_argument("every n_k must be at least 2");
    alphabet *= static_cast<std::size_t>(v);
  }
  if (c.r < 1 || static_cast<std::size_t>(c.r) >= alphabet)
    throw std::invalid_argument("r must lie in [1, #I - 1]");
  if (c.kmax < 2) throw std::invalid_argument("kmax must be at least 2");
  if (c.trials < 1) throw std::invalid_argument("trials must be positive");
  if (c.tail_block < 1) throw std::invalid_argument("tail_block must be positive");
  if (c.max_redraws < 1) throw std::invalid_argument("max_redraws must be positive");
}

GridIfs sample_system(const TrialConfig& c, int trial, std::uint64_t* used_seed, int* redraws) {
  const Rng base = Rng(c.seed).split(static_cast<std::uint64_t>(trial));
  const int count = c.kmax - 1 + c.tail_block;
  for (int attempt = 0; attempt < c.max_redraws; ++attempt) {
    const std::uint64_t s = base.split(static_cast<std::uint64_t>(attempt)).seed();
    LevelSample sample = sample_levels(c.n, c.r, count, s);
    GridIfs ifs(c.n, std::move(sample.levels), TailPolicy::periodic(c.tail_block));
    if (!c.require_no_corner || no_corner_check(ifs)) {
      if (used_seed) *used_seed = s;
      if (redraws) *redraws = attempt;
      return ifs;
    }
  }
  throw std::runtime_error("no corner-free system found within max_redraws");
}

TrialRecord run_trial(const TrialConfig& c, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  GridIfs sampled = sample_system(c, trial, &rec.seed, &rec.redraws);
  rec.levels = sampled.stored_levels();
  const int d = c.d();
  // edges are enough unless homology needs the higher simplices
  const bool planar = d == 2 && no_corner_check(sampled);
  const int arity = (c.homology && !planar) ? 0 : 2;
  NerveEngine engine(std::move(sampled), arity);
  const GridIfs& ifs = engine.ifs();
  rec.no_corner = engine.no_corner();

  NerveOptions opts;
  opts.mode = c.mode;
  opts.cell_budget = c.cell_budget;
  opts.labels = false;
  opts.maxdim = 1;

  std::vector<int> cuts(d, 0);
  for (int k = 2; k <= c.kmax; ++k) {
    for (int axis = 0; axis < d; ++axis)
      if (detect_cut(*ifs.level(k - 1), ifs, axis)) ++cuts[axis];
    StageRecord st;
    st.k = k;
    st.cuts = cuts;
    try {
      Nerve graph = engine.build(1, k, opts);
      ComponentPartition part = components(graph.complex);
      st.components = part.count();
      st.connected = part.count() == 1;
      st.cross_edges = cross_edge_basis(ifs, graph).size();
      st.certificate = disconnection_certificate(ifs, k, part);
      if (c.homology) {
        if (planar) {
          st.betti1 = static_cast<long long>(graph.complex.count(1) + part.count()) -
                      static_cast<long long>(graph.complex.count(0));
        } else if (graph.complex.count(0) <= 4096) {
          NerveOptions full = opts;
          full.maxdim = 2;
          st.betti1 = static_cast<long long>(
              betti(engine.build(1, k, full), HomologyMethod::Snf).betti.at(1));
        }
      }
    } catch (const BudgetExceeded&) {
      rec.truncated = true;
      break;
    }
    rec.stages.push_back(std::move(st));
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const TrialConfig& c) {
  validate(c);
  std::vector<TrialRecord> out(c.trials);
  const unsigned workers = std::max(1U, std::min<unsigned>(c.threads, static_cast<unsigned>(c.trials)));
  if (workers == 1) {
    for (int i = 0; i < c.trials; ++i) out[i] = run_trial(c, i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < c.trials; i = next++) out[i] = run_trial(c, i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = c.trials;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

GrowthFit growth_rate_fit(const std::vector<TrialRecord>& records, int k_lo, int k_hi, bool difference) {
  GrowthFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& rec : records)
    for (const auto& st : rec.stages) {
      if (st.k < k_lo || st.k > k_hi || st.betti1 < 0) continue;
      const long long y = difference ? st.betti1 - static_cast<long long>(st.components) + 1 : st.betti1;
      if (y <= 0) {
        ++fit.zero_stages;
        continue;
      }
      const double x = st.k, ly = std::log(static_cast<double>(y));
      sx += x;
      sy += ly;
      sxx += x * x;
      sxy += x * ly;
      syy += ly * ly;
      ++fit.points;
    }
  const double n = static_cast<double>(fit.points);
  const double den = n * sxx - sx * sx;
  if (fit.points < 2 || den <= 0) return fit;
  fit.defined = true;
  fit.slope = (n * sxy - sx * sy) / den;
  const double icept = (sy - fit.slope * sx) / n;
  if (fit.points > 2) {
    double sse = 0;
    for (const auto& rec : records)
      for (const auto& st : rec.stages) {
        if (st.k < k_lo || st.k > k_hi || st.betti1 < 0) continue;
        const long long y = difference ? st.betti1 - static_cast<long long>(st.components) + 1 : st.betti1;
        if (y <= 0) continue;
        const double e = std::log(static_cast<double>(y)) - icept - fit.slope * st.k;
        sse += e * e;
      }
    fit.stderr_ = std::sqrt(sse / (n - 2) / (sxx - sx * sx / n));
  }
  return fit;
}

GrowthBoundCheck growth_lower_bound(const NerveEngine& engine, int kmax, const NerveOptions& opts) {
  GrowthBoundCheck out;
  const GridIfs& ifs = engine.ifs();
  for (int k = 2; k + 1 <= kmax; ++k) {
    BettiReport local = betti(engine.build(k - 1, k + 1, opts));
    if (static_cast<long long>(local.betti.at(1)) - static_cast<long long>(local.betti.at(0)) < 1) continue;
    ++out.triggered;
    BigInt bound = 1;
    for (int t = 1; t <= k - 2; ++t) bound *= ifs.level(t)->size();
    BettiReport whole = betti(engine.build(1, k + 1, opts));
    if (BigInt(whole.betti.at(1)) < bound) ++out.violations;
  }
  return out;
}

std::vector<PhaseRow> connectivity_phase_table(const std::vector<int>& n, int r_lo, int r_hi, int trials,
                                               int kmax, std::uint64_t seed, unsigned threads) {
  std::vector<PhaseRow> rows;
  for (int r = r_lo; r <= r_hi; ++r) {
    TrialConfig c;
    c.n = n;
    c.r = r;
    c.kmax = kmax;
    c.trials = trials;
    c.seed = seed;
    c.homology = false;
    c.threads = threads;
    const auto recs = run_trials(c);
    PhaseRow row;
    row.r = r;
    row.trials = trials;
    for (int i = 0; i < trials; ++i) {
      const TrialRecord& rec = recs[i];
      if (!rec.stages.empty()) {
        const StageRecord& last = rec.stages.back();
        if (last.connected) row.connected += 1;
        bool all = true;
        for (int v : last.cuts) all = all && v > 0;
        if (all) row.all_axis_cuts += 1;
        row.certificate += to_double(last.certificate);
      }
      if (core_line_witness(sample_system(c, i), 1, 0)) row.core_line += 1;
    }
    row.connected /= trials;
    row.all_axis_cuts /= trials;
    row.certificate /= trials;
    row.core_line /= trials;
    rows.push_back(row);
  }
  return rows;
}

std::string csv_header(int d) {
  std::string h = "trial,k,connected,components,betti1,cross_edges";
  for (int a = 1; a <= d; ++a) h += ",cut_axis" + std::to_string(a);
  return h + ",certificate\n";
}

std::string to_csv(const std::vector<TrialRecord>& records, int d) {
  std::ostringstream os;
  os << csv_header(d);
  for (const auto& rec : records)
    for (const auto& st : rec.stages) {
      os << rec.trial << ',' << st.k << ',' << (st.connected ? 1 : 0) << ',' << st.components << ',';
      if (st.betti1 >= 0) os << st.betti1;
      os << ',' << st.cross_edges;
      for (int v : st.cuts) os << ',' << v;
      os << ',' << to_string(st.certificate) << '\n';
    }
  return os.str();
}

std::string summary_json(const TrialConfig& c, const std::vector<TrialRecord>& records) {
  nlohmann::json j;
  j["config"] = to_json(c);
  nlohmann::json trials = nlohmann::json::array();
  std::size_t connected = 0, truncated = 0, complete = 0;
  for (const auto& rec : records) {
    nlohmann::json t;
    t["trial"] = rec.trial;
    t["seed"] = rec.seed;
    t["redraws"] = rec.redraws;
    t["no_corner"] = rec.no_corner;
    t["truncated"] = rec.truncated;
    t["stages"] = rec.stages.size();
    if (!rec.stages.empty()) {
      t["connected"] = rec.stages.back().connected;
      t["betti1"] = rec.stages.back().betti1;
      t["certificate"] = to_string(rec.stages.back().certificate);
    }
    trials.push_back(t);
    if (rec.truncated) ++truncated;
    if (!rec.stages.empty() && rec.stages.back().k == c.kmax) {
      ++complete;
      if (rec.stages.back().connected) ++connected;
    }
  }
  j["trials"] = trials;
  j["connected_at_kmax"] = connected;
  j["complete"] = complete;
  j["truncated"] = truncated;
  const GrowthFit fit = growth_rate_fit(records, 2, c.kmax);
  if (fit.defined) {
    j["growth"] = {{"slope", fit.slope}, {"stderr", fit.stderr_}, {"points", fit.points},
                   {"zero_stages", fit.zero_stages}};
  }
  return j.dump(2) + "\n";
}

void emit(const TrialConfig& c, const std::vector<TrialRecord>& records, const std::string& stem) {
  std::ofstream csv(stem + ".csv", std::ios::binary);
  std::ofstream js(stem + ".json", std::ios::binary);
  if (!csv || !js) throw std::runtime_error("cannot write " + stem + ".{csv,json}");
  csv << to_csv(records, c.d());
  js << summary_json(c, records);
}

}  // namespace nervekit
