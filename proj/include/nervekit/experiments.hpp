#pragma once

#include "nervekit/homology.hpp"
#include "nervekit/nerve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nervekit {

// Random systems: levels 1..kmax-1 drawn uniformly from P_r(I), followed by a
// random block of `tail_block` levels repeated forever.
struct TrialConfig {
  std::vector<int> n{2, 2};
  int r = 1;
  int kmax = 6;
  int trials = 10;
  std::uint64_t seed = 1;
  int tail_block = 32;
  bool require_no_corner = false;  // redraw until no J_j holds a corner
  int max_redraws = 1000;
  bool homology = true;
  VerdictMode mode = VerdictMode::Exact;
  std::size_t cell_budget = default_cell_budget();
  unsigned threads = 1;

  int d() const { return static_cast<int>(n.size()); }
};

// Throws std::invalid_argument on an inconsistent config.
void validate(const TrialConfig& config);

struct StageRecord {
  int k = 0;
  bool connected = false;
  std::size_t components = 0;
  long long betti1 = -1;  // -1 when not computed
  std::size_t cross_edges = 0;
  std::vector<int> cuts;  // per axis: levels 1..k-1 with a cut
  Rational certificate;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int redraws = 0;
  bool no_corner = false;
  bool truncated = false;  // stopped at the cell budget
  std::vector<LevelSet> levels;
  std::vector<StageRecord> stages;
};

GridIfs sample_system(const TrialConfig& config, int trial, std::uint64_t* used_seed = nullptr,
                      int* redraws = nullptr);

TrialRecord run_trial(const TrialConfig& config, int trial);
// Trials spread over config.threads workers; output order is by trial.
std::vector<TrialRecord> run_trials(const TrialConfig& config);

struct GrowthFit {
  bool defined = false;
  double slope = 0;
  double stderr_ = 0;
  std::size_t points = 0;
  std::size_t zero_stages = 0;  // excluded log(0)
};

// Pooled least squares of log y against k over k_lo..k_hi, with
// y = rank H_1 or, with `difference`, rank H_1 - rank H_0 + 1.
GrowthFit growth_rate_fit(const std::vector<TrialRecord>& records, int k_lo, int k_hi,
                          bool difference = false);

// rank H_1(N_{1,k+1}) >= (#I - r)^{k-2} whenever rank H_1 - rank H_0 of
// N_{k-1,k+1} is positive.
struct GrowthBoundCheck {
  std::size_t triggered = 0;
  std::size_t violations = 0;
};
GrowthBoundCheck growth_lower_bound(const NerveEngine& engine, int kmax, const NerveOptions& opts = {});

struct PhaseRow {
  int r = 0;
  int trials = 0;
  double connected = 0;       // fraction connected at kmax
  double all_axis_cuts = 0;   // fraction with cuts on every axis by kmax-1
  double certificate = 0;     // mean certificate at kmax
  double core_line = 0;       // fraction with a full core line along axis 0
};

std::vector<PhaseRow> connectivity_phase_table(const std::vector<int>& n, int r_lo, int r_hi, int trials,
                                               int kmax, std::uint64_t seed, unsigned threads = 1);

std::string csv_header(int d);
std::string to_csv(const std::vector<TrialRecord>& records, int d);
std::string summary_json(const TrialConfig& config, const std::vector<TrialRecord>& records);

// Writes <stem>.csv and <stem>.json.
void emit(const TrialConfig& config, const std::vector<TrialRecord>& records, const std::string& stem);

}  // namespace nervekit
