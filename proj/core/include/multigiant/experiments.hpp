#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "multigiant/branching.hpp"
#include "multigiant/degree_model.hpp"
#include "multigiant/mean_matrix.hpp"
#include "multigiant/random.hpp"

namespace multigiant {

struct Tolerances {
  /// Supercritical: |mean largest fraction - eta| <= max(min_band, 3 sd / sqrt(trials)).
  double min_band = 0.02;
  /// Supercritical: the largest component holds at least this share of every part.
  double part_share = 0.01;
  /// Supercritical: second-largest component <= second_log_cap * log n.
  double second_log_cap = 30.0;
  /// Supercritical: second-largest / n at the largest n stays below this.
  double second_fraction = 0.01;
  /// Subcritical: mean largest fraction at the largest n stays below this.
  double subcritical_max_fraction = 0.01;
  double fixed_point_tol = 1e-12;
  double spectral_tol = 1e-12;
};

struct ExperimentPlan {
  DegreeSpec spec;
  /// Shown in reports (typically the spec path).
  std::string spec_label;
  /// Strictly increasing.
  std::vector<std::int64_t> n_grid;
  int trials = 20;
  std::uint64_t seed = 1;
  bool simple = false;
  int max_attempts = 1000;
  Tolerances tolerances;
  /// 0 = hardware concurrency. Output does not depend on it.
  unsigned threads = 0;

  /// Throws Error on an empty or non-increasing grid or trials < 1.
  void validate() const;
};

/// Stream for one trial: child(child(seed, "n/<n>"), "<stream>/<trial>").
/// `stream` is "graph" for sampling and "explore" for the exploration.
Rng trial_stream(std::uint64_t seed, std::int64_t n, int trial, std::string_view stream);

struct TrialResult {
  std::int64_t n = 0;
  int trial = 0;
  std::size_t largest = 0;
  std::size_t second = 0;
  std::size_t components = 0;
  double largest_fraction = 0.0;
  std::vector<std::int64_t> largest_per_part;
  /// Sampling attempts used (1 unless simple graphs were requested).
  int attempts = 1;
};

/// Sample `trials` graphs from realize_sequence(spec, n) and explore each.
std::vector<TrialResult> run_trials(const DegreeSpec& spec, std::int64_t n, int trials, std::uint64_t seed,
                                    bool simple, int max_attempts, unsigned threads);

/// Per-trial CSV: n,seed,trial,largest_size,largest_fraction,second_size,
/// part1..partP (largest-component vertices per part),num_components.
std::string trials_csv_header(int parts);
std::string trials_csv_rows(const std::vector<TrialResult>& rows, std::uint64_t seed);

struct SizeSummary {
  std::int64_t n = 0;
  int trials = 0;
  int omega = 0;
  double mean_fraction = 0.0;
  double sd_fraction = 0.0;
  double band = 0.0;
  double mean_second = 0.0;
  std::size_t max_second = 0;
  /// max second-largest / log n
  double second_log_ratio = 0.0;
  /// min over trials and parts of (largest-component vertices in part i) / (part i size)
  double min_part_share = 0.0;
  /// mean largest / (omega^2 log n); a bounded-ratio proxy, not a theorem constant
  double largest_scaled = 0.0;
  double mean_attempts = 0.0;
};

SizeSummary summarize(const std::vector<TrialResult>& rows, const DegreeSequence& seq, double min_band);

enum class Verdict { pass, fail, analytic_only, not_irreducible, invalid };

std::string_view to_string(Verdict v);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerdictReport {
  std::string spec_label;
  std::uint64_t seed = 0;
  bool simple = false;
  ValidationReport validation;
  MeanMatrix matrix;
  Irreducibility irreducibility;
  std::optional<SpectralResult> spectral;
  std::optional<SurvivalSolution> survival;
  std::optional<double> newman_sum;
  std::vector<SizeSummary> sizes;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::invalid;
};

/// Analytic prediction plus, for sub/supercritical specs, simulation
/// checked against it. Invalid or reducible specs get a degenerate verdict
/// with diagnostics and no simulation.
VerdictReport run_verdict(const ExperimentPlan& plan);

/// One row per n. Byte-identical for identical plans.
std::string verdict_csv(const VerdictReport& report);
std::string verdict_json(const VerdictReport& report);

struct SweepPlan {
  DegreeSpec from;
  DegreeSpec to;
  /// Mixing weights t: spec(t) = (1 - t) from + t to.
  std::vector<Mass> grid;
  std::vector<std::int64_t> n_grid;
  int trials = 10;
  std::uint64_t seed = 1;
  bool simple = false;
  int max_attempts = 1000;
  unsigned threads = 0;
};

/// CSV: param,gamma,eta,regime, then mean_fraction_n<N> per n. Header only
/// for an empty grid.
std::string run_sweep(const SweepPlan& plan);

/// Shortest round-trip decimal for CSV/JSON output.
std::string format_double(double x);

} // namespace multigiant
