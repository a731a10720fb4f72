#include "multigiant/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "multigiant/configuration.hpp"
#include "multigiant/errors.hpp"
#include "multigiant/exploration.hpp"
#include "multigiant/parallel.hpp"

namespace multigiant {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

void ExperimentPlan::validate() const {
  if (n_grid.empty()) throw Error("experiment plan: empty n grid");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1) throw Error("experiment plan: n must be >= 1");
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw Error("experiment plan: n grid must be strictly increasing");
  }
  if (trials < 1) throw Error("experiment plan: trials must be >= 1");
  if (max_attempts < 1) throw Error("experiment plan: max_attempts must be >= 1");
}

Rng trial_stream(std::uint64_t seed, std::int64_t n, int trial, std::string_view stream) {
  const auto per_n = derive_seed(seed, "n/" + std::to_string(n));
  return child_stream(per_n, std::string(stream) + "/" + std::to_string(trial));
}

std::vector<TrialResult> run_trials(const DegreeSpec& spec, std::int64_t n, int trials, std::uint64_t seed,
                                    bool simple, int max_attempts, unsigned threads) {
  const DegreeSequence seq = realize_sequence(spec, n);
  std::vector<TrialResult> rows(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(rows.size(), threads, [&](std::size_t t) {
    const int trial = static_cast<int>(t);
    Rng graph_rng = trial_stream(seed, n, trial, "graph");
    TrialResult r;
    r.n = n;
    r.trial = trial;
    CloneGraph g;
    if (simple) {
      auto sample = sample_simple(seq, graph_rng, max_attempts);
      g = std::move(sample.graph);
      r.attempts = sample.attempts;
    } else {
      g = sample_configuration(seq, graph_rng);
    }
    Rng explore_rng = trial_stream(seed, n, trial, "explore");
    const auto census = explore_components(g, explore_rng).census;
    r.largest = census.largest_size();
    r.second = census.second_size();
    r.components = census.num_components();
    r.largest_fraction = census.largest_fraction();
    r.largest_per_part = census.largest_per_part;
    rows[t] = std::move(r);
  });
  return rows;
}

std::string trials_csv_header(int parts) {
  std::string h = "n,seed,trial,largest_size,largest_fraction,second_size";
  for (int i = 1; i <= parts; ++i) h += ",part" + std::to_string(i);
  return h + ",num_components\n";
}

std::string trials_csv_rows(const std::vector<TrialResult>& rows, std::uint64_t seed) {
  std::string out;
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(seed) + "," + std::to_string(r.trial) + "," +
           std::to_string(r.largest) + "," + format_double(r.largest_fraction) + "," + std::to_string(r.second);
    for (auto c : r.largest_per_part) out += "," + std::to_string(c);
    out += "," + std::to_string(r.components) + "\n";
  }
  return out;
}

SizeSummary summarize(const std::vector<TrialResult>& rows, const DegreeSequence& seq, double min_band) {
  SizeSummary s;
  if (rows.empty()) return s;
  s.n = rows.front().n;
  s.trials = static_cast<int>(rows.size());
  s.omega = seq.omega();
  const double count = static_cast<double>(rows.size());
  const double log_n = std::log(static_cast<double>(std::max<std::int64_t>(s.n, 2)));

  std::vector<std::int64_t> part_size(static_cast<std::size_t>(seq.parts()), 0);
  for (const auto& e : seq.entries()) part_size[static_cast<std::size_t>(e.part)] += e.count;

  double sum = 0.0, sum_second = 0.0, sum_largest = 0.0, sum_attempts = 0.0;
  s.min_part_share = 1.0;
  for (const auto& r : rows) {
    sum += r.largest_fraction;
    sum_second += static_cast<double>(r.second);
    sum_largest += static_cast<double>(r.largest);
    sum_attempts += r.attempts;
    s.max_second = std::max(s.max_second, r.second);
    for (std::size_t i = 0; i < part_size.size(); ++i) {
      if (part_size[i] == 0) continue;
      s.min_part_share = std::min(s.min_part_share, static_cast<double>(r.largest_per_part[i]) /
                                                        static_cast<double>(part_size[i]));
    }
  }
  s.mean_fraction = sum / count;
  double ss = 0.0;
  for (const auto& r : rows) ss += (r.largest_fraction - s.mean_fraction) * (r.largest_fraction - s.mean_fraction);
  s.sd_fraction = rows.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  s.band = std::max(min_band, 3.0 * s.sd_fraction / std::sqrt(count));
  s.mean_second = sum_second / count;
  s.second_log_ratio = static_cast<double>(s.max_second) / log_n;
  const double omega_sq = std::max(1.0, static_cast<double>(s.omega) * s.omega);
  s.largest_scaled = (sum_largest / count) / (omega_sq * log_n);
  s.mean_attempts = sum_attempts / count;
  return s;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::analytic_only: return "ANALYTIC_ONLY";
    case Verdict::not_irreducible: return "NOT_IRREDUCIBLE";
    case Verdict::invalid: return "INVALID";
  }
  return "UNKNOWN";
}

namespace {

std::string n_label(std::int64_t n) { return "n=" + std::to_string(n); }

void supercritical_checks(VerdictReport& report, const Tolerances& tol) {
  const double eta = report.survival->eta;
  const auto& sizes = report.sizes;
  const double fitted = sizes.front().second_log_ratio;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const auto& s = sizes[k];
    const double log_n = std::log(static_cast<double>(s.n));
    report.checks.push_back({"size-law " + n_label(s.n), std::abs(s.mean_fraction - eta) <= s.band,
                             "|" + format_double(s.mean_fraction) + " - " + format_double(eta) + "| <= " +
                                 format_double(s.band)});
    report.checks.push_back({"giant-in-every-part " + n_label(s.n), s.min_part_share >= tol.part_share,
                             "min part share " + format_double(s.min_part_share) + " >= " +
                                 format_double(tol.part_share)});
    report.checks.push_back({"second-log-cap " + n_label(s.n),
                             static_cast<double>(s.max_second) <= tol.second_log_cap * log_n,
                             std::to_string(s.max_second) + " <= " + format_double(tol.second_log_cap) + " log n = " +
                                 format_double(tol.second_log_cap * log_n)});
    if (k > 0) {
      report.checks.push_back({"second-log-ratio " + n_label(s.n), s.second_log_ratio <= fitted,
                               format_double(s.second_log_ratio) + " <= fitted " + format_double(fitted) + " at " +
                                   n_label(sizes.front().n)});
    }
  }
  const auto& last = sizes.back();
  const double second_frac = static_cast<double>(last.max_second) / static_cast<double>(last.n);
  report.checks.push_back({"second-fraction " + n_label(last.n), second_frac <= tol.second_fraction,
                           format_double(second_frac) + " <= " + format_double(tol.second_fraction)});
}

void subcritical_checks(VerdictReport& report, const Tolerances& tol) {
  const auto& sizes = report.sizes;
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    report.checks.push_back({"largest-decreasing " + n_label(sizes[k - 1].n) + "->" + std::to_string(sizes[k].n),
                             sizes[k].mean_fraction < sizes[k - 1].mean_fraction,
                             format_double(sizes[k].mean_fraction) + " < " + format_double(sizes[k - 1].mean_fraction)});
  }
  const auto& last = sizes.back();
  report.checks.push_back({"largest-small " + n_label(last.n), last.mean_fraction < tol.subcritical_max_fraction,
                           format_double(last.mean_fraction) + " < " + format_double(tol.subcritical_max_fraction)});
  for (const auto& s : sizes) {
    report.notes.push_back(n_label(s.n) + ": mean largest / (omega^2 log n) = " + format_double(s.largest_scaled) +
                           " (bounded-ratio proxy; no theorem constant)");
  }
}

} // namespace

VerdictReport run_verdict(const ExperimentPlan& plan) {
  plan.validate();
  VerdictReport report;
  report.spec_label = plan.spec_label;
  report.seed = plan.seed;
  report.simple = plan.simple;
  report.validation = validate_spec(plan.spec);
  if (!report.validation.valid()) {
    report.verdict = Verdict::invalid;
    return report;
  }

  report.matrix = build_mean_matrix(plan.spec);
  report.irreducibility = check_irreducible(report.matrix);
  if (!report.irreducibility.irreducible) {
    for (const auto& comp : report.irreducibility.components) {
      std::string line = "strongly connected component {";
      for (std::size_t k = 0; k < comp.size(); ++k) {
        if (k) line += ",";
        line += report.matrix.index[comp[k]].to_string();
      }
      report.notes.push_back(line + "}");
    }
    report.verdict = Verdict::not_irreducible;
    return report;
  }

  SpectralOptions spectral_options;
  spectral_options.tol = plan.tolerances.spectral_tol;
  report.spectral = perron_eigenpair(report.matrix, spectral_options);
  FixedPointOptions fp;
  fp.tol = plan.tolerances.fixed_point_tol;
  report.survival = extinction_fixed_point(build_offspring_law(plan.spec), fp);
  try {
    report.newman_sum = bipartite_criterion(plan.spec);
  } catch (const NotBipartite&) {
  }

  if (report.spectral->regime == Regime::critical) {
    report.notes.push_back("gamma within the critical band; no size prediction is made");
    report.verdict = Verdict::analytic_only;
    return report;
  }

  for (auto n : plan.n_grid) {
    const DegreeSequence seq = realize_sequence(plan.spec, n);
    const auto rows = run_trials(plan.spec, n, plan.trials, plan.seed, plan.simple, plan.max_attempts, plan.threads);
    report.sizes.push_back(summarize(rows, seq, plan.tolerances.min_band));
  }

  if (report.spectral->regime == Regime::supercritical) {
    supercritical_checks(report, plan.tolerances);
  } else {
    subcritical_checks(report, plan.tolerances);
  }
  const bool all = std::all_of(report.checks.begin(), report.checks.end(), [](const Check& c) { return c.pass; });
  report.verdict = all ? Verdict::pass : Verdict::fail;
  return report;
}

std::string verdict_csv(const VerdictReport& report) {
  std::string out =
      "n,trials,omega,gamma,eta,mean_fraction,sd_fraction,band,mean_second,max_second,second_log_ratio,"
      "min_part_share,largest_scaled,mean_attempts\n";
  const std::string gamma = report.spectral ? format_double(report.spectral->gamma) : "";
  const std::string eta = report.survival ? format_double(report.survival->eta) : "";
  for (const auto& s : report.sizes) {
    out += std::to_string(s.n) + "," + std::to_string(s.trials) + "," + std::to_string(s.omega) + "," + gamma + "," +
           eta + "," + format_double(s.mean_fraction) + "," + format_double(s.sd_fraction) + "," +
           format_double(s.band) + "," + format_double(s.mean_second) + "," + std::to_string(s.max_second) + "," +
           format_double(s.second_log_ratio) + "," + format_double(s.min_part_share) + "," +
           format_double(s.largest_scaled) + "," + format_double(s.mean_attempts) + "\n";
  }
  return out;
}

std::string run_sweep(const SweepPlan& plan) {
  if (!plan.grid.empty()) {
    ExperimentPlan check;
    check.n_grid = plan.n_grid;
    check.trials = plan.trials;
    check.max_attempts = plan.max_attempts;
    check.validate();
  }
  std::string out = "param,gamma,eta,regime";
  for (auto n : plan.n_grid) out += ",mean_fraction_n" + std::to_string(n);
  out += "\n";

  for (const auto& t : plan.grid) {
    std::string row = t.to_string();
    const DegreeSpec spec = mix_specs(plan.from, plan.to, t);
    const auto validation = validate_spec(spec);
    if (!validation.valid()) {
      row += ",,,invalid";
      for (std::size_t k = 0; k < plan.n_grid.size(); ++k) row += ",";
      out += row + "\n";
      continue;
    }
    const auto mean = build_mean_matrix(spec);
    const auto eta = extinction_fixed_point(build_offspring_law(spec)).eta;
    if (check_irreducible(mean).irreducible) {
      const auto sr = perron_eigenpair(mean);
      row += "," + format_double(sr.gamma) + "," + format_double(eta) + "," + std::string(to_string(sr.regime));
    } else {
      row += ",," + format_double(eta) + ",reducible";
    }
    for (auto n : plan.n_grid) {
      const auto rows = run_trials(spec, n, plan.trials, plan.seed, plan.simple, plan.max_attempts, plan.threads);
      double sum = 0.0;
      for (const auto& r : rows) sum += r.largest_fraction;
      row += "," + format_double(sum / static_cast<double>(rows.size()));
    }
    out += row + "\n";
  }
  return out;
}

} // namespace multigiant
