#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multigiant/branching.hpp"
#include "multigiant/configuration.hpp"
#include "multigiant/degree_model.hpp"
#include "multigiant/errors.hpp"
#include "multigiant/experiments.hpp"
#include "multigiant/mean_matrix.hpp"
#include "multigiant/spec_io.hpp"

namespace mg = multigiant;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mg::Error("cannot open " + path + " for writing");
  out << text;
}

ordered_json matrix_json(const mg::Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json pairs_json(const std::vector<mg::PartPair>& pairs) {
  ordered_json out = ordered_json::array();
  for (const auto& p : pairs) out.push_back(p.to_string());
  return out;
}

std::vector<mg::Mass> parse_grid(const std::string& text) {
  std::vector<mg::Mass> grid;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const auto comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    grid.push_back(mg::Mass::parse_rational(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

int cmd_validate(const std::string& spec_path, const std::string& seq_path, const std::string& out) {
  ordered_json j;
  bool ok = true;
  if (!spec_path.empty()) {
    const auto report = mg::validate_spec(mg::load_spec(spec_path));
    ok = report.valid();
    j["valid"] = ok;
    j["errors"] = report.errors;
    j["lints"] = report.lints;
    j["pairs"] = pairs_json(report.pairs);
    j["N"] = report.pairs.size();
    j["lambda"] = matrix_json(report.lambda);
    j["first_moment"] = report.first_moment;
    j["second_moment"] = report.second_moment;
  } else {
    const auto seq = mg::load_sequence(seq_path);
    const auto stats = mg::sequence_stats(seq);
    const auto defects = seq.matching_defects();
    ok = defects.empty();
    j["valid"] = ok;
    j["errors"] = defects;
    j["lints"] = stats.lints;
    j["n"] = stats.n;
    j["omega"] = stats.omega;
    j["pairs"] = pairs_json(seq.pairs());
    j["lambda"] = matrix_json(stats.lambda);
    j["first_moment"] = stats.first_moment;
    j["second_moment"] = stats.second_moment;
  }
  emit(j.dump(2) + "\n", out);
  return ok ? kOk : kFail;
}

int cmd_analyze(const std::string& spec_path, double tol, const std::string& out) {
  const auto spec = mg::load_spec(spec_path);
  const auto validation = mg::validate_spec(spec);
  if (!validation.valid()) {
    for (const auto& e : validation.errors) std::cerr << "error: " << e << "\n";
    return kFail;
  }
  const auto m = mg::build_mean_matrix(spec);
  const auto irr = mg::check_irreducible(m);
  ordered_json j;
  j["gamma"] = nullptr;
  j["regime"] = nullptr;
  j["irreducible"] = irr.irreducible;
  j["left_vector"] = nullptr;
  if (irr.irreducible) {
    mg::SpectralOptions options;
    options.tol = tol;
    const auto sr = mg::perron_eigenpair(m, options);
    j["gamma"] = sr.gamma;
    j["regime"] = std::string(mg::to_string(sr.regime));
    j["left_vector"] = sr.left_vector;
    j["residual"] = sr.residual;
  }
  j["matrix"] = matrix_json(m.entries);
  j["index"] = pairs_json(m.index);
  ordered_json sccs = ordered_json::array();
  for (const auto& comp : irr.components) {
    ordered_json c = ordered_json::array();
    for (auto k : comp) c.push_back(m.index[k].to_string());
    sccs.push_back(std::move(c));
  }
  j["sccs"] = std::move(sccs);
  try {
    j["newman_sum"] = mg::bipartite_criterion(spec);
  } catch (const mg::NotBipartite&) {
  }
  emit(j.dump(2) + "\n", out);
  return kOk;
}

int cmd_bp(const std::string& spec_path, double tol, std::int64_t cap, std::int64_t trials, std::uint64_t seed,
           unsigned threads, const std::string& out) {
  const auto spec = mg::load_spec(spec_path);
  const auto law = mg::build_offspring_law(spec);
  mg::FixedPointOptions options;
  options.tol = tol;
  const auto fp = mg::extinction_fixed_point(law, options);
  ordered_json j;
  j["types"] = pairs_json(law.types);
  j["q"] = fp.q;
  j["eta"] = fp.eta;
  j["iterations"] = fp.iterations;
  if (trials > 0) {
    const auto est = mg::estimate_survival(law, cap, trials, seed, threads);
    j["mc_survival"] = est.frequency;
    j["stderr"] = est.standard_error;
    j["trials"] = est.trials;
    j["cap"] = cap;
  }
  emit(j.dump(2) + "\n", out);
  return kOk;
}

int cmd_sample(const std::string& spec_path, const std::string& seq_path, std::int64_t n, std::uint64_t seed,
               bool simple, int max_attempts, const std::string& out) {
  const auto seq = seq_path.empty() ? mg::realize_sequence(mg::load_spec(spec_path), n) : mg::load_sequence(seq_path);
  auto rng = mg::trial_stream(seed, seq.n(), 0, "graph");
  mg::CloneGraph g;
  int attempts = 1;
  if (simple) {
    auto sample = mg::sample_simple(seq, rng, max_attempts);
    g = std::move(sample.graph);
    attempts = sample.attempts;
  } else {
    g = mg::sample_configuration(seq, rng);
  }
  ordered_json header{{"n", seq.n()}, {"seed", seed}, {"attempts", attempts}, {"edges", g.num_clones() / 2}};
  std::string text = header.dump() + "\n";
  for (const auto& e : g.edges()) text += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  emit(text, out);
  return kOk;
}

int cmd_simulate(const std::string& spec_path, std::int64_t n, std::uint64_t seed, int trials, bool simple,
                 int max_attempts, unsigned threads, const std::string& out) {
  const auto spec = mg::load_spec(spec_path);
  const auto rows = mg::run_trials(spec, n, trials, seed, simple, max_attempts, threads);
  emit(mg::trials_csv_header(spec.parts()) + mg::trials_csv_rows(rows, seed), out);
  return kOk;
}

int cmd_verdict(mg::ExperimentPlan plan, const std::string& out, const std::string& json_out) {
  const auto report = mg::run_verdict(plan);
  emit(mg::verdict_csv(report), out);
  if (!json_out.empty()) emit(mg::verdict_json(report), json_out);
  for (const auto& e : report.validation.errors) std::cerr << "error: " << e << "\n";
  for (const auto& c : report.checks) std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
  for (const auto& note : report.notes) std::cerr << "note: " << note << "\n";
  std::cerr << "verdict: " << mg::to_string(report.verdict) << "\n";
  switch (report.verdict) {
    case mg::Verdict::pass:
    case mg::Verdict::analytic_only:
    case mg::Verdict::not_irreducible: return kOk;
    case mg::Verdict::fail:
    case mg::Verdict::invalid: return kFail;
  }
  return kError;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant components of random multipartite graphs"};
  app.require_subcommand(1);

  std::string spec_path, seq_path, out, json_out, from_path, to_path, grid_text;
  std::int64_t n = 0;
  std::vector<std::int64_t> n_grid;
  std::uint64_t seed = 1;
  int trials = 20;
  std::int64_t bp_trials = 100000;
  std::int64_t cap = 10000;
  bool simple = false;
  int max_attempts = 1000;
  double tol = 1e-12;
  unsigned threads = 0;
  int points = 0;

  auto* validate = app.add_subcommand("validate", "Check a spec or sequence file");
  auto* v_src = validate->add_option_group("source");
  v_src->add_option("--spec", spec_path, "Degree spec JSON")->check(CLI::ExistingFile);
  v_src->add_option("--seq", seq_path, "Degree sequence JSON")->check(CLI::ExistingFile);
  v_src->require_option(1);
  validate->add_option("--out", out, "Output path (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Mean matrix, Perron-Frobenius eigenpair and regime");
  analyze->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  analyze->add_option("--tol", tol, "Power-iteration tolerance");
  analyze->add_option("--out", out);

  auto* bp = app.add_subcommand("bp", "Branching-process extinction and survival");
  bp->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  bp->add_option("--tol", tol, "Fixed-point tolerance");
  bp->add_option("--cap", cap, "Monte Carlo survival cap")->check(CLI::PositiveNumber);
  bp->add_option("--trials", bp_trials, "Monte Carlo trials (0 disables)")->check(CLI::NonNegativeNumber);
  bp->add_option("--seed", seed);
  bp->add_option("--threads", threads);
  bp->add_option("--out", out);

  auto* sample = app.add_subcommand("sample", "Sample one configuration-model graph");
  auto* s_src = sample->add_option_group("source");
  s_src->add_option("--spec", spec_path)->check(CLI::ExistingFile);
  s_src->add_option("--seq", seq_path)->check(CLI::ExistingFile);
  s_src->require_option(1);
  sample->add_option("--n", n)->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed);
  sample->add_flag("--simple", simple, "Reject until simple");
  sample->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);
  sample->add_option("--out", out);

  auto* simulate = app.add_subcommand("simulate", "Per-trial component sizes as CSV");
  simulate->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  simulate->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed);
  simulate->add_option("--trials", trials)->check(CLI::PositiveNumber);
  simulate->add_flag("--simple", simple);
  simulate->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);
  simulate->add_option("--threads", threads);
  simulate->add_option("--out", out);

  auto* verdict = app.add_subcommand("verdict", "Analytic prediction checked against simulation");
  verdict->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  verdict->add_option("--n", n_grid, "Graph sizes, strictly increasing")->required();
  verdict->add_option("--trials", trials)->check(CLI::PositiveNumber);
  verdict->add_option("--seed", seed);
  verdict->add_flag("--simple", simple);
  verdict->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);
  verdict->add_option("--tol", tol, "Spectral and fixed-point tolerance");
  verdict->add_option("--threads", threads);
  verdict->add_option("--out", out, "Verdict CSV (default stdout)");
  verdict->add_option("--json", json_out, "Full report as JSON");

  auto* sweep = app.add_subcommand("sweep", "Evaluate the mixture (1-t) from + t to over a grid");
  sweep->add_option("--from", from_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--to", to_path)->required()->check(CLI::ExistingFile);
  auto* grid_group = sweep->add_option_group("grid");
  grid_group->add_option("--grid", grid_text, "Comma-separated weights, e.g. 0,1/4,1/2");
  grid_group->add_option("--points", points, "Uniform grid k/(K-1), k = 0..K-1")->check(CLI::NonNegativeNumber);
  grid_group->require_option(1);
  sweep->add_option("--n", n_grid)->required();
  sweep->add_option("--trials", trials)->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed);
  sweep->add_flag("--simple", simple);
  sweep->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);
  sweep->add_option("--threads", threads);
  sweep->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*validate) return cmd_validate(spec_path, seq_path, out);
    if (*analyze) return cmd_analyze(spec_path, tol, out);
    if (*bp) return cmd_bp(spec_path, tol, cap, bp_trials, seed, threads, out);
    if (*sample) {
      if (!spec_path.empty() && n <= 0) throw mg::Error("sample --spec requires --n");
      return cmd_sample(spec_path, seq_path, n, seed, simple, max_attempts, out);
    }
    if (*simulate) return cmd_simulate(spec_path, n, seed, trials, simple, max_attempts, threads, out);
    if (*verdict) {
      mg::ExperimentPlan plan;
      plan.spec = mg::load_spec(spec_path);
      plan.spec_label = spec_path;
      plan.n_grid = n_grid;
      plan.trials = trials;
      plan.seed = seed;
      plan.simple = simple;
      plan.max_attempts = max_attempts;
      plan.tolerances.spectral_tol = tol;
      plan.tolerances.fixed_point_tol = tol;
      plan.threads = threads;
      return cmd_verdict(std::move(plan), out, json_out);
    }
    if (*sweep) {
      mg::SweepPlan plan;
      plan.from = mg::load_spec(from_path);
      plan.to = mg::load_spec(to_path);
      if (!grid_text.empty()) {
        plan.grid = parse_grid(grid_text);
      } else {
        for (int k = 0; k < points; ++k) {
          plan.grid.push_back(points == 1 ? mg::Mass::exact(0) : mg::Mass::exact(mg::Rational(k, points - 1)));
        }
      }
      plan.n_grid = n_grid;
      plan.trials = trials;
      plan.seed = seed;
      plan.simple = simple;
      plan.max_attempts = max_attempts;
      plan.threads = threads;
      emit(mg::run_sweep(plan), out);
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
