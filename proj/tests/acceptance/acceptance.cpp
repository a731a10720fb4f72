// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "multigiant/branching.hpp"
#include "multigiant/configuration.hpp"
#include "multigiant/experiments.hpp"
#include "multigiant/exploration.hpp"
#include "multigiant/mean_matrix.hpp"
#include "oracles.hpp"

using namespace multigiant;

namespace {

constexpr std::uint64_t kSeed = 1;
const double kEta = 23.0 / 27.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

// Degree preservation is checked on every graph this suite draws.
std::int64_t g_graphs_checked = 0;
bool g_degrees_ok = true;

void note_graph(const CloneGraph& g) {
  ++g_graphs_checked;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.realized_degree(v) != g.degree_of(v)) g_degrees_ok = false;
  }
}

ExperimentPlan plan_for(const DegreeSpec& spec, const std::string& label, unsigned threads = 0) {
  ExperimentPlan plan;
  plan.spec = spec;
  plan.spec_label = label;
  plan.n_grid = {10'000, 100'000};
  plan.trials = 20;
  plan.seed = kSeed;
  plan.threads = threads;
  return plan;
}

const Check* find_check(const VerdictReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const VerdictReport& supercritical_report() {
  static const VerdictReport report = run_verdict(plan_for(fixtures::bipartite(), "bipartite"));
  return report;
}

Outcome criterion1() {
  Outcome o;
  const auto& r = supercritical_report();
  o.require(r.survival && std::abs(r.survival->eta - kEta) <= 1e-9, "analytic eta = 23/27");
  const auto& big = r.sizes.back();
  o.require(big.n == 100'000 && big.trials == 20, "n = 1e5 with 20 trials");
  o.require(std::abs(big.mean_fraction - kEta) <= 0.02, "|mean - eta| <= 0.02");
  o.detail << "eta=" << r.survival->eta << " mean largest fraction at n=1e5: " << big.mean_fraction
           << " (sd " << big.sd_fraction << ")";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto spec = fixtures::bipartite();
  const auto m = build_mean_matrix(spec);
  const auto sr = perron_eigenpair(m);
  // 2x2 off-diagonal matrix: gamma = sqrt(mu_1221 mu_2112), entries from the definition.
  const double analytic = std::sqrt(static_cast<double>(oracle::mean_entry(spec, 0, 1, 0) *
                                                        oracle::mean_entry(spec, 1, 0, 1)));
  o.require(std::abs(analytic - std::sqrt(1.5)) <= 1e-15, "analytic value is sqrt(1.5)");
  o.require(std::abs(sr.gamma - analytic) <= 1e-8, "|gamma - sqrt(1.5)| <= 1e-8");
  double residual = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.size(); ++r) s += sr.left_vector[r] * m(r, c);
    residual = std::max(residual, std::abs(s - sr.gamma * sr.left_vector[c]));
  }
  o.require(residual <= 1e-10, "residual <= 1e-10");
  bool positive = true;
  for (double z : sr.left_vector) positive &= z > 0.0;
  o.require(positive, "left eigenvector strictly positive");
  o.detail << "gamma=" << sr.gamma << " |gamma-sqrt(1.5)|=" << std::abs(sr.gamma - analytic)
           << " residual=" << residual << " z=(" << sr.left_vector[0] << "," << sr.left_vector[1] << ")";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto r = run_verdict(plan_for(fixtures::subcritical(), "subcritical"));
  o.require(r.spectral && std::abs(r.spectral->gamma - std::sqrt(0.6)) <= 1e-8, "gamma = sqrt(0.6)");
  o.require(r.sizes.size() == 2, "two sizes simulated");
  const double small = r.sizes[0].mean_fraction;
  const double large = r.sizes[1].mean_fraction;
  o.require(large < 0.01, "fraction < 0.01 at n = 1e5");
  o.require(large < small, "fraction decreases from 1e4 to 1e5");
  o.detail << "gamma=" << r.spectral->gamma << " mean largest fraction 1e4: " << small << ", 1e5: " << large;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto& r = supercritical_report();
  for (const auto& s : r.sizes) {
    const double cap = 30.0 * std::log(static_cast<double>(s.n));
    o.require(static_cast<double>(s.max_second) <= cap, "second-largest <= 30 log n at n=" + std::to_string(s.n));
    o.detail << "n=" << s.n << ": max second " << s.max_second << " (30 log n = " << cap << "); ";
  }
  const auto* ratio = find_check(r, "second-log-ratio n=100000");
  o.require(ratio && ratio->pass, "ratio at 1e5 <= constant fitted at 1e4");
  if (ratio) o.detail << ratio->detail << "; ";

  // The fitted-ratio rule compares two maxima over 20 trials; report how
  // often it holds across seeds so a single seed is not over-read.
  int holds = 0;
  const int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    auto plan = plan_for(fixtures::bipartite(), "bipartite");
    plan.seed = kSeed + static_cast<std::uint64_t>(s);
    const auto other = run_verdict(plan);
    const auto* c = find_check(other, "second-log-ratio n=100000");
    holds += (c && c->pass) ? 1 : 0;
  }
  o.detail << "fitted-ratio rule held for " << holds << "/" << seeds << " further seeds";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<DegreeSpec> specs = {fixtures::bipartite(), fixtures::subcritical(), fixtures::tripartite(),
                                         fixtures::unipartite(), fixtures::disjoint_bipartite()};
  Rng rng(derive_seed(kSeed, "criterion5"));
  std::uniform_int_distribution<std::int64_t> size(1, 50);
  int equal = 0;
  const int graphs = 1000;
  for (int k = 0; k < graphs; ++k) {
    const auto& spec = specs[static_cast<std::size_t>(k) % specs.size()];
    const auto g = sample_configuration(realize_sequence(spec, size(rng)), rng);
    note_graph(g);
    ExplorationOptions opts;
    opts.verify = true;
    if (explore_components(g, rng, opts).census == union_find_components(g)) ++equal;
  }
  o.require(equal == graphs, "every census equal");
  o.detail << equal << "/" << graphs << " graphs with identical partitions";
  return o;
}

struct EventKey {
  EventKind kind;
  std::size_t type;
  std::size_t vertex_class;
  auto operator<=>(const EventKey&) const = default;
};

EventKey key_of(const ExplorationEvent& e) {
  return {e.kind, e.type, e.kind == EventKind::back_edge ? 0 : e.vertex_class};
}

Outcome criterion6() {
  Outcome o;
  Rng rng(derive_seed(kSeed, "criterion6"));
  const auto seq = realize_sequence(fixtures::tripartite(), 40);
  const auto g = sample_configuration(seq, rng);
  note_graph(g);
  ExplorationProcess frozen(g);
  while (frozen.state().step < 8 || frozen.state().total_active() < 3) frozen.step(rng);

  std::map<EventKey, double> law;
  for (const auto& w : transition_distribution(frozen.state())) law[key_of(w.event)] += w.probability;
  const int draws = 100'000;
  std::map<EventKey, int> seen;
  for (int d = 0; d < draws; ++d) {
    auto copy = frozen;
    copy.rematch_living(rng);
    ++seen[key_of(copy.step(rng).event)];
  }
  double worst = 0.0;
  for (const auto& [k, count] : seen) o.require(law.count(k) == 1, "observed event has positive probability");
  for (const auto& [k, p] : law) {
    const double sd = std::sqrt(draws * p * (1 - p));
    const double z = sd > 0 ? std::abs(seen[k] - draws * p) / sd : 0.0;
    worst = std::max(worst, z);
  }
  o.require(worst <= 4.0, "all events within 4 sigma");

  // Fuzzed states: random stopping times of explorations over random specs and sizes.
  double worst_mass = 0.0;
  int states = 0;
  const std::vector<DegreeSpec> specs = {fixtures::bipartite(), fixtures::tripartite(), fixtures::unipartite(),
                                         fixtures::disjoint_bipartite()};
  std::mt19937_64 fuzz(derive_seed(kSeed, "criterion6/fuzz"));
  for (int k = 0; k < 400; ++k) {
    std::mt19937_64 spec_rng(fuzz());
    const auto spec = k % 5 == 4 ? fixtures::random_bipartite(spec_rng) : specs[static_cast<std::size_t>(k) % specs.size()];
    const auto gk = sample_configuration(realize_sequence(spec, 5 + static_cast<std::int64_t>(fuzz() % 200)), rng);
    note_graph(gk);
    ExplorationProcess proc(gk);
    while (!proc.finished()) {
      if (fuzz() % 4 == 0 && proc.state().total_living() > 0) {
        double mass = 0.0;
        for (const auto& w : transition_distribution(proc.state())) mass += w.probability;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        ++states;
      }
      proc.step(rng);
    }
  }
  o.require(worst_mass <= 1e-12, "mass 1 +- 1e-12 on fuzzed states");
  o.detail << law.size() << " events, max |z| = " << worst << " over " << draws << " draws; " << states
           << " fuzzed states, max |mass-1| = " << worst_mass;
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto law = build_offspring_law(fixtures::bipartite());
  const double eta = extinction_fixed_point(law).eta;
  const auto est = estimate_survival(law, 10'000, 100'000, derive_seed(kSeed, "criterion7"));
  o.require(std::abs(est.frequency - eta) <= 3 * est.standard_error, "within 3 standard errors of eta");
  const auto sub = estimate_survival(build_offspring_law(fixtures::subcritical()), 10'000, 100'000,
                                     derive_seed(kSeed, "criterion7/sub"));
  o.require(sub.frequency <= 1e-3, "subcritical frequency <= 1e-3");
  o.detail << "supercritical " << est.frequency << " vs eta " << eta << " (se " << est.standard_error
           << "); subcritical " << sub.frequency;
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(kSeed, "criterion8"));
  int compared = 0, agree = 0, skipped = 0;
  while (compared < 200) {
    const auto spec = fixtures::random_bipartite(rng);
    if (!validate_spec(spec).valid()) {
      o.require(false, "generated spec valid");
      break;
    }
    const auto m = build_mean_matrix(spec);
    if (!check_irreducible(m).irreducible) {
      ++skipped;
      continue;
    }
    const double gamma = perron_eigenpair(m).gamma;
    if (std::abs(gamma - 1.0) <= 1e-6) {
      ++skipped;
      continue;
    }
    const auto sum = bipartite_criterion_exact(spec);
    ++compared;
    if ((sum > 0) == (gamma > 1.0) && sum != 0) ++agree;
  }
  o.require(agree == compared, "100% sign agreement");
  const auto exact = bipartite_criterion_exact(fixtures::bipartite());
  o.require(exact == Rational(1, 2), "sum equals 1/2 exactly");
  o.detail << agree << "/" << compared << " specs agree (" << skipped << " reducible or near-critical skipped); sum = "
           << exact.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  // Two (0,1) vertices against two (1,0) vertices: exactly two matchings.
  const DegreeSequence toy(2, {{0, {0, 1}, 2}, {1, {1, 0}, 2}});
  Rng rng(derive_seed(kSeed, "criterion9"));
  std::map<std::vector<CloneId>, int> counts;
  const int samples = 10'000;
  for (int s = 0; s < samples; ++s) {
    const auto g = sample_configuration(toy, rng);
    note_graph(g);
    ++counts[g.partners()];
  }
  o.require(counts.size() == 2, "two distinct matchings");
  for (const auto& [m, c] : counts) {
    o.require(std::abs(c - 5000) <= 300, "count within 5000 +- 300");
    o.detail << c << " ";
  }
  // Degree preservation on everything drawn by this suite (criteria 5, 6 and 9).
  o.require(g_degrees_ok, "degree preservation on every sample");
  o.detail << "of " << samples << "; degrees preserved on all " << g_graphs_checked << " graphs drawn";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto first = verdict_csv(run_verdict(plan_for(fixtures::bipartite(), "bipartite", 1)));
  const auto second = verdict_csv(run_verdict(plan_for(fixtures::bipartite(), "bipartite", 1)));
  const auto threaded = verdict_csv(run_verdict(plan_for(fixtures::bipartite(), "bipartite", 8)));
  o.require(first == second, "two runs identical");
  o.require(first == threaded, "1 thread vs 8 threads identical");
  auto small = plan_for(fixtures::tripartite(), "tripartite", 1);
  small.n_grid = {1000, 5000};
  const auto a = verdict_csv(run_verdict(small));
  small.threads = 3;
  const auto b = verdict_csv(run_verdict(small));
  o.require(a == b, "tripartite 1 vs 3 threads identical");
  o.detail << first.size() << "-byte CSV identical across runs and thread counts";
  return o;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"supercritical size law", criterion1},
      {"eigenvalue correctness", criterion2},
      {"subcritical smallness", criterion3},
      {"second-component bound", criterion4},
      {"exploration vs union-find", criterion5},
      {"transition-law fidelity", criterion6},
      {"branching cross-check", criterion7},
      {"bipartite criterion equivalence", criterion8},
      {"uniform matching", criterion9},
      {"reproducibility", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s  %-32s %s (%.1fs)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
