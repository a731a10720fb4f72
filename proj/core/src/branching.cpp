#include "multigiant/branching.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>

#include "multigiant/errors.hpp"
#include "multigiant/parallel.hpp"

namespace multigiant {

MeanMatrix OffspringLaw::mean_matrix() const {
  const std::size_t n = types.size();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& o : per_type[s]) {
      for (std::size_t t = 0; t < n; ++t) rows[s][t] += o.probability * o.children[t];
    }
  }
  return MeanMatrix::from_rows(rows, types);
}

OffspringLaw build_offspring_law(const DegreeSpec& spec) {
  OffspringLaw law;
  law.types = spec.pairs();
  const std::size_t n = law.types.size();
  auto type_of = [&](int from, int to) -> std::optional<std::size_t> {
    auto it = std::lower_bound(law.types.begin(), law.types.end(), PartPair{from, to});
    if (it == law.types.end() || *it != PartPair{from, to}) return std::nullopt;
    return static_cast<std::size_t>(it - law.types.begin());
  };

  law.per_type.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto [i, j] = law.types[s];
    for (const auto& a : spec.atoms()) {
      if (a.part != j || a.degree[i] == 0 || a.mass.is_zero()) continue;
      Offspring o;
      if (spec.is_exact()) {
        o.probability = static_cast<double>(Rational(a.degree[i]) * a.mass.rational() / (*spec.exact_lambda())(i, j));
      } else {
        o.probability = a.degree[i] * a.mass.value() / spec.lambda()(i, j);
      }
      o.children.assign(n, 0);
      for (int m = 0; m < spec.parts(); ++m) {
        const int count = a.degree[m] - (m == i ? 1 : 0);
        if (count == 0) continue;
        auto t = type_of(j, m);
        if (!t) throw Error("offspring law: type " + PartPair{j, m}.to_string() + " missing from S");
        o.children[*t] = count;
      }
      law.per_type[s].push_back(std::move(o));
    }
  }

  for (const auto& a : spec.atoms()) {
    if (a.mass.is_zero()) continue;
    Offspring o;
    o.probability = a.mass.value();
    o.children.assign(n, 0);
    for (int j = 0; j < spec.parts(); ++j) {
      if (a.degree[j] == 0) continue;
      auto t = type_of(a.part, j);
      if (!t) throw Error("offspring law: type " + PartPair{a.part, j}.to_string() + " missing from S");
      o.children[*t] = a.degree[j];
    }
    law.root.push_back(std::move(o));
  }
  return law;
}

OffspringLaw build_offspring_law(const DegreeSequence& seq) { return build_offspring_law(empirical_spec(seq)); }

namespace {

double ipow(double base, int exp) {
  double r = 1.0;
  while (exp > 0) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

double generating(const std::vector<Offspring>& outcomes, std::span<const double> q) {
  double acc = 0.0;
  for (const auto& o : outcomes) {
    double term = o.probability;
    for (std::size_t t = 0; t < o.children.size() && term != 0.0; ++t) {
      if (o.children[t] != 0) term *= ipow(q[t], o.children[t]);
    }
    acc += term;
  }
  return std::clamp(acc, 0.0, 1.0);
}

} // namespace

double survival_from_extinction(const OffspringLaw& law, std::span<const double> q) {
  return std::clamp(1.0 - generating(law.root, q), 0.0, 1.0);
}

namespace {

// Every individual has exactly one child.
bool singular(const OffspringLaw& law) {
  for (const auto& outcomes : law.per_type) {
    for (const auto& o : outcomes) {
      if (o.probability > 0.0 && std::accumulate(o.children.begin(), o.children.end(), 0) != 1) return false;
    }
  }
  return true;
}

} // namespace

SurvivalSolution extinction_fixed_point(const OffspringLaw& law, const FixedPointOptions& options) {
  const std::size_t n = law.types.size();
  SurvivalSolution sol;
  std::vector<double> q(n, 0.0), next(n, 0.0);

  bool converged = n == 0;
  // An irreducible, non-singular process with spectral radius <= 1 dies out
  // almost surely; the iteration would only creep towards 1 at rate 1/k.
  if (!converged && !singular(law)) {
    const auto mean = law.mean_matrix();
    if (check_irreducible(mean).irreducible && perron_eigenpair(mean).gamma <= 1.0 + 1e-12) {
      std::fill(q.begin(), q.end(), 1.0);
      converged = true;
    }
  }
  for (long it = 1; it <= options.max_iter && !converged; ++it) {
    double diff = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      next[s] = generating(law.per_type[s], q);
      // Monotone from below; allow for rounding only.
      assert(next[s] >= q[s] - 1e-14);
      diff = std::max(diff, std::abs(next[s] - q[s]));
    }
    q.swap(next);
    sol.iterations = it;
    converged = diff <= options.tol;
  }
  if (!converged) {
    throw NoConvergence("extinction_fixed_point: no convergence after " + std::to_string(options.max_iter) +
                        " iterations");
  }

  double residual = 0.0;
  for (std::size_t s = 0; s < n; ++s) residual = std::max(residual, std::abs(generating(law.per_type[s], q) - q[s]));
  sol.residual = residual;
  sol.eta = survival_from_extinction(law, q);
  sol.q = std::move(q);
  return sol;
}

TreeOutcome simulate_total_size(const OffspringLaw& law, std::int64_t cap, Rng& rng) {
  if (cap < 1) throw Error("simulate_total_size: cap must be >= 1");
  auto make_dist = [](const std::vector<Offspring>& outcomes) {
    std::vector<double> w;
    w.reserve(outcomes.size());
    for (const auto& o : outcomes) w.push_back(o.probability);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
  };

  const std::size_t n = law.types.size();
  TreeOutcome out;
  out.total_size = 1;
  if (law.root.empty()) return out;

  auto root_dist = make_dist(law.root);
  std::vector<std::discrete_distribution<std::size_t>> dists;
  dists.reserve(n);
  for (const auto& outcomes : law.per_type) dists.push_back(make_dist(outcomes));

  // Individuals are i.i.d. given their type, so only per-type counts of
  // unprocessed individuals are tracked.
  std::vector<std::int64_t> pending(n, 0);
  std::int64_t pending_total = 0;
  auto add_children = [&](const Offspring& o) {
    for (std::size_t t = 0; t < n; ++t) {
      pending[t] += o.children[t];
      pending_total += o.children[t];
      out.total_size += o.children[t];
    }
  };

  add_children(law.root[root_dist(rng)]);
  std::size_t cursor = 0;
  while (pending_total > 0) {
    if (out.total_size > cap) {
      out.survived = true;
      return out;
    }
    while (pending[cursor] == 0) cursor = (cursor + 1) % n;
    --pending[cursor];
    --pending_total;
    if (law.per_type[cursor].empty()) continue;
    add_children(law.per_type[cursor][dists[cursor](rng)]);
  }
  out.survived = out.total_size > cap;
  return out;
}

SurvivalEstimate estimate_survival(const OffspringLaw& law, std::int64_t cap, std::int64_t trials,
                                   std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw Error("estimate_survival: trials must be >= 1");
  std::vector<unsigned char> survived(static_cast<std::size_t>(trials), 0);
  parallel_for(survived.size(), threads, [&](std::size_t t) {
    Rng rng = child_stream(seed, "bp/" + std::to_string(t));
    survived[t] = simulate_total_size(law, cap, rng).survived ? 1 : 0;
  });
  SurvivalEstimate est;
  est.trials = trials;
  for (auto s : survived) est.survived += s;
  est.frequency = static_cast<double>(est.survived) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.frequency * (1.0 - est.frequency) / static_cast<double>(trials));
  return est;
}

std::vector<CurvePoint> survival_curve(const SpecFamily& family, std::span<const Mass> grid,
                                       const FixedPointOptions& options) {
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (const auto& param : grid) {
    CurvePoint point;
    point.param = param;
    try {
      const DegreeSpec spec = family(param);
      const auto report = validate_spec(spec);
      if (!report.valid()) throw Error("invalid spec: " + report.errors.front());
      const auto mean = build_mean_matrix(spec);
      point.irreducible = check_irreducible(mean).irreducible;
      if (point.irreducible) point.spectral = perron_eigenpair(mean);
      point.survival = extinction_fixed_point(build_offspring_law(spec), options);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

} // namespace multigiant
