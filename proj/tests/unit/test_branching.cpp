#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "multigiant/branching.hpp"
#include "multigiant/errors.hpp"

using namespace multigiant;

namespace {

std::vector<double> generating_map(const OffspringLaw& law, const std::vector<double>& q) {
  std::vector<double> out(law.types.size(), 0.0);
  for (std::size_t t = 0; t < law.types.size(); ++t) {
    for (const auto& o : law.per_type[t]) {
      double term = o.probability;
      for (std::size_t c = 0; c < q.size(); ++c) term *= std::pow(q[c], o.children[c]);
      out[t] += term;
    }
  }
  return out;
}

} // namespace

TEST_CASE("offspring law of the bipartite spec") {
  const auto law = build_offspring_law(fixtures::bipartite());
  REQUIRE(law.types == std::vector<PartPair>{{0, 1}, {1, 0}});
  // A (1,2) individual is a part-2 vertex of degree (2,0): one (2,1) child.
  REQUIRE(law.per_type[0].size() == 1);
  CHECK(law.per_type[0][0].probability == 1.0);
  CHECK(law.per_type[0][0].children == std::vector<int>{0, 1});
  // A (2,1) individual is a part-1 vertex, size-biased: 1/4 of degree 1, 3/4 of degree 3.
  REQUIRE(law.per_type[1].size() == 2);
  CHECK(law.per_type[1][0].probability == doctest::Approx(0.25));
  CHECK(law.per_type[1][0].children == std::vector<int>{0, 0});
  CHECK(law.per_type[1][1].probability == doctest::Approx(0.75));
  CHECK(law.per_type[1][1].children == std::vector<int>{2, 0});
  REQUIRE(law.root.size() == 3);

  const auto m = law.mean_matrix();
  const auto direct = build_mean_matrix(fixtures::bipartite());
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) CHECK(m(r, c) == doctest::Approx(direct(r, c)).epsilon(1e-14));
  }
}

TEST_CASE("bipartite extinction is the quadratic root 1/3") {
  const auto law = build_offspring_law(fixtures::bipartite());
  const auto sol = extinction_fixed_point(law);
  CHECK(sol.q[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(sol.q[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(sol.eta == doctest::Approx(23.0 / 27.0).epsilon(1e-10));
  CHECK(sol.residual <= 1e-11);
  CHECK(survival_from_extinction(law, sol.q) == doctest::Approx(sol.eta));
}

TEST_CASE("unipartite extinction") {
  // q = 1/4 + 3/4 q^2 gives q = 1/3, eta = 1 - (q/2 + q^3/2) = 22/27.
  const auto law = build_offspring_law(fixtures::unipartite());
  const auto sol = extinction_fixed_point(law);
  CHECK(sol.q[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(sol.eta == doctest::Approx(22.0 / 27.0).epsilon(1e-10));
}

TEST_CASE("subcritical and critical laws die out") {
  const auto sub = extinction_fixed_point(build_offspring_law(fixtures::subcritical()));
  CHECK(sub.eta == 0.0);
  CHECK(sub.q == std::vector<double>{1.0, 1.0});

  // Degrees 1 and 3 with p_1 = 3 p_3: one expected child, but with variance.
  const DegreeSpec critical(1, {{0, {1}, fixtures::q(3, 4)}, {0, {3}, fixtures::q(1, 4)}});
  const auto crit = extinction_fixed_point(build_offspring_law(critical));
  CHECK(crit.eta == 0.0);

  // Every vertex of degree 2: each individual has exactly one child, so the
  // line of descent never ends even though the mean is 1.
  const DegreeSpec cycle(1, {{0, {2}, fixtures::q(1, 1)}});
  CHECK(extinction_fixed_point(build_offspring_law(cycle)).eta == 1.0);
}

TEST_CASE("fixed point is a fixed point and the smallest one") {
  for (const auto& spec : {fixtures::tripartite(), fixtures::bipartite(), fixtures::unipartite()}) {
    const auto law = build_offspring_law(spec);
    const auto sol = extinction_fixed_point(law);
    const auto f = generating_map(law, sol.q);
    for (std::size_t t = 0; t < f.size(); ++t) CHECK(std::abs(f[t] - sol.q[t]) <= 1e-10);
    // Iterates from 0 stay below every fixed point.
    std::vector<double> x(law.types.size(), 0.0);
    for (int k = 0; k < 200; ++k) x = generating_map(law, x);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(x[t] <= sol.q[t] + 1e-10);
  }
}

TEST_CASE("isolated vertices dilute eta") {
  // Half the vertices isolated, the other half the unipartite spec.
  const DegreeSpec spec(1, {{0, {0}, fixtures::q(1, 2)}, {0, {1}, fixtures::q(1, 4)}, {0, {3}, fixtures::q(1, 4)}});
  const auto sol = extinction_fixed_point(build_offspring_law(spec));
  CHECK(sol.eta == doctest::Approx(11.0 / 27.0).epsilon(1e-10));
}

TEST_CASE("sequence laws") {
  const auto seq = realize_sequence(fixtures::bipartite(), 8);
  const auto sol = extinction_fixed_point(build_offspring_law(seq));
  CHECK(sol.eta == doctest::Approx(23.0 / 27.0).epsilon(1e-10));
}

TEST_CASE("tree simulation") {
  const auto law = build_offspring_law(fixtures::subcritical());
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto out = simulate_total_size(law, 1000, rng);
    CHECK(out.total_size >= 1);
    CHECK(out.survived == (out.total_size > 1000));
  }
  const auto sure = build_offspring_law(DegreeSpec(1, {{0, {3}, fixtures::q(1, 1)}}));
  const auto grown = simulate_total_size(sure, 500, rng);
  CHECK(grown.survived);
  CHECK(grown.total_size > 500);
}

TEST_CASE("survival estimate is reproducible across thread counts") {
  const auto law = build_offspring_law(fixtures::bipartite());
  const auto a = estimate_survival(law, 200, 3000, 42, 1);
  const auto b = estimate_survival(law, 200, 3000, 42, 4);
  CHECK(a.survived == b.survived);
  CHECK(a.trials == 3000);
  CHECK(a.standard_error == doctest::Approx(std::sqrt(a.frequency * (1 - a.frequency) / 3000.0)));
  CHECK(std::abs(a.frequency - 23.0 / 27.0) < 5 * a.standard_error + 0.01);
}

TEST_CASE("survival curve along a mixture") {
  const auto from = fixtures::subcritical();
  const auto to = fixtures::bipartite();
  std::vector<Mass> grid;
  for (int k = 0; k <= 4; ++k) grid.push_back(fixtures::q(k, 4));
  const auto curve = survival_curve([&](const Mass& t) { return mix_specs(from, to, t); }, grid);
  REQUIRE(curve.size() == 5);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    REQUIRE(curve[k].spectral);
    CHECK(curve[k].spectral->gamma > curve[k - 1].spectral->gamma);
    CHECK(curve[k].survival->eta >= curve[k - 1].survival->eta);
  }
  CHECK(curve.front().survival->eta == 0.0);
  CHECK(curve.back().survival->eta == doctest::Approx(23.0 / 27.0).epsilon(1e-10));
}
