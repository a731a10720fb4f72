#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "multigiant/errors.hpp"
#include "multigiant/mean_matrix.hpp"
#include "oracles.hpp"

using namespace multigiant;

namespace {

std::vector<std::vector<double>> rows_of(const MeanMatrix& m) {
  std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) rows[r][c] = m(r, c);
  }
  return rows;
}

double left_residual(const MeanMatrix& m, const SpectralResult& sr) {
  double worst = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.size(); ++r) s += sr.left_vector[r] * m(r, c);
    worst = std::max(worst, std::abs(s - sr.gamma * sr.left_vector[c]));
  }
  return worst;
}

} // namespace

TEST_CASE("bipartite mean matrix") {
  const auto m = build_mean_matrix(fixtures::bipartite());
  CHECK(m.exact);
  REQUIRE(m.size() == 2);
  CHECK(m.index == std::vector<PartPair>{{0, 1}, {1, 0}});
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 0) == 1.5);
  CHECK(m(1, 1) == 0.0);
}

TEST_CASE("subcritical mean matrix") {
  const auto m = build_mean_matrix(fixtures::subcritical());
  CHECK(m(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m(1, 0) == doctest::Approx(0.6).epsilon(1e-15));
  const auto sr = perron_eigenpair(m);
  CHECK(std::abs(sr.gamma - std::sqrt(0.6)) < 1e-10);
  CHECK(sr.regime == Regime::subcritical);
}

TEST_CASE("entries match the definition and block structure") {
  for (const auto& spec : {fixtures::bipartite(), fixtures::tripartite(), fixtures::unipartite(),
                           fixtures::disjoint_bipartite()}) {
    const auto m = build_mean_matrix(spec);
    CHECK(m.index == spec.pairs());
    for (std::size_t r = 0; r < m.size(); ++r) {
      for (std::size_t c = 0; c < m.size(); ++c) {
        const auto [i, j] = m.index[r];
        const auto [l, mm] = m.index[c];
        if (l != j) {
          CHECK(m(r, c) == 0.0);
          continue;
        }
        const double expect = static_cast<double>(oracle::mean_entry(spec, i, j, mm));
        CHECK(m(r, c) == doctest::Approx(expect).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("float specs give the same matrix") {
  const DegreeSpec approx(2, {{0, {0, 1}, Mass::approximate(0.25)},
                              {0, {0, 3}, Mass::approximate(0.25)},
                              {1, {2, 0}, Mass::approximate(0.5)}});
  const auto m = build_mean_matrix(approx);
  CHECK_FALSE(m.exact);
  CHECK(m(1, 0) == doctest::Approx(1.5));
}

TEST_CASE("irreducibility") {
  CHECK(check_irreducible(build_mean_matrix(fixtures::bipartite())).irreducible);
  CHECK(check_irreducible(build_mean_matrix(fixtures::tripartite())).irreducible);

  const auto m = build_mean_matrix(fixtures::disjoint_bipartite());
  const auto irr = check_irreducible(m);
  CHECK_FALSE(irr.irreducible);
  REQUIRE(irr.components.size() == 2);
  CHECK(irr.components[0] == std::vector<std::size_t>{0, 1});
  CHECK(irr.components[1] == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(perron_eigenpair(m), NotIrreducible);

  CHECK_FALSE(check_irreducible(MeanMatrix::from_rows({{0.0}})).irreducible);
  CHECK(check_irreducible(MeanMatrix::from_rows({{0.5}})).irreducible);
  CHECK_FALSE(check_irreducible(MeanMatrix::from_rows({{1, 1}, {0, 1}})).irreducible);
  CHECK_FALSE(check_irreducible(MeanMatrix{}).irreducible);
}

TEST_CASE("bipartite eigenpair") {
  const auto m = build_mean_matrix(fixtures::bipartite());
  const auto sr = perron_eigenpair(m);
  CHECK(std::abs(sr.gamma - std::sqrt(1.5)) < 1e-10);
  CHECK(sr.regime == Regime::supercritical);
  CHECK(sr.residual <= 1e-10);
  CHECK(left_residual(m, sr) <= 1e-10);
  // z' M = gamma z' gives z_2 = z_1 / sqrt(1.5).
  const double z1 = 1.0 / (1.0 + 1.0 / std::sqrt(1.5));
  CHECK(sr.left_vector[0] == doctest::Approx(z1).epsilon(1e-10));
  CHECK(sr.left_vector[1] == doctest::Approx(1.0 - z1).epsilon(1e-10));
}

TEST_CASE("eigenvalue agrees with the characteristic polynomial") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& row : rows) {
      for (auto& x : row) x = u(rng) < 0.6 ? 0.0 : u(rng);
    }
    const auto m = MeanMatrix::from_rows(rows);
    if (!check_irreducible(m).irreducible) {
      CHECK_THROWS_AS(perron_eigenpair(m), NotIrreducible);
      continue;
    }
    const auto sr = perron_eigenpair(m);
    CHECK(sr.gamma == doctest::Approx(oracle::spectral_radius(rows)).epsilon(1e-8));
    CHECK(left_residual(m, sr) <= 1e-9 * std::max(1.0, sr.gamma));
    for (double z : sr.left_vector) CHECK(z > 0.0);
  }
  for (const auto& spec : {fixtures::tripartite(), fixtures::unipartite()}) {
    const auto m = build_mean_matrix(spec);
    CHECK(perron_eigenpair(m).gamma == doctest::Approx(oracle::spectral_radius(rows_of(m))).epsilon(1e-8));
  }
}

TEST_CASE("periodic matrices converge") {
  // 3-cycle: eigenvalues are the cube roots of 8, all of modulus 2.
  const auto m = MeanMatrix::from_rows({{0, 2, 0}, {0, 0, 2}, {2, 0, 0}});
  const auto sr = perron_eigenpair(m);
  CHECK(sr.gamma == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("regime classification") {
  CHECK(classify(1.0 + 1e-3, 1e-6) == Regime::supercritical);
  CHECK(classify(1.0 - 1e-3, 1e-6) == Regime::subcritical);
  CHECK(classify(1.0 + 1e-7, 1e-6) == Regime::critical);
  const auto m = MeanMatrix::from_rows({{0, 1}, {1, 0}});
  CHECK(perron_eigenpair(m).regime == Regime::critical);
  CHECK(to_string(Regime::critical) == "critical");
}

TEST_CASE("bipartite criterion value") {
  CHECK(bipartite_criterion(fixtures::bipartite()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bipartite_criterion_exact(fixtures::bipartite()) == Rational(1, 2));
  CHECK_THROWS_AS(bipartite_criterion(fixtures::tripartite()), NotBipartite);
  CHECK_THROWS_AS(bipartite_criterion(fixtures::unipartite()), NotBipartite);
}

TEST_CASE("bipartite criterion sign matches gamma on random specs") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto spec = fixtures::random_bipartite(rng);
    REQUIRE(validate_spec(spec).valid());
    const auto m = build_mean_matrix(spec);
    if (!check_irreducible(m).irreducible) continue;
    const double gamma = perron_eigenpair(m).gamma;
    if (std::abs(gamma - 1.0) <= 1e-6) continue;
    const auto sum = bipartite_criterion_exact(spec);
    CHECK((sum > 0) == (gamma > 1.0));
    ++compared;
  }
  CHECK(compared >= 100);
}
