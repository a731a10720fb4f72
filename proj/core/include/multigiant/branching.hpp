#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multigiant/degree_model.hpp"
#include "multigiant/mean_matrix.hpp"
#include "multigiant/random.hpp"

namespace multigiant {

/// One atom of an offspring distribution: with `probability`, the
/// individual has children[t] children of type t (indices into
/// OffspringLaw::types).
struct Offspring {
  double probability = 0.0;
  std::vector<int> children;
};

/// Edge-biased multi-type branching process.
///  - an individual of type (i,j) is a part-j vertex of degree d with
///    probability d_i p_j^d / lambda_i^j and has d_m - [m == i] children of
///    type (j,m);
///  - the root is a part-i vertex of degree d with probability p_i^d and has
///    d_j children of type (i,j).
struct OffspringLaw {
  std::vector<PartPair> types;
  std::vector<std::vector<Offspring>> per_type;
  std::vector<Offspring> root;

  /// Expected children: entry (s,t) is the mean number of type-t children
  /// of a type-s individual.
  MeanMatrix mean_matrix() const;
};

OffspringLaw build_offspring_law(const DegreeSpec& spec);
/// Finite-n law, built from p_i^d(n) = n_i^d / n.
OffspringLaw build_offspring_law(const DegreeSequence& seq);

struct FixedPointOptions {
  double tol = 1e-12;
  long max_iter = 1'000'000;
};

struct SurvivalSolution {
  /// Extinction probability per type, same order as OffspringLaw::types.
  std::vector<double> q;
  double eta = 0.0;
  long iterations = 0;
  /// max |q - F(q)|
  double residual = 0.0;
};

/// Smallest fixed point of the offspring generating map by monotone
/// iteration from q = 0, then eta = 1 - sum_{i,d} p_i^d prod_j q_ij^{d_j}.
/// An irreducible law whose mean matrix has spectral radius <= 1 gets q = 1
/// exactly without iterating (unless every individual has exactly one
/// child, where q = 0); near criticality the iterate only creeps towards 1.
/// Throws NoConvergence.
SurvivalSolution extinction_fixed_point(const OffspringLaw& law, const FixedPointOptions& options = {});

/// Evaluate eta for a given extinction vector.
double survival_from_extinction(const OffspringLaw& law, std::span<const double> q);

struct TreeOutcome {
  bool survived = false;
  /// Total individuals born, root included. Exceeds `cap` when survived.
  std::int64_t total_size = 0;
};

/// Grow one tree; it "survives" once its total population exceeds `cap`.
TreeOutcome simulate_total_size(const OffspringLaw& law, std::int64_t cap, Rng& rng);

struct SurvivalEstimate {
  std::int64_t trials = 0;
  std::int64_t survived = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo survival frequency. Trial t draws from child_stream(seed,
/// "bp/t"), so the estimate does not depend on `threads`.
SurvivalEstimate estimate_survival(const OffspringLaw& law, std::int64_t cap, std::int64_t trials,
                                   std::uint64_t seed, unsigned threads = 0);

using SpecFamily = std::function<DegreeSpec(const Mass&)>;

struct CurvePoint {
  Mass param;
  bool irreducible = false;
  std::optional<SpectralResult> spectral;
  std::optional<SurvivalSolution> survival;
  /// Set when this grid point failed; the remaining fields are partial.
  std::string error;
};

/// Evaluate gamma and eta along a one-parameter family of specs.
std::vector<CurvePoint> survival_curve(const SpecFamily& family, std::span<const Mass> grid,
                                       const FixedPointOptions& options = {});

} // namespace multigiant
