#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "multigiant/degree_model.hpp"
#include "multigiant/matrix.hpp"

namespace multigiant {

/// Expected-offspring matrix of the edge-biased branching process, indexed
/// by the clone types (i,j) in S. Entry [(i,j),(j,m)] is
///   sum_d (d_m - [m == i]) d_i p_j^d / lambda_i^j
/// and every entry [(i,j),(l,m)] with l != j is zero.
struct MeanMatrix {
  std::vector<PartPair> index;
  Matrix entries;
  /// Entries were computed in exact rational arithmetic.
  bool exact = false;

  std::size_t size() const noexcept { return index.size(); }
  double operator()(std::size_t row, std::size_t col) const { return entries(row, col); }
  std::optional<std::size_t> position(PartPair pair) const;

  /// Wrap an arbitrary non-negative square matrix (tests, custom models).
  /// Pairs are synthesised as (0,k) labels when `index` is empty.
  static MeanMatrix from_rows(const std::vector<std::vector<double>>& rows,
                              std::vector<PartPair> index = {});
};

MeanMatrix build_mean_matrix(const DegreeSpec& spec);

struct Irreducibility {
  bool irreducible = false;
  /// Strongly connected components of the positive-entry digraph, each
  /// sorted, listed by smallest member.
  std::vector<std::vector<std::size_t>> components;
};

/// Irreducible iff the digraph with an edge u->v for every positive entry
/// is strongly connected. A 1x1 matrix needs a positive entry; an empty
/// matrix is not irreducible.
Irreducibility check_irreducible(const MeanMatrix& m);

enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime r);

struct SpectralOptions {
  double tol = 1e-12;
  int max_iter = 200000;
  /// Half-width of the critical band around 1. Defaults to 1e-9 for exact
  /// matrices and 1e-6 otherwise.
  std::optional<double> band;
  /// Start vector for the iteration; uniform 1/N when empty.
  std::vector<double> start;
};

struct SpectralResult {
  double gamma = 0.0;
  /// Positive left eigenvector, entries summing to 1.
  std::vector<double> left_vector;
  /// max |z'M - gamma z'|
  double residual = 0.0;
  bool irreducible = false;
  Regime regime = Regime::critical;
  int iterations = 0;
};

Regime classify(double gamma, double band);

/// Perron-Frobenius eigenvalue and left eigenvector of an irreducible
/// non-negative matrix. Power iteration runs on (M' + I)/2, which has the
/// same eigenvector and no period-2 cycling; gamma is recovered from its
/// eigenvalue. Throws NotIrreducible or NoConvergence.
SpectralResult perron_eigenpair(const MeanMatrix& m, const SpectralOptions& options = {});

/// Bipartite giant-component sum  sum_{j,k} jk(jk - j - k) p_j q_k  for a
/// two-part spec with part-1 degrees (0,j) and part-2 degrees (k,0). Its
/// sign is the sign of gamma - 1. Throws NotBipartite otherwise.
double bipartite_criterion(const DegreeSpec& spec);

/// Exact value of bipartite_criterion for exact specs.
Rational bipartite_criterion_exact(const DegreeSpec& spec);

} // namespace multigiant
