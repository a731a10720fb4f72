#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "multigiant/matrix.hpp"

namespace multigiant {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = BasicMatrix<Rational>;

/// Probability mass that is either an exact rational or a binary float.
/// Arithmetic stays exact while both operands are exact.
class Mass {
public:
  Mass() = default;

  static Mass exact(Rational value);
  static Mass approximate(double value);
  /// Parse "a/b" or "a" as an exact rational.
  static Mass parse_rational(std::string_view text);

  bool is_exact() const noexcept { return exact_.has_value(); }
  const Rational& rational() const;
  double value() const noexcept { return value_; }
  bool is_negative() const;
  bool is_zero() const;

  /// "a/b" (or "a" for integers) for exact values, shortest round-trip decimal otherwise.
  std::string to_string() const;

  friend Mass operator+(const Mass& a, const Mass& b);
  friend Mass operator-(const Mass& a, const Mass& b);
  friend Mass operator*(const Mass& a, const Mass& b);
  friend bool operator==(const Mass& a, const Mass& b);

private:
  std::optional<Rational> exact_ = Rational(0);
  double value_ = 0.0;
};

/// Per-part neighbour counts (d_1, ..., d_p) of a vertex.
class DegreeVector {
public:
  DegreeVector() = default;
  explicit DegreeVector(std::vector<int> entries);
  DegreeVector(std::initializer_list<int> entries) : DegreeVector(std::vector<int>(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t part) const { return entries_[part]; }
  int total() const noexcept { return total_; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// "(d_1,...,d_p)"
  std::string to_string() const;

  bool operator==(const DegreeVector& other) const { return entries_ == other.entries_; }
  std::strong_ordering operator<=>(const DegreeVector& other) const {
    return entries_ <=> other.entries_;
  }

private:
  std::vector<int> entries_;
  int total_ = 0;
};

/// Ordered pair of parts (from, to), zero-based. A clone of type (i,j)
/// lives in part i and is matched into part j.
struct PartPair {
  int from = 0;
  int to = 0;

  PartPair reversed() const noexcept { return {to, from}; }
  /// One-based "(i,j)" for reports.
  std::string to_string() const;

  auto operator<=>(const PartPair&) const = default;
};

struct SpecAtom {
  int part = 0;  // zero-based
  DegreeVector degree;
  Mass mass;
};

/// Asymptotic multipartite degree distribution with finite support.
/// Atoms are kept sorted by (part, degree); derived quantities are computed
/// once at construction.
class DegreeSpec {
public:
  DegreeSpec() = default;
  /// Throws ParseError on out-of-range parts, wrong degree length,
  /// negative mass or duplicate (part, degree) atoms.
  DegreeSpec(int parts, std::vector<SpecAtom> atoms);

  int parts() const noexcept { return parts_; }
  std::span<const SpecAtom> atoms() const noexcept { return atoms_; }
  bool is_exact() const noexcept { return exact_; }

  Mass total_mass() const;
  /// lambda(i,j) = sum_d d_j p_i^d.
  const Matrix& lambda() const noexcept { return lambda_; }
  const std::optional<RationalMatrix>& exact_lambda() const noexcept { return exact_lambda_; }
  /// S: ordered pairs with lambda(i,j) > 0, lexicographic.
  const std::vector<PartPair>& pairs() const noexcept { return pairs_; }
  std::vector<int> pair_targets(int part) const;

  const std::vector<double>& first_moment() const noexcept { return first_moment_; }
  const std::vector<double>& second_moment() const noexcept { return second_moment_; }

  bool operator==(const DegreeSpec& other) const;

private:
  int parts_ = 0;
  std::vector<SpecAtom> atoms_;
  bool exact_ = true;
  Matrix lambda_;
  std::optional<RationalMatrix> exact_lambda_;
  std::vector<PartPair> pairs_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> lints;
  std::vector<PartPair> pairs;
  Matrix lambda;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  bool valid() const noexcept { return errors.empty(); }
};

/// Check mass normalisation, lambda symmetry and non-empty S_i. Exact specs
/// are checked exactly; float specs within `tol`.
ValidationReport validate_spec(const DegreeSpec& spec, double tol = 1e-12);

/// (1 - t) a + t b, atom by atom. Both specs must have the same part count.
DegreeSpec mix_specs(const DegreeSpec& a, const DegreeSpec& b, const Mass& t);

struct SequenceEntry {
  int part = 0;
  DegreeVector degree;
  std::int64_t count = 0;

  bool operator==(const SequenceEntry&) const = default;
};

/// Finite-n degree sequence n_i^d(n).
class DegreeSequence {
public:
  DegreeSequence() = default;
  /// Throws ParseError on structural problems, as DegreeSpec does.
  DegreeSequence(int parts, std::vector<SequenceEntry> entries);

  int parts() const noexcept { return parts_; }
  std::span<const SequenceEntry> entries() const noexcept { return entries_; }
  std::int64_t n() const noexcept { return n_; }
  /// Largest total degree with a positive count, 0 for an empty sequence.
  int omega() const noexcept { return omega_; }

  /// Number of (i,j)-clones, sum_d d_j n_i^d.
  std::int64_t clone_count(int from, int to) const;
  std::int64_t total_clones() const;
  /// Pairs with at least one clone, lexicographic.
  std::vector<PartPair> pairs() const;

  /// Every way the sequence fails to be matchable; empty when it is.
  std::vector<std::string> matching_defects() const;
  /// Throws InvalidSequence listing matching_defects().
  void require_matchable() const;

  bool operator==(const DegreeSequence&) const = default;

private:
  int parts_ = 0;
  std::vector<SequenceEntry> entries_;
  std::int64_t n_ = 0;
  int omega_ = 0;
};

struct SequenceStats {
  std::int64_t n = 0;
  Matrix lambda;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  int omega = 0;
  std::vector<std::string> lints;
};

/// Empirical lambda and moments of a finite sequence (all zero when n = 0).
/// Lints omega(n)^2 > n.
SequenceStats sequence_stats(const DegreeSequence& seq);

enum class RoundingPolicy {
  largest_remainder,  ///< floors, then leftover units to the largest remainders
  nearest,            ///< independent rounding of each n p_i^d
};

/// Instantiate `spec` at n vertices and repair the result so it is
/// matchable: (i,j) and (j,i) clone counts agree and (i,i) counts are even.
/// The repair applies the fewest single-vertex additions/removals, trying
/// higher-mass atoms first. Throws RepairInfeasible if no repair is found.
DegreeSequence realize_sequence(const DegreeSpec& spec, std::int64_t n,
                                RoundingPolicy policy = RoundingPolicy::largest_remainder);

/// Asymptotic spec of a finite sequence, p_i^d(n) = n_i^d / n as exact rationals.
DegreeSpec empirical_spec(const DegreeSequence& seq);

} // namespace multigiant
