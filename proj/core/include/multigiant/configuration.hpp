#pragma once

#include <cstdint>
#include <ranges>
#include <utility>
#include <vector>

#include "multigiant/degree_model.hpp"
#include "multigiant/random.hpp"

namespace multigiant {

using VertexId = std::uint32_t;
using CloneId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Configuration-model multigraph kept at clone level.
///
/// Vertices are numbered densely in (part, degree, replica) order of the
/// sequence. Each vertex owns a contiguous block of clones, grouped by target
/// part; partner() is the clone it was matched with.
class CloneGraph {
public:
  const DegreeSequence& sequence() const noexcept { return sequence_; }
  int parts() const noexcept { return sequence_.parts(); }
  std::size_t num_vertices() const noexcept { return vertex_entry_.size(); }
  std::size_t num_clones() const noexcept { return clone_owner_.size(); }

  /// Clone types present in the sequence (pairs with at least one clone).
  const std::vector<PartPair>& types() const noexcept { return types_; }

  int part_of(VertexId v) const { return sequence_.entries()[vertex_entry_[v]].part; }
  const DegreeVector& degree_of(VertexId v) const { return sequence_.entries()[vertex_entry_[v]].degree; }
  /// Index of the vertex's entry in sequence().entries().
  std::size_t entry_of(VertexId v) const { return vertex_entry_[v]; }

  /// Clone ids of v; contiguous.
  auto clones_of(VertexId v) const { return std::views::iota(first_clone_[v], first_clone_[v + 1]); }
  VertexId owner(CloneId c) const { return clone_owner_[c]; }
  /// Index into types().
  std::size_t type_of(CloneId c) const { return clone_type_[c]; }
  CloneId partner(CloneId c) const { return partner_[c]; }
  const std::vector<CloneId>& partners() const noexcept { return partner_; }

  /// Realised degree vector of v from its clones' partners.
  DegreeVector realized_degree(VertexId v) const;

  /// One entry per matched clone pair, u <= v, in clone order.
  std::vector<Edge> edges() const;

  /// Build the clone layout for `seq` with an explicit matching, given as
  /// partner[c] for every clone c. Throws InvalidSequence if `partner` is
  /// not an involution pairing (i,j)-clones with (j,i)-clones.
  static CloneGraph with_matching(const DegreeSequence& seq, std::vector<CloneId> partner);

  friend CloneGraph sample_configuration(const DegreeSequence& seq, Rng& rng);

private:
  static CloneGraph layout(const DegreeSequence& seq);

  DegreeSequence sequence_;
  std::vector<PartPair> types_;
  std::vector<std::size_t> vertex_entry_;
  std::vector<CloneId> first_clone_;  // size num_vertices + 1
  std::vector<VertexId> clone_owner_;
  std::vector<std::uint32_t> clone_type_;
  std::vector<CloneId> partner_;
};

/// Uniform random matching of (i,j)-clones with (j,i)-clones for every
/// pair, and a uniform perfect matching of (i,i)-clones. Self-loops and
/// multi-edges are kept. Throws InvalidSequence if the sequence is not
/// matchable.
CloneGraph sample_configuration(const DegreeSequence& seq, Rng& rng);

/// No self-loops and no repeated vertex pair.
bool is_simple(const CloneGraph& g);

struct SimpleSample {
  CloneGraph graph;
  int attempts = 0;
};

/// Rejection sampling: redraw until the multigraph is simple. Throws
/// MaxAttemptsExceeded after `max_attempts` failures.
SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, int max_attempts);

} // namespace multigiant
