#include "multigiant/configuration.hpp"

#include <algorithm>
#include <limits>

#include "multigiant/errors.hpp"

namespace multigiant {

CloneGraph CloneGraph::layout(const DegreeSequence& seq) {
  seq.require_matchable();
  const auto clones = seq.total_clones();
  if (seq.n() >= std::numeric_limits<VertexId>::max() || clones >= std::numeric_limits<CloneId>::max()) {
    throw Error("configuration model: sequence too large for 32-bit vertex/clone ids");
  }

  CloneGraph g;
  g.sequence_ = seq;
  g.types_ = seq.pairs();
  const int p = seq.parts();
  std::vector<std::uint32_t> type_index(static_cast<std::size_t>(p * p), 0);
  for (std::size_t t = 0; t < g.types_.size(); ++t) {
    type_index[static_cast<std::size_t>(g.types_[t].from * p + g.types_[t].to)] = static_cast<std::uint32_t>(t);
  }

  g.vertex_entry_.reserve(static_cast<std::size_t>(seq.n()));
  g.first_clone_.reserve(static_cast<std::size_t>(seq.n()) + 1);
  g.clone_owner_.reserve(static_cast<std::size_t>(clones));
  g.clone_type_.reserve(static_cast<std::size_t>(clones));
  const auto entries = seq.entries();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& entry = entries[e];
    for (std::int64_t r = 0; r < entry.count; ++r) {
      const auto v = static_cast<VertexId>(g.vertex_entry_.size());
      g.vertex_entry_.push_back(e);
      g.first_clone_.push_back(static_cast<CloneId>(g.clone_owner_.size()));
      for (int j = 0; j < p; ++j) {
        for (int s = 0; s < entry.degree[j]; ++s) {
          g.clone_owner_.push_back(v);
          g.clone_type_.push_back(type_index[static_cast<std::size_t>(entry.part * p + j)]);
        }
      }
    }
  }
  g.first_clone_.push_back(static_cast<CloneId>(g.clone_owner_.size()));
  g.partner_.assign(g.clone_owner_.size(), 0);
  return g;
}

CloneGraph CloneGraph::with_matching(const DegreeSequence& seq, std::vector<CloneId> partner) {
  CloneGraph g = layout(seq);
  if (partner.size() != g.num_clones()) {
    throw InvalidSequence("matching has " + std::to_string(partner.size()) + " entries for " +
                          std::to_string(g.num_clones()) + " clones");
  }
  for (CloneId c = 0; c < partner.size(); ++c) {
    const CloneId d = partner[c];
    if (d >= partner.size() || partner[d] != c || d == c) {
      throw InvalidSequence("matching is not a fixed-point-free involution at clone " + std::to_string(c));
    }
    if (g.types_[g.clone_type_[d]] != g.types_[g.clone_type_[c]].reversed()) {
      throw InvalidSequence("clone " + std::to_string(c) + " of type " + g.types_[g.clone_type_[c]].to_string() +
                            " matched with clone of type " + g.types_[g.clone_type_[d]].to_string());
    }
  }
  g.partner_ = std::move(partner);
  return g;
}

DegreeVector CloneGraph::realized_degree(VertexId v) const {
  std::vector<int> d(static_cast<std::size_t>(parts()), 0);
  for (CloneId c : clones_of(v)) ++d[static_cast<std::size_t>(part_of(owner(partner_[c])))];
  return DegreeVector(std::move(d));
}

std::vector<Edge> CloneGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_clones() / 2);
  for (CloneId c = 0; c < partner_.size(); ++c) {
    const CloneId d = partner_[c];
    if (c < d) {
      const VertexId a = clone_owner_[c], b = clone_owner_[d];
      out.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  return out;
}

CloneGraph sample_configuration(const DegreeSequence& seq, Rng& rng) {
  CloneGraph g = CloneGraph::layout(seq);
  const auto& types = g.types_;
  std::vector<std::vector<CloneId>> by_type(types.size());
  for (CloneId c = 0; c < g.clone_type_.size(); ++c) by_type[g.clone_type_[c]].push_back(c);

  for (std::size_t t = 0; t < types.size(); ++t) {
    const auto [i, j] = types[t];
    if (i < j) {
      const auto rev = std::lower_bound(types.begin(), types.end(), types[t].reversed()) - types.begin();
      auto& mine = by_type[t];
      auto& theirs = by_type[static_cast<std::size_t>(rev)];
      std::shuffle(theirs.begin(), theirs.end(), rng);
      for (std::size_t k = 0; k < mine.size(); ++k) {
        g.partner_[mine[k]] = theirs[k];
        g.partner_[theirs[k]] = mine[k];
      }
    } else if (i == j) {
      auto& pool = by_type[t];
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t k = 0; k + 1 < pool.size(); k += 2) {
        g.partner_[pool[k]] = pool[k + 1];
        g.partner_[pool[k + 1]] = pool[k];
      }
    }
  }
  return g;
}

bool is_simple(const CloneGraph& g) {
  auto edges = g.edges();
  for (const auto& e : edges) {
    if (e.u == e.v) return false;
  }
  std::sort(edges.begin(), edges.end());
  return std::adjacent_find(edges.begin(), edges.end()) == edges.end();
}

SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, int max_attempts) {
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    CloneGraph g = sample_configuration(seq, rng);
    if (is_simple(g)) return {std::move(g), attempt};
  }
  throw MaxAttemptsExceeded(max_attempts, 0);
}

} // namespace multigiant
