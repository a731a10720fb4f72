#include "multigiant/union_find.hpp"

#include "multigiant/exploration.hpp"

namespace multigiant {

ComponentCensus union_find_components(const CloneGraph& graph) {
  const std::size_t n = graph.num_vertices();
  DisjointSets sets(n);
  for (const auto& e : graph.edges()) sets.unite(e.u, e.v);

  std::vector<std::int64_t> slot(n, -1);
  std::vector<std::vector<VertexId>> components;
  components.reserve(sets.count());
  for (VertexId v = 0; v < n; ++v) {
    const auto root = sets.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(slot[root])].push_back(v);
  }
  return make_census(std::move(components), graph);
}

} // namespace multigiant
