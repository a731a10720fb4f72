#include "multigiant/exploration.hpp"

#include <algorithm>
#include <numeric>

#include "multigiant/errors.hpp"

namespace multigiant {

// ---------------------------------------------------------------------------
// Census

ComponentCensus make_census(std::vector<std::vector<VertexId>> components, const CloneGraph& g) {
  for (auto& c : components) std::sort(c.begin(), c.end());
  std::erase_if(components, [](const auto& c) { return c.empty(); });
  std::sort(components.begin(), components.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  ComponentCensus census;
  census.n = g.num_vertices();
  census.largest_per_part.assign(static_cast<std::size_t>(g.parts()), 0);
  if (!components.empty()) {
    for (VertexId v : components.front()) ++census.largest_per_part[static_cast<std::size_t>(g.part_of(v))];
  }
  census.components = std::move(components);
  return census;
}

// ---------------------------------------------------------------------------
// State and transition law

std::int64_t ExplorationState::total_active() const { return std::accumulate(active.begin(), active.end(), std::int64_t{0}); }

std::int64_t ExplorationState::total_living() const { return std::accumulate(living.begin(), living.end(), std::int64_t{0}); }

std::int64_t ExplorationState::living_in_part(int i) const {
  std::int64_t sum = 0;
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (types[t].from == i) sum += living[t];
  }
  return sum;
}

std::int64_t ExplorationState::sleeping_vertices() const {
  std::int64_t sum = 0;
  for (const auto& s : sleeping) sum += s.count;
  return sum;
}

std::optional<std::size_t> ExplorationState::type_index(PartPair pair) const {
  auto it = std::find(types.begin(), types.end(), pair);
  if (it == types.end()) return std::nullopt;
  return static_cast<std::size_t>(it - types.begin());
}

ExplorationState initial_state(const DegreeSequence& seq) {
  ExplorationState s;
  s.parts = seq.parts();
  s.types = seq.pairs();
  s.active.assign(s.types.size(), 0);
  s.living.resize(s.types.size());
  for (std::size_t t = 0; t < s.types.size(); ++t) s.living[t] = seq.clone_count(s.types[t].from, s.types[t].to);
  for (const auto& e : seq.entries()) s.sleeping.push_back({e.part, e.degree, e.count});
  return s;
}

namespace {

void check_consistent(const ExplorationState& s) {
  if (s.active.size() != s.types.size() || s.living.size() != s.types.size()) {
    throw InconsistentState("counter vectors do not match the type list");
  }
  for (const auto& c : s.sleeping) {
    if (c.count < 0) throw InconsistentState("negative sleeping-vertex count");
    if (c.degree.size() != static_cast<std::size_t>(s.parts)) throw InconsistentState("degree length mismatch");
  }
  for (std::size_t t = 0; t < s.types.size(); ++t) {
    const auto [i, j] = s.types[t];
    if (s.active[t] < 0 || s.living[t] < s.active[t]) {
      throw InconsistentState("type " + s.types[t].to_string() + " needs 0 <= A <= L");
    }
    std::int64_t asleep = 0;
    for (const auto& c : s.sleeping) {
      if (c.part == i) asleep += c.count * c.degree[j];
    }
    if (s.living[t] - s.active[t] != asleep) {
      throw InconsistentState("type " + s.types[t].to_string() + ": L - A = " +
                              std::to_string(s.living[t] - s.active[t]) + " but sleeping vertices hold " +
                              std::to_string(asleep) + " clones");
    }
  }
  // Sleeping clones of a type outside the list would be unmatchable.
  for (const auto& c : s.sleeping) {
    if (c.count == 0) continue;
    for (int j = 0; j < s.parts; ++j) {
      if (c.degree[j] > 0 && !s.type_index({c.part, j})) {
        throw InconsistentState("sleeping clones of type " + PartPair{c.part, j}.to_string() + " not tracked");
      }
    }
  }
}

} // namespace

std::vector<WeightedEvent> transition_distribution(const ExplorationState& s) {
  check_consistent(s);
  std::vector<WeightedEvent> out;
  const std::int64_t A = s.total_active();

  if (A > 0) {
    for (std::size_t t = 0; t < s.types.size(); ++t) {
      if (s.active[t] == 0) continue;
      const auto [i, j] = s.types[t];
      const auto rev = s.type_index({j, i});
      if (!rev) throw InconsistentState("no reverse type for " + s.types[t].to_string());
      const std::int64_t candidates = s.living[*rev] - (i == j ? 1 : 0);
      if (candidates <= 0) {
        throw InconsistentState("active clone of type " + s.types[t].to_string() + " has no candidate partner");
      }
      const double pick = static_cast<double>(s.active[t]) / static_cast<double>(A);
      const std::int64_t active_partners = i == j ? s.active[t] - 1 : s.active[*rev];
      if (active_partners > 0) {
        out.push_back({{EventKind::back_edge, t, 0},
                       pick * static_cast<double>(active_partners) / static_cast<double>(candidates)});
      }
      for (std::size_t e = 0; e < s.sleeping.size(); ++e) {
        const auto& c = s.sleeping[e];
        if (c.part != j || c.count == 0 || c.degree[i] == 0) continue;
        out.push_back({{EventKind::wake, t, e},
                       pick * static_cast<double>(c.degree[i] * c.count) / static_cast<double>(candidates)});
      }
    }
    return out;
  }

  const std::int64_t L = s.total_living();
  if (L == 0) return out;
  for (std::size_t e = 0; e < s.sleeping.size(); ++e) {
    const auto& c = s.sleeping[e];
    if (c.count == 0) continue;
    for (int j = 0; j < s.parts; ++j) {
      if (c.degree[j] == 0) continue;
      const auto t = *s.type_index({c.part, j});
      out.push_back({{EventKind::restart, t, e}, static_cast<double>(c.degree[j] * c.count) / static_cast<double>(L)});
    }
  }
  return out;
}

std::vector<std::int64_t> step_delta(const ExplorationState& s, const ExplorationEvent& ev) {
  std::vector<std::int64_t> z(s.types.size(), 0);
  auto type_at = [&](PartPair pr) {
    auto t = s.type_index(pr);
    if (!t) throw IllegalEvent("event touches untracked type " + pr.to_string());
    return *t;
  };
  auto vertex_class = [&]() -> const SleepingClass& {
    if (ev.vertex_class >= s.sleeping.size()) throw IllegalEvent("vertex class out of range");
    const auto& c = s.sleeping[ev.vertex_class];
    if (c.count == 0) throw IllegalEvent("no sleeping vertex of class " + c.degree.to_string());
    return c;
  };

  if (ev.kind == EventKind::isolated) {
    const auto& c = vertex_class();
    if (c.degree.total() != 0) throw IllegalEvent("isolated event for a vertex with clones");
    if (s.total_living() != 0) throw IllegalEvent("isolated event while clones are living");
    return z;
  }

  if (ev.type >= s.types.size()) throw IllegalEvent("type index out of range");
  const auto [i, j] = s.types[ev.type];

  switch (ev.kind) {
    case EventKind::back_edge: {
      if (s.active[ev.type] == 0) throw IllegalEvent("back-edge from a type with no active clone");
      const auto rev = type_at({j, i});
      if (i == j) {
        if (s.active[ev.type] < 2) throw IllegalEvent("same-type back-edge needs two active clones");
        z[ev.type] = -2;
      } else {
        if (s.active[rev] == 0) throw IllegalEvent("back-edge needs an active partner clone");
        z[ev.type] = -1;
        z[rev] = -1;
      }
      return z;
    }
    case EventKind::wake: {
      if (s.active[ev.type] == 0) throw IllegalEvent("wake from a type with no active clone");
      const auto& c = vertex_class();
      if (c.part != j || c.degree[i] == 0) {
        throw IllegalEvent("a " + s.types[ev.type].to_string() + " clone cannot reach a part-" +
                           std::to_string(c.part + 1) + " vertex of degree " + c.degree.to_string());
      }
      z[ev.type] -= 1;
      for (int m = 0; m < s.parts; ++m) {
        const int gained = c.degree[m] - (m == i ? 1 : 0);
        if (gained != 0) z[type_at({j, m})] += gained;
      }
      return z;
    }
    case EventKind::restart: {
      if (s.total_active() != 0) throw IllegalEvent("restart while clones are active");
      const auto& c = vertex_class();
      if (c.part != i || c.degree[j] == 0) throw IllegalEvent("restart clone type does not belong to the vertex");
      for (int m = 0; m < s.parts; ++m) {
        if (c.degree[m] != 0) z[type_at({i, m})] = c.degree[m];
      }
      return z;
    }
    case EventKind::isolated: break;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Process

ExplorationProcess::ExplorationProcess(const CloneGraph& graph)
    : graph_(&graph),
      partner_(graph.partners()),
      status_(graph.num_clones(), CloneStatus::sleeping),
      active_pos_(graph.num_clones(), npos),
      sleeping_list_(graph.num_clones()),
      sleeping_pos_(graph.num_clones()),
      component_of_(graph.num_vertices(), -1),
      state_(initial_state(graph.sequence())) {
  std::iota(sleeping_list_.begin(), sleeping_list_.end(), CloneId{0});
  std::iota(sleeping_pos_.begin(), sleeping_pos_.end(), std::uint32_t{0});
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    if (graph.degree_of(v).total() == 0) isolated_.push_back(v);
  }
}

bool ExplorationProcess::finished() const noexcept {
  return active_list_.empty() && sleeping_list_.empty() && next_isolated_ == isolated_.size();
}

void ExplorationProcess::make_active(CloneId c) {
  status_[c] = CloneStatus::active;
  active_pos_[c] = static_cast<std::uint32_t>(active_list_.size());
  active_list_.push_back(c);
  ++state_.active[graph_->type_of(c)];
}

void ExplorationProcess::remove_active(CloneId c) {
  const auto pos = active_pos_[c];
  const CloneId last = active_list_.back();
  active_list_[pos] = last;
  active_pos_[last] = pos;
  active_list_.pop_back();
  active_pos_[c] = npos;
  --state_.active[graph_->type_of(c)];
}

void ExplorationProcess::remove_sleeping(CloneId c) {
  const auto pos = sleeping_pos_[c];
  const CloneId last = sleeping_list_.back();
  sleeping_list_[pos] = last;
  sleeping_pos_[last] = pos;
  sleeping_list_.pop_back();
  sleeping_pos_[c] = npos;
}

void ExplorationProcess::wake_vertex(VertexId v, std::optional<CloneId> revealed) {
  --state_.sleeping[graph_->entry_of(v)].count;
  component_of_[v] = static_cast<std::int32_t>(components_ - 1);
  for (CloneId c : graph_->clones_of(v)) {
    remove_sleeping(c);
    if (revealed && c == *revealed) {
      status_[c] = CloneStatus::dead;
      --state_.living[graph_->type_of(c)];
    } else {
      make_active(c);
    }
  }
}

StepRecord ExplorationProcess::step(Rng& rng) {
  if (finished()) throw Error("exploration already finished");
  StepRecord rec;
  rec.step = state_.step;
  const auto before = state_.active;

  if (!active_list_.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, active_list_.size() - 1);
    const CloneId c = active_list_[pick(rng)];
    const CloneId d = partner_[c];
    rec.event.type = graph_->type_of(c);
    remove_active(c);
    status_[c] = CloneStatus::dead;
    --state_.living[graph_->type_of(c)];
    if (status_[d] == CloneStatus::active) {
      rec.event.kind = EventKind::back_edge;
      remove_active(d);
      status_[d] = CloneStatus::dead;
      --state_.living[graph_->type_of(d)];
    } else {
      const VertexId w = graph_->owner(d);
      rec.event.kind = EventKind::wake;
      rec.event.vertex_class = graph_->entry_of(w);
      wake_vertex(w, d);
    }
    ++case1_steps_;
  } else if (!sleeping_list_.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, sleeping_list_.size() - 1);
    const CloneId c = sleeping_list_[pick(rng)];
    const VertexId w = graph_->owner(c);
    rec.event = {EventKind::restart, graph_->type_of(c), graph_->entry_of(w)};
    ++components_;
    wake_vertex(w, std::nullopt);
    ++start_steps_;
  } else {
    const VertexId w = isolated_[next_isolated_++];
    rec.event = {EventKind::isolated, 0, graph_->entry_of(w)};
    ++components_;
    wake_vertex(w, std::nullopt);
    ++start_steps_;
  }

  rec.delta.resize(before.size());
  for (std::size_t t = 0; t < before.size(); ++t) rec.delta[t] = state_.active[t] - before[t];
  ++state_.step;
  return rec;
}

ExplorationState ExplorationProcess::recount() const {
  const auto& g = *graph_;
  ExplorationState s;
  s.parts = state_.parts;
  s.types = state_.types;
  s.step = state_.step;
  s.active.assign(s.types.size(), 0);
  s.living.assign(s.types.size(), 0);
  for (CloneId c = 0; c < status_.size(); ++c) {
    if (status_[c] == CloneStatus::active) ++s.active[g.type_of(c)];
    if (status_[c] != CloneStatus::dead) ++s.living[g.type_of(c)];
  }
  for (const auto& e : g.sequence().entries()) s.sleeping.push_back({e.part, e.degree, 0});
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (component_of_[v] < 0) ++s.sleeping[g.entry_of(v)].count;
  }
  return s;
}

void ExplorationProcess::rematch_living(Rng& rng) {
  const auto& g = *graph_;
  const auto& types = g.types();
  std::vector<std::vector<CloneId>> living(types.size());
  for (CloneId c = 0; c < status_.size(); ++c) {
    if (status_[c] != CloneStatus::dead) living[g.type_of(c)].push_back(c);
  }
  for (std::size_t t = 0; t < types.size(); ++t) {
    const auto [i, j] = types[t];
    if (i < j) {
      const auto rev = static_cast<std::size_t>(
          std::lower_bound(types.begin(), types.end(), types[t].reversed()) - types.begin());
      auto& theirs = living[rev];
      std::shuffle(theirs.begin(), theirs.end(), rng);
      for (std::size_t k = 0; k < living[t].size(); ++k) {
        partner_[living[t][k]] = theirs[k];
        partner_[theirs[k]] = living[t][k];
      }
    } else if (i == j) {
      auto& pool = living[t];
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t k = 0; k + 1 < pool.size(); k += 2) {
        partner_[pool[k]] = pool[k + 1];
        partner_[pool[k + 1]] = pool[k];
      }
    }
  }
}

ExplorationResult explore_components(const CloneGraph& graph, Rng& rng, const ExplorationOptions& options) {
  ExplorationProcess process(graph);
  ExplorationResult result;
  while (!process.finished()) {
    ExplorationState before;
    if (options.verify) before = process.state();
    StepRecord rec = process.step(rng);
    if (options.verify) {
      if (process.recount() != process.state()) {
        throw InconsistentState("exploration counters drifted at step " + std::to_string(rec.step));
      }
      if (step_delta(before, rec.event) != rec.delta) {
        throw InconsistentState("applied change differs from step_delta at step " + std::to_string(rec.step));
      }
    }
    if (options.record_log && options.log_capacity > 0) {
      if (result.log.size() == options.log_capacity) result.log.pop_front();
      result.log.push_back(std::move(rec));
    }
  }
  result.case1_steps = process.case1_steps();
  result.start_steps = process.start_steps();

  std::vector<std::vector<VertexId>> components(process.components_started());
  const auto& comp = process.component_of();
  for (VertexId v = 0; v < graph.num_vertices(); ++v) components[static_cast<std::size_t>(comp[v])].push_back(v);
  result.census = make_census(std::move(components), graph);
  return result;
}

} // namespace multigiant
