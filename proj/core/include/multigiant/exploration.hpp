#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "multigiant/configuration.hpp"
#include "multigiant/degree_model.hpp"
#include "multigiant/random.hpp"

namespace multigiant {

/// Component partition of a graph in canonical form: each component sorted
/// ascending, components ordered by size (descending) then smallest vertex.
/// Two censuses of the same graph compare equal iff the partitions agree.
struct ComponentCensus {
  std::size_t n = 0;
  std::vector<std::vector<VertexId>> components;
  /// Vertices of the largest component in each part.
  std::vector<std::int64_t> largest_per_part;

  std::size_t num_components() const noexcept { return components.size(); }
  std::size_t largest_size() const noexcept { return components.empty() ? 0 : components[0].size(); }
  std::size_t second_size() const noexcept { return components.size() < 2 ? 0 : components[1].size(); }
  double largest_fraction() const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(largest_size()) / static_cast<double>(n);
  }

  bool operator==(const ComponentCensus& other) const {
    return n == other.n && components == other.components;
  }
};

ComponentCensus make_census(std::vector<std::vector<VertexId>> components, const CloneGraph& g);

enum class CloneStatus : std::uint8_t { sleeping, active, dead };

enum class EventKind : std::uint8_t {
  back_edge,  ///< partner of the killed active clone was active
  wake,       ///< partner was sleeping; its vertex wakes
  restart,    ///< no active clones; a sleeping clone's vertex wakes
  isolated,   ///< no living clones; a degree-0 vertex is visited
};

struct ExplorationEvent {
  EventKind kind = EventKind::restart;
  /// back_edge / wake: type of the active clone that was killed.
  /// restart: type of the sleeping clone that was picked.
  std::size_t type = 0;
  /// wake / restart / isolated: index into ExplorationState::sleeping of
  /// the woken vertex's class.
  std::size_t vertex_class = 0;

  bool operator==(const ExplorationEvent&) const = default;
};

struct SleepingClass {
  int part = 0;
  DegreeVector degree;
  std::int64_t count = 0;  // N_i^d

  bool operator==(const SleepingClass&) const = default;
};

/// Counters of the exploration process at one step.
struct ExplorationState {
  int parts = 0;
  std::vector<PartPair> types;
  std::vector<std::int64_t> active;  // A_i^j
  std::vector<std::int64_t> living;  // L_i^j
  std::vector<SleepingClass> sleeping;
  std::int64_t step = 0;

  std::int64_t total_active() const;         // A
  std::int64_t total_living() const;         // L
  std::int64_t living_in_part(int i) const;  // L_i
  std::int64_t sleeping_vertices() const;    // N_S
  std::optional<std::size_t> type_index(PartPair pair) const;

  bool operator==(const ExplorationState&) const = default;
};

/// Initial counters for a sequence: nothing active, every clone living,
/// N_i^d(0) = n_i^d.
ExplorationState initial_state(const DegreeSequence& seq);

struct WeightedEvent {
  ExplorationEvent event;
  double probability = 0.0;
};

/// Exact law of the next event.
///  A > 0:  P(E_i^j, back-edge) = (A_i^j/A) A_j^i/L_j^i        (i != j)
///                              = (A_i^i/A) (A_i^i-1)/(L_i^i-1)   (i == j)
///          P(E_i^j, wake d)    = (A_i^j/A) d_i N_j^d/(L_j^i - [i == j])
///  A = 0:  P(E_i^j, restart d) = d_j N_i^d / L
/// Empty when nothing is living. Throws InconsistentState when the counters
/// cannot come from a real exploration.
std::vector<WeightedEvent> transition_distribution(const ExplorationState& state);

/// Change in the active counters A caused by `event`, indexed like
/// state.types. Throws IllegalEvent if the event cannot occur in `state`.
std::vector<std::int64_t> step_delta(const ExplorationState& state, const ExplorationEvent& event);

struct StepRecord {
  std::int64_t step = 0;
  ExplorationEvent event;
  std::vector<std::int64_t> delta;
};

/// Clone-level exploration over a sampled graph. Partners are those of the
/// graph's (uniform) matching, revealed when a clone is killed.
class ExplorationProcess {
public:
  explicit ExplorationProcess(const CloneGraph& graph);

  bool finished() const noexcept;
  const ExplorationState& state() const noexcept { return state_; }
  /// Counters recomputed from clone statuses.
  ExplorationState recount() const;

  CloneStatus status(CloneId c) const { return status_[c]; }
  std::int64_t case1_steps() const noexcept { return case1_steps_; }
  std::int64_t start_steps() const noexcept { return start_steps_; }

  StepRecord step(Rng& rng);

  /// Redraw a uniform matching among the living clones. Given the statuses,
  /// the hidden partners of living clones are uniform, so this leaves the
  /// law of the future unchanged.
  void rematch_living(Rng& rng);

  /// Component id per vertex, -1 while sleeping.
  const std::vector<std::int32_t>& component_of() const noexcept { return component_of_; }
  std::size_t components_started() const noexcept { return components_; }

private:
  void make_active(CloneId c);
  void remove_active(CloneId c);
  void remove_sleeping(CloneId c);
  void wake_vertex(VertexId v, std::optional<CloneId> revealed);

  static constexpr std::uint32_t npos = UINT32_MAX;

  const CloneGraph* graph_;
  std::vector<CloneId> partner_;
  std::vector<CloneStatus> status_;
  std::vector<CloneId> active_list_;
  std::vector<std::uint32_t> active_pos_;
  std::vector<CloneId> sleeping_list_;
  std::vector<std::uint32_t> sleeping_pos_;
  std::vector<VertexId> isolated_;
  std::size_t next_isolated_ = 0;
  std::vector<std::int32_t> component_of_;
  std::size_t components_ = 0;
  ExplorationState state_;
  std::int64_t case1_steps_ = 0;
  std::int64_t start_steps_ = 0;
};

struct ExplorationOptions {
  bool record_log = false;
  /// Oldest records are dropped beyond this many.
  std::size_t log_capacity = 1'000'000;
  /// Recount every counter after each step and check the applied delta
  /// against step_delta(); O(#clones) per step.
  bool verify = false;
};

struct ExplorationResult {
  ComponentCensus census;
  std::deque<StepRecord> log;
  std::int64_t case1_steps = 0;
  std::int64_t start_steps = 0;
};

/// Run the exploration to completion. Throws InconsistentState if
/// verification is on and a counter drifts.
ExplorationResult explore_components(const CloneGraph& graph, Rng& rng, const ExplorationOptions& options = {});

/// Independent oracle: disjoint-set union over the edge list.
ComponentCensus union_find_components(const CloneGraph& graph);

} // namespace multigiant
