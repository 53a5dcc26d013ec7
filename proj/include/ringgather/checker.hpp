// Explicit-state exploration of every asynchronous interleaving, and the
// property checks run on the resulting graph or on individual traces.

#pragma once

#include "ringgather/executor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ringgather {

enum class Reduction {
  None,         // concrete states, robot ids kept
  Symmetric,    // robot ids forgotten, plus ring symmetries fixing the start
};

struct ExploreOptions
{
  std::size_t state_budget = 5'000'000;
  Reduction reduction = Reduction::Symmetric;
  int workers = 1;
};

class BudgetExceeded : public RingError
{
 public:
  BudgetExceeded(std::size_t states, std::size_t edges)
      : RingError("state budget exceeded after " + std::to_string(states) + " states"),
        states_(states), edges_(edges)
  {
  }
  std::size_t states() const { return states_; }
  std::size_t edges() const { return edges_; }

 private:
  std::size_t states_;
  std::size_t edges_;
};

struct GraphEdge
{
  std::uint32_t to = 0;
  std::uint8_t robot = 0;  // robot id in the source representative
  Step step = Step::Look;
  std::uint8_t rule = kNoRule;
  std::int8_t direction = 0;
};

// Per-vertex facts derived from the representative state.
struct VertexInfo
{
  std::int8_t d = -1;
  std::int8_t ow = 0;
  std::uint8_t border_count = 0;
  bool gathered = false;
  bool stably_gathered = false;
  bool connected = true;
  bool inside_arc = true;
};

class StateGraph
{
 public:
  std::size_t size() const { return info_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Algorithm& algorithm() const { return alg_; }
  const SystemState& initial() const { return initial_; }
  Reduction reduction() const { return reduction_; }
  const std::optional<Arc>& initial_arc() const { return arc_; }

  SystemState state(std::uint32_t v) const;
  const VertexInfo& info(std::uint32_t v) const { return info_[v]; }
  std::span<const GraphEdge> out(std::uint32_t v) const
  {
    return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
  }

  // Vertex of a concrete state, if it was reached.
  std::optional<std::uint32_t> find(const SystemState& s) const;

  // Shortest path of vertices from the initial vertex (BFS tree).
  std::vector<std::uint32_t> path_from_initial(std::uint32_t v) const;

  // Concrete, replayable trace following a vertex path that starts at the
  // initial vertex.
  Trace concretize(const std::vector<std::uint32_t>& path) const;

 private:
  friend StateGraph explore(const SystemState&, const Algorithm&, const ExploreOptions&);

  explicit StateGraph(Algorithm alg, SystemState initial)
      : alg_(std::move(alg)), initial_(std::move(initial))
  {
  }

  std::vector<std::uint32_t> key(const SystemState& s) const;

  Algorithm alg_;
  SystemState initial_;
  Reduction reduction_ = Reduction::Symmetric;
  std::vector<RingTransform> group_;
  std::optional<Arc> arc_;
  std::size_t width_ = 0;
  std::vector<std::uint32_t> words_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> offsets_;
  std::vector<GraphEdge> edges_;
  std::vector<VertexInfo> info_;
};

// Throws BudgetExceeded when more than options.state_budget states are found.
StateGraph explore(const SystemState& initial, const Algorithm& alg, const ExploreOptions& options = {});

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct PropertyResult
{
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::size_t violations = 0;
  std::string detail;
  std::optional<Trace> counterexample;
  std::optional<std::size_t> cycle_start;  // lasso counterexamples: index where the cycle begins
};

struct CheckReport
{
  std::string instance;
  std::string algorithm;
  std::size_t states = 0;
  std::size_t edges = 0;
  double wall_ms = 0;
  std::vector<PropertyResult> properties;

  bool passed() const;
  bool inconclusive() const;
  const PropertyResult* find(const std::string& name) const;
  void merge(CheckReport other);
};

// Cautiousness, border count, connectivity, D and (Algorithm 2) #O_W
// monotonicity on every reachable state and edge.
CheckReport check_safety(const StateGraph& graph);

// Every state can reach stable gathering, stable gathering is closed, and no
// cycle of non-gathered states lets every robot act.
CheckReport check_liveness(const StateGraph& graph, std::size_t lift_budget = 2'000'000);

// Border color parity on every move edge of the graph. Algorithm 1: a robot
// entering the node at arc position h is Blue iff h is odd. Algorithm 2:
// a robot absorbing White robots is Blue iff the number of initially occupied
// nodes it has passed is odd.
CheckReport check_parity(const StateGraph& graph);

// D (Algorithm 1) or #O_W (Algorithm 2) never increases before gathering,
// drops by 1 or 2 at a time, and hits 2 (resp. <= 1) before stable gathering.
CheckReport check_megacycles(const StateGraph& graph);

// No robot on a border node holding White and one other border color decides
// to move while White robots are still there.
CheckReport check_lemma2(const StateGraph& graph);

// Trace-level variants. Robots are followed individually: original border
// robots belong to their frontier and White robots join the frontier whose
// color they adopt.
CheckReport check_parity(const Trace& trace, const Algorithm& alg);
CheckReport check_megacycles(const Trace& trace, const Algorithm& alg);

struct CheckSelection
{
  bool safety = true;
  bool liveness = true;
  bool parity = true;
  bool megacycles = true;
  bool lemma2 = true;
};

// Explores and runs the selected checks; a blown budget yields Inconclusive
// verdicts instead of an exception.
CheckReport check_instance(const SystemState& initial, const Algorithm& alg, const ExploreOptions& options,
                           const CheckSelection& selection = {});

// Drives the symmetric adversary until a (state, cursor) pair recurs.
// Throws RingError if the configuration is not edge-view-symmetric.
CheckReport demo_symmetric(const Configuration& config, const Algorithm& alg, std::size_t bound);

// Two clusters separated on both sides by holes wider than phi. Throws
// RingError when the configuration is not of that shape.
CheckReport demo_multiborder(const Configuration& config, const Algorithm& alg, const ExploreOptions& options = {});

}  // namespace ringgather
