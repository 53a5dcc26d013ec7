// Asynchronous Look-Compute-Move execution and the scheduler zoo.

#pragma once

#include "ringgather/ring_model.hpp"
#include "ringgather/rules.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace ringgather {

enum class Step : std::uint8_t { Look = 0, Compute = 1, Move = 2 };

const char* step_name(Step s);
Step step_from_name(const std::string& name);

// Ready -> Look -> Observed -> Compute -> Computed -> Move -> Ready.
// The decision is fixed at Look time and never revised, which is what makes a
// robot outdated once others have acted since its snapshot.
enum class PhaseKind : std::uint8_t { Ready = 0, Observed = 1, Computed = 2 };

struct Phase
{
  PhaseKind kind = PhaseKind::Ready;
  Decision decision;

  Step expected_step() const { return static_cast<Step>(kind); }
  bool pending_move() const { return kind != PhaseKind::Ready && decision.moves(); }
  friend bool operator==(const Phase&, const Phase&) = default;
};

struct SystemState
{
  Configuration config;
  std::vector<Phase> phases;  // parallel to config.robots()

  static SystemState initial(Configuration config);

  // Gathered and no robot holds a decision that would move it or change its
  // light. Closed under every action.
  bool stably_gathered() const;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct Action
{
  int robot = 0;  // robot id
  Step step = Step::Look;

  friend bool operator==(const Action&, const Action&) = default;
};

using Batch = std::vector<Action>;

// Applies one phase step of one robot. Throws RingError if the step does not
// match the robot's phase. apply_look() installs a given decision instead of
// the computed one (explorers branching on an ambiguous direction).
SystemState apply(const SystemState& state, const Algorithm& alg, const Action& action,
                  AmbiguityPolicy policy = AmbiguityPolicy::PreferClockwise);
SystemState apply_look(const SystemState& state, std::size_t index, const Decision& decision);

// Every action enabled in `state`, with the resulting states. An ambiguous
// Look yields one successor per direction.
struct Successor
{
  Action action;
  Decision decision;
  SystemState state;
};
std::vector<Successor> successors(const SystemState& state, const Algorithm& alg);

// Occupied non-border nodes hosting a White robot (0 once gathered).
int occupied_white_count(const Configuration& config);

// Border distance, or -1 when the configuration has neither two borders nor a
// single occupied node.
int border_distance(const Configuration& config);

// ---------------------------------------------------------------------------
// Canonical states

// Canonical form under the given ring transforms and every robot-id
// permutation. Phase payloads travel with their robots; move directions flip
// under reflection.
CanonicalForm canonicalize(const SystemState& state, std::span<const RingTransform> group);
CanonicalForm canonicalize(const SystemState& state);
SystemState from_canonical_state(const CanonicalForm& form);

// Exact key: one word per robot in robot order, robot id in the top bits.
std::vector<std::uint32_t> concrete_key(const SystemState& state);
SystemState from_concrete_key(int n, int phi, std::span<const std::uint32_t> words);

// Transforms g with g(state) == state up to robot ids.
std::vector<RingTransform> stabilizer(const SystemState& state);

std::uint64_t digest(const Configuration& config);
std::uint64_t digest(const SystemState& state);

// ---------------------------------------------------------------------------
// Traces

struct TraceStep
{
  Action action;
  std::uint8_t rule = kNoRule;
  int direction = 0;
  std::uint64_t digest = 0;  // post-action configuration
  Configuration config;      // post-action configuration
  std::vector<int> borders;
  int d = -1;
  int ow = 0;
};

struct Trace
{
  SystemState initial;
  std::string algorithm;
  std::vector<TraceStep> steps;
  std::string outcome;  // gathered | step-limit | recurrence | scheduler-end

  const SystemState& initial_state() const { return initial; }
  std::vector<std::string> rule_labels(const Algorithm& alg, bool looks_only = true) const;
};

// Appends `action` applied to `state` to `trace` and returns the new state.
SystemState record(Trace& trace, const SystemState& state, const Algorithm& alg, const Action& action,
                   AmbiguityPolicy policy = AmbiguityPolicy::PreferClockwise);
SystemState record_look(Trace& trace, const SystemState& state, const Action& action, const Decision& d);

// Replays every action from the initial state; throws RingError on the first
// digest mismatch. Returns the final state.
SystemState replay(const Trace& trace, const Algorithm& alg,
                   AmbiguityPolicy policy = AmbiguityPolicy::PreferClockwise);

// ---------------------------------------------------------------------------
// Schedulers

class Scheduler
{
 public:
  virtual ~Scheduler() = default;
  // Next batch, or nullopt when the scheduler has nothing more to say.
  virtual std::optional<Batch> next(const SystemState& state, const Algorithm& alg) = 0;
  // Why next() returned nullopt: "scheduler-end" or "recurrence".
  virtual std::string stop_reason() const { return "scheduler-end"; }
};

std::unique_ptr<Scheduler> round_robin();
// Uniform over enabled actions, but every robot acts at least once in any
// window of (3 * R * window_factor) / 5 consecutive steps, so it completes a
// full Look-Compute-Move cycle within every window of 3 * R * window_factor.
std::unique_ptr<Scheduler> random_fair(std::uint64_t seed, int window_factor = 2);
std::unique_ptr<Scheduler> synchronous();
std::unique_ptr<Scheduler> scripted(std::vector<Action> script);

class SymmetricAdversary : public Scheduler
{
 public:
  std::optional<Batch> next(const SystemState& state, const Algorithm& alg) override;
  std::string stop_reason() const override { return recurred_ ? "recurrence" : "scheduler-end"; }

  int mirror_edge() const { return edge_; }
  // Number of batches emitted before the first occurrence of the recurring
  // (state, cursor) pair; meaningful once stop_reason() == "recurrence".
  std::size_t loop_start() const { return loop_start_; }
  std::size_t batches() const { return batches_; }

 private:
  int edge_ = -1;
  int cursor_k_ = -1;
  int cursor_color_ = -1;
  bool recurred_ = false;
  std::size_t batches_ = 0;
  std::size_t loop_start_ = 0;
  std::vector<std::pair<std::string, std::size_t>> seen_;
};

std::unique_ptr<SymmetricAdversary> symmetric_adversary();

// Runs until stably gathered, `max_steps` actions, or the scheduler stops.
Trace run(const SystemState& state, const Algorithm& alg, Scheduler& scheduler, std::size_t max_steps,
          AmbiguityPolicy policy = AmbiguityPolicy::PreferClockwise);

}  // namespace ringgather
