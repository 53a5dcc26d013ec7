#include "ringgather/executor.hpp"

#include <algorithm>
#include <numeric>

namespace ringgather {

const char* step_name(Step s)
{
  switch (s) {
    case Step::Look: return "look";
    case Step::Compute: return "compute";
    case Step::Move: return "move";
  }
  return "?";
}

Step step_from_name(const std::string& name)
{
  if (name == "look" || name == "Look" || name == "L")
    return Step::Look;
  if (name == "compute" || name == "Compute" || name == "C")
    return Step::Compute;
  if (name == "move" || name == "Move" || name == "M")
    return Step::Move;
  throw RingError("unknown phase '" + name + "'");
}

SystemState SystemState::initial(Configuration config)
{
  std::vector<Phase> phases(config.robot_count());
  return SystemState{std::move(config), std::move(phases)};
}

bool SystemState::stably_gathered() const
{
  if (!is_gathered(config))
    return false;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const Phase& p = phases[i];
    if (p.decision.moves())
      return false;
    if (p.kind == PhaseKind::Observed && p.decision.new_color != config.robots()[i].color)
      return false;
  }
  return true;
}

namespace {

void check_step(const SystemState& state, std::size_t index, Step step)
{
  Step expected = state.phases[index].expected_step();
  if (expected != step)
    throw RingError("robot " + std::to_string(state.config.robots()[index].id) + " expects " +
                    step_name(expected) + ", got " + step_name(step));
}

}  // namespace

SystemState apply_look(const SystemState& state, std::size_t index, const Decision& decision)
{
  check_step(state, index, Step::Look);
  SystemState next = state;
  next.phases[index] = Phase{PhaseKind::Observed, decision};
  return next;
}

SystemState apply(const SystemState& state, const Algorithm& alg, const Action& action, AmbiguityPolicy policy)
{
  const std::size_t index = state.config.index_of(action.robot);
  check_step(state, index, action.step);
  const Robot& r = state.config.robots()[index];
  switch (action.step) {
    case Step::Look:
      return apply_look(state, index, decide(alg, state.config, action.robot, policy));
    case Step::Compute: {
      SystemState next = state;
      const Decision& d = state.phases[index].decision;
      next.config = state.config.with_robot(index, r.node, d.new_color);
      next.phases[index].kind = PhaseKind::Computed;
      return next;
    }
    case Step::Move: {
      SystemState next = state;
      const Decision& d = state.phases[index].decision;
      next.config = state.config.with_robot(index, r.node + d.direction, r.color);
      next.phases[index] = Phase{};
      return next;
    }
  }
  return state;
}

std::vector<Successor> successors(const SystemState& state, const Algorithm& alg)
{
  std::vector<Successor> out;
  out.reserve(state.phases.size());
  for (std::size_t i = 0; i < state.phases.size(); ++i) {
    const int id = state.config.robots()[i].id;
    const Step step = state.phases[i].expected_step();
    if (step == Step::Look) {
      Decision d = decide(alg, state.config, id, AmbiguityPolicy::PreferClockwise);
      out.push_back({Action{id, step}, d, apply_look(state, i, d)});
      if (d.ambiguous_direction) {
        d.direction = -d.direction;
        out.push_back({Action{id, step}, d, apply_look(state, i, d)});
      }
    } else {
      out.push_back({Action{id, step}, state.phases[i].decision, apply(state, alg, Action{id, step})});
    }
  }
  return out;
}

int occupied_white_count(const Configuration& config)
{
  if (is_gathered(config))
    return 0;
  auto b = borders(config);
  auto sets = config.node_colors();
  int count = 0;
  for (int u : config.occupied_nodes())
    if (sets[static_cast<std::size_t>(u)].contains(Color::White) && std::find(b.begin(), b.end(), u) == b.end())
      ++count;
  return count;
}

int border_distance(const Configuration& config)
{
  try {
    return metrics(config).d;
  } catch (const RingError&) {
    return -1;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t encode_robot(const Robot& r, const Phase& p, const RingTransform& t, int n)
{
  std::uint32_t w = static_cast<std::uint32_t>(t.apply(r.node, n)) << 16;
  w |= static_cast<std::uint32_t>(r.color) << 14;
  w |= static_cast<std::uint32_t>(p.kind) << 12;
  if (p.kind != PhaseKind::Ready) {
    w |= static_cast<std::uint32_t>(p.decision.rule) << 4;
    w |= static_cast<std::uint32_t>(p.decision.new_color) << 2;
    int dir = t.apply_step(p.decision.direction);
    w |= dir == 0 ? 0u : (dir > 0 ? 1u : 2u);
    if (p.decision.ambiguous_direction)
      w |= 1u << 24;
  } else {
    w |= static_cast<std::uint32_t>(kNoRule) << 4;
  }
  return w;
}

std::vector<std::uint32_t> words_under(const SystemState& state, const RingTransform& t)
{
  std::vector<std::uint32_t> words(state.phases.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    words[i] = encode_robot(state.config.robots()[i], state.phases[i], t, state.config.n());
  std::sort(words.begin(), words.end());
  return words;
}

}  // namespace

CanonicalForm canonicalize(const SystemState& state, std::span<const RingTransform> group)
{
  CanonicalForm best{state.config.n(), state.config.phi(), {}};
  std::vector<std::uint32_t> words(state.phases.size());
  const int n = state.config.n();
  bool have = false;
  for (const auto& t : group) {
    for (std::size_t i = 0; i < words.size(); ++i)
      words[i] = encode_robot(state.config.robots()[i], state.phases[i], t, n);
    std::sort(words.begin(), words.end());
    if (!have || words < best.words) {
      best.words = words;
      have = true;
    }
  }
  if (!have)
    best.words = words_under(state, RingTransform{});
  return best;
}

CanonicalForm canonicalize(const SystemState& state)
{
  auto group = dihedral_group(state.config.n());
  return canonicalize(state, group);
}

SystemState from_canonical_state(const CanonicalForm& form)
{
  std::vector<Robot> robots;
  std::vector<Phase> phases;
  int id = 0;
  for (auto w : form.words) {
    robots.push_back(Robot{id++, static_cast<int>((w >> 16) & 0xff), static_cast<Color>((w >> 14) & 3)});
    Phase p;
    p.kind = static_cast<PhaseKind>((w >> 12) & 3);
    if (p.kind != PhaseKind::Ready) {
      p.decision.rule = static_cast<std::uint8_t>((w >> 4) & 0xff);
      p.decision.new_color = static_cast<Color>((w >> 2) & 3);
      unsigned dir = w & 3;
      p.decision.direction = dir == 0 ? 0 : (dir == 1 ? 1 : -1);
      p.decision.ambiguous_direction = ((w >> 24) & 1) != 0;
    }
    phases.push_back(p);
  }
  return SystemState{Configuration(form.n, form.phi, std::move(robots)), std::move(phases)};
}

std::vector<std::uint32_t> concrete_key(const SystemState& state)
{
  std::vector<std::uint32_t> words(state.phases.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Robot& r = state.config.robots()[i];
    if (r.id < 0 || r.id > 127)
      throw RingError("robot ids above 127 are not supported in state keys");
    words[i] = static_cast<std::uint32_t>(r.id) << 25 | encode_robot(r, state.phases[i], RingTransform{}, state.config.n());
  }
  return words;
}

SystemState from_concrete_key(int n, int phi, std::span<const std::uint32_t> words)
{
  CanonicalForm form{n, phi, std::vector<std::uint32_t>(words.begin(), words.end())};
  for (auto& w : form.words)
    w &= (1u << 25) - 1;
  SystemState s = from_canonical_state(form);
  std::vector<Robot> robots = s.config.robots();
  for (std::size_t i = 0; i < robots.size(); ++i)
    robots[i].id = static_cast<int>(words[i] >> 25);
  s.config = Configuration(n, phi, std::move(robots));
  return s;
}

std::vector<RingTransform> stabilizer(const SystemState& state)
{
  auto base = words_under(state, RingTransform{});
  std::vector<RingTransform> out;
  for (const auto& t : dihedral_group(state.config.n()))
    if (words_under(state, t) == base)
      out.push_back(t);
  return out;
}

std::uint64_t digest(const Configuration& config)
{
  return fnv1a(std::to_string(config.n()) + ":" + config.pattern());
}

std::uint64_t digest(const SystemState& state)
{
  std::string bytes = std::to_string(state.config.n()) + ":";
  for (std::size_t i = 0; i < state.phases.size(); ++i) {
    const auto& r = state.config.robots()[i];
    bytes += std::to_string(r.id) + "@" + std::to_string(encode_robot(r, state.phases[i], RingTransform{}, state.config.n())) + ";";
  }
  return fnv1a(bytes);
}

// ---------------------------------------------------------------------------
// Traces

std::vector<std::string> Trace::rule_labels(const Algorithm& alg, bool looks_only) const
{
  std::vector<std::string> out;
  for (const auto& s : steps)
    if (!looks_only || s.action.step == Step::Look)
      out.push_back(alg.label(s.rule));
  return out;
}

namespace {

void annotate_and_push(Trace& trace, const SystemState& next, const Action& action, const Decision& d)
{
  TraceStep s{action, d.rule, d.direction, digest(next.config), next.config, borders(next.config),
              border_distance(next.config), occupied_white_count(next.config)};
  trace.steps.push_back(std::move(s));
}

}  // namespace

SystemState record(Trace& trace, const SystemState& state, const Algorithm& alg, const Action& action,
                   AmbiguityPolicy policy)
{
  SystemState next = apply(state, alg, action, policy);
  const std::size_t index = next.config.index_of(action.robot);
  const Decision& d = action.step == Step::Move ? state.phases[index].decision : next.phases[index].decision;
  annotate_and_push(trace, next, action, d);
  return next;
}

SystemState record_look(Trace& trace, const SystemState& state, const Action& action, const Decision& d)
{
  SystemState next = apply_look(state, state.config.index_of(action.robot), d);
  annotate_and_push(trace, next, action, d);
  return next;
}

SystemState replay(const Trace& trace, const Algorithm& alg, AmbiguityPolicy policy)
{
  SystemState state = trace.initial;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    if (s.action.step == Step::Look) {
      Decision d = decide(alg, state.config, s.action.robot, policy);
      if (d.ambiguous_direction && s.direction != 0)
        d.direction = s.direction;
      state = apply_look(state, state.config.index_of(s.action.robot), d);
    } else {
      state = apply(state, alg, s.action, policy);
    }
    if (digest(state.config) != s.digest)
      throw RingError("trace does not replay: digest mismatch at step " + std::to_string(i));
  }
  return state;
}

// ---------------------------------------------------------------------------
// Schedulers

namespace {

class RoundRobin : public Scheduler
{
 public:
  std::optional<Batch> next(const SystemState& state, const Algorithm&) override
  {
    const std::size_t r = state.phases.size();
    cursor_ %= r;
    Step step = state.phases[cursor_].expected_step();
    Action a{state.config.robots()[cursor_].id, step};
    if (step == Step::Move)
      ++cursor_;
    return Batch{a};
  }

 private:
  std::size_t cursor_ = 0;
};

class RandomFair : public Scheduler
{
 public:
  RandomFair(std::uint64_t seed, int window_factor) : rng_(seed), window_factor_(std::max(window_factor, 2)) {}

  std::optional<Batch> next(const SystemState& state, const Algorithm&) override
  {
    const std::size_t r = state.phases.size();
    if (age_.size() != r)
      age_.assign(r, 0);
    const std::size_t window = 3 * r * static_cast<std::size_t>(window_factor_);
    const std::size_t bound = std::max<std::size_t>(window / 5, r);
    // A robot past the threshold waits at most r-1 more steps behind older
    // ones, so no robot goes `bound` steps without acting.
    const std::size_t threshold = bound - r;
    std::size_t pick = 0;
    for (std::size_t i = 1; i < r; ++i)
      if (age_[i] > age_[pick])
        pick = i;
    if (age_[pick] < threshold) {
      std::uniform_int_distribution<std::size_t> dist(0, r - 1);
      pick = dist(rng_);
    }
    for (std::size_t i = 0; i < r; ++i)
      age_[i] = i == pick ? 0 : age_[i] + 1;
    return Batch{Action{state.config.robots()[pick].id, state.phases[pick].expected_step()}};
  }

 private:
  std::mt19937_64 rng_;
  int window_factor_;
  std::vector<std::size_t> age_;
};

class Synchronous : public Scheduler
{
 public:
  std::optional<Batch> next(const SystemState& state, const Algorithm&) override
  {
    PhaseKind least = PhaseKind::Computed;
    for (const auto& p : state.phases)
      least = std::min(least, p.kind);
    Batch b;
    for (std::size_t i = 0; i < state.phases.size(); ++i)
      if (state.phases[i].kind == least)
        b.push_back(Action{state.config.robots()[i].id, state.phases[i].expected_step()});
    return b;
  }
};

class Scripted : public Scheduler
{
 public:
  explicit Scripted(std::vector<Action> script) : script_(std::move(script)) {}

  std::optional<Batch> next(const SystemState&, const Algorithm&) override
  {
    if (pos_ >= script_.size())
      return std::nullopt;
    return Batch{script_[pos_++]};
  }

 private:
  std::vector<Action> script_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Scheduler> round_robin() { return std::make_unique<RoundRobin>(); }
std::unique_ptr<Scheduler> random_fair(std::uint64_t seed, int window_factor)
{
  return std::make_unique<RandomFair>(seed, window_factor);
}
std::unique_ptr<Scheduler> synchronous() { return std::make_unique<Synchronous>(); }
std::unique_ptr<Scheduler> scripted(std::vector<Action> script)
{
  return std::make_unique<Scripted>(std::move(script));
}
std::unique_ptr<SymmetricAdversary> symmetric_adversary() { return std::make_unique<SymmetricAdversary>(); }

std::optional<Batch> SymmetricAdversary::next(const SystemState& state, const Algorithm&)
{
  for (const auto& p : state.phases)
    if (p.kind != PhaseKind::Ready)
      throw RingError("symmetric adversary expects every robot between cycles");
  const Configuration& c = state.config;
  auto edges = symmetric_edges(c);
  if (edges.empty())
    throw RingError("configuration is not edge-view-symmetric");
  if (edge_ < 0)
    edge_ = edges.front();
  else if (std::find(edges.begin(), edges.end(), edge_) == edges.end())
    throw RingError("symmetry about the chosen edge was lost");

  std::string key = c.pattern() + "#" + std::to_string(cursor_k_) + "/" + std::to_string(cursor_color_);
  for (const auto& [seen, at] : seen_) {
    if (seen == key) {
      recurred_ = true;
      loop_start_ = at;
      return std::nullopt;
    }
  }
  seen_.emplace_back(key, batches_);

  // Groups (k, color): robots of that color on node edge-k and on its mirror
  // node edge+k+1, visited in lexicographic order after the cursor.
  const int n = c.n();
  const int half = (n + 1) / 2;
  std::vector<std::pair<int, int>> groups;
  for (int k = 0; k < half; ++k) {
    ColorSet s = c.colors_at(edge_ - k);
    for (int col = 0; col < kColorCount; ++col)
      if (s.contains(static_cast<Color>(col)))
        groups.emplace_back(k, col);
  }
  auto after = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
    return std::make_pair(g.first, g.second) > std::make_pair(cursor_k_, cursor_color_);
  });
  const auto& g = after == groups.end() ? groups.front() : *after;
  cursor_k_ = g.first;
  cursor_color_ = g.second;
  const int u = c.wrap(edge_ - g.first);
  const int v = c.wrap(edge_ + g.first + 1);
  std::vector<int> members;
  for (const auto& r : c.robots())
    if ((r.node == u || r.node == v) && static_cast<int>(r.color) == g.second)
      members.push_back(r.id);
  Batch b;
  for (Step s : {Step::Look, Step::Compute, Step::Move})
    for (int id : members)
      b.push_back(Action{id, s});
  ++batches_;
  return b;
}

Trace run(const SystemState& initial, const Algorithm& alg, Scheduler& scheduler, std::size_t max_steps,
          AmbiguityPolicy policy)
{
  Trace trace{initial, alg.name(), {}, ""};
  SystemState state = initial;
  while (true) {
    if (state.stably_gathered()) {
      trace.outcome = "gathered";
      break;
    }
    if (trace.steps.size() >= max_steps) {
      trace.outcome = "step-limit";
      break;
    }
    auto batch = scheduler.next(state, alg);
    if (!batch) {
      trace.outcome = scheduler.stop_reason();
      break;
    }
    for (const auto& a : *batch) {
      state.config.index_of(a.robot);
      state = record(trace, state, alg, a, policy);
    }
  }
  return trace;
}

}  // namespace ringgather
