#include "ringgather/checker.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <thread>

namespace ringgather {

namespace {

constexpr std::uint32_t kEmptySlot = 0xffffffffu;

std::uint64_t hash_words(const std::uint32_t* w, std::size_t width)
{
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < width; ++i) {
    h ^= w[i];
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 31;
  }
  return h;
}

VertexInfo describe(const SystemState& s, const std::optional<Arc>& arc)
{
  VertexInfo info;
  const Configuration& c = s.config;
  info.gathered = is_gathered(c);
  info.stably_gathered = s.stably_gathered();
  info.border_count = static_cast<std::uint8_t>(borders(c).size());
  info.d = static_cast<std::int8_t>(border_distance(c));
  info.ow = static_cast<std::int8_t>(occupied_white_count(c));
  info.connected = visibility_connected(c);
  if (arc)
    for (const auto& r : c.robots())
      if (!arc->contains(r.node, c.n()))
        info.inside_arc = false;
  return info;
}

// Flat open-addressing set of fixed-width keys; slot values index `words`.
struct KeyTable
{
  std::size_t width = 0;
  std::vector<std::uint32_t>* words = nullptr;
  std::vector<std::uint32_t>* slots = nullptr;

  std::size_t count() const { return width == 0 ? 0 : words->size() / width; }

  std::optional<std::uint32_t> find(const std::uint32_t* key) const
  {
    if (slots->empty())
      return std::nullopt;
    const std::size_t mask = slots->size() - 1;
    for (std::size_t i = hash_words(key, width) & mask;; i = (i + 1) & mask) {
      std::uint32_t v = (*slots)[i];
      if (v == kEmptySlot)
        return std::nullopt;
      if (std::equal(key, key + width, words->data() + static_cast<std::size_t>(v) * width))
        return v;
    }
  }

  // Returns (vertex, inserted).
  std::pair<std::uint32_t, bool> insert(const std::uint32_t* key)
  {
    if ((count() + 1) * 2 > slots->size())
      grow();
    const std::size_t mask = slots->size() - 1;
    for (std::size_t i = hash_words(key, width) & mask;; i = (i + 1) & mask) {
      std::uint32_t v = (*slots)[i];
      if (v == kEmptySlot) {
        auto id = static_cast<std::uint32_t>(count());
        words->insert(words->end(), key, key + width);
        (*slots)[i] = id;
        return {id, true};
      }
      if (std::equal(key, key + width, words->data() + static_cast<std::size_t>(v) * width))
        return {v, false};
    }
  }

  void grow()
  {
    std::size_t cap = std::max<std::size_t>(slots->size() * 2, 1024);
    std::vector<std::uint32_t> fresh(cap, kEmptySlot);
    const std::size_t mask = cap - 1;
    for (std::size_t v = 0; v < count(); ++v) {
      std::size_t i = hash_words(words->data() + v * width, width) & mask;
      while (fresh[i] != kEmptySlot)
        i = (i + 1) & mask;
      fresh[i] = static_cast<std::uint32_t>(v);
    }
    slots->swap(fresh);
  }
};

// Keys and decisions of every successor of one vertex, produced by a worker.
struct Expansion
{
  std::vector<std::uint32_t> keys;
  std::vector<GraphEdge> edges;
};

}  // namespace

std::vector<std::uint32_t> StateGraph::key(const SystemState& s) const
{
  if (reduction_ == Reduction::None)
    return concrete_key(s);
  return canonicalize(s, group_).words;
}

SystemState StateGraph::state(std::uint32_t v) const
{
  std::span<const std::uint32_t> w(words_.data() + static_cast<std::size_t>(v) * width_, width_);
  const int n = initial_.config.n();
  const int phi = initial_.config.phi();
  if (reduction_ == Reduction::None)
    return from_concrete_key(n, phi, w);
  return from_canonical_state(CanonicalForm{n, phi, std::vector<std::uint32_t>(w.begin(), w.end())});
}

std::optional<std::uint32_t> StateGraph::find(const SystemState& s) const
{
  auto k = key(s);
  if (k.size() != width_)
    return std::nullopt;
  auto& self = const_cast<StateGraph&>(*this);
  KeyTable t{width_, &self.words_, &self.table_};
  return t.find(k.data());
}

std::vector<std::uint32_t> StateGraph::path_from_initial(std::uint32_t v) const
{
  std::vector<std::uint32_t> path{v};
  while (v != 0) {
    v = parent_[v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Appends to `trace` the action leading from `state` to a successor whose key
// equals `target`; returns false when there is none.
bool follow(Trace& trace, SystemState& state, const Algorithm& alg, const std::vector<std::uint32_t>& target,
            const std::function<std::vector<std::uint32_t>(const SystemState&)>& key_of)
{
  for (auto& s : successors(state, alg)) {
    if (key_of(s.state) != target)
      continue;
    if (s.action.step == Step::Look)
      state = record_look(trace, state, s.action, s.decision);
    else
      state = record(trace, state, alg, s.action);
    return true;
  }
  return false;
}

}  // namespace

Trace StateGraph::concretize(const std::vector<std::uint32_t>& path) const
{
  Trace trace{initial_, alg_.name(), {}, "counterexample"};
  SystemState s = initial_;
  auto key_of = [this](const SystemState& x) { return key(x); };
  for (std::size_t i = 1; i < path.size(); ++i) {
    std::vector<std::uint32_t> target(words_.begin() + static_cast<std::ptrdiff_t>(path[i] * width_),
                                      words_.begin() + static_cast<std::ptrdiff_t>((path[i] + 1) * width_));
    if (!follow(trace, s, alg_, target, key_of))
      throw RingError("internal: vertex path is not a graph path");
  }
  return trace;
}

StateGraph explore(const SystemState& initial, const Algorithm& alg, const ExploreOptions& options)
{
  StateGraph g(alg, initial);
  g.reduction_ = options.reduction;
  if (g.reduction_ == Reduction::Symmetric)
    g.group_ = stabilizer(initial);
  try {
    g.arc_ = robot_arc(initial.config);
  } catch (const RingError&) {
    g.arc_.reset();
  }
  g.width_ = initial.phases.size();
  KeyTable table{g.width_, &g.words_, &g.table_};

  auto k0 = g.key(initial);
  table.insert(k0.data());
  g.parent_.push_back(0);
  g.info_.push_back(describe(initial, g.arc_));
  g.offsets_.push_back(0);

  const int workers = std::max(1, options.workers);
  std::size_t level_begin = 0;
  while (level_begin < g.info_.size()) {
    const std::size_t level_end = g.info_.size();
    std::vector<Expansion> out(level_end - level_begin);

    auto expand = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t v = lo; v < hi; ++v) {
        SystemState s = g.state(static_cast<std::uint32_t>(v));
        Expansion& e = out[v - level_begin];
        for (auto& succ : successors(s, alg)) {
          auto k = g.key(succ.state);
          e.keys.insert(e.keys.end(), k.begin(), k.end());
          GraphEdge edge;
          edge.robot = static_cast<std::uint8_t>(succ.action.robot);
          edge.step = succ.action.step;
          edge.rule = succ.decision.rule;
          edge.direction = static_cast<std::int8_t>(succ.decision.direction);
          e.edges.push_back(edge);
        }
      }
    };

    const std::size_t count = level_end - level_begin;
    if (workers == 1 || count < 64) {
      expand(level_begin, level_end);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
      for (std::size_t lo = level_begin; lo < level_end; lo += chunk)
        pool.emplace_back(expand, lo, std::min(lo + chunk, level_end));
      for (auto& t : pool)
        t.join();
    }

    // Merging in vertex order keeps numbering independent of the worker count.
    for (std::size_t v = level_begin; v < level_end; ++v) {
      Expansion& e = out[v - level_begin];
      for (std::size_t j = 0; j < e.edges.size(); ++j) {
        auto [to, inserted] = table.insert(e.keys.data() + j * g.width_);
        if (inserted) {
          if (g.info_.size() > options.state_budget)
            throw BudgetExceeded(g.info_.size(), g.edges_.size());
          g.parent_.push_back(static_cast<std::uint32_t>(v));
          g.info_.push_back(describe(g.state(to), g.arc_));
        }
        e.edges[j].to = to;
        g.edges_.push_back(e.edges[j]);
      }
      g.offsets_.push_back(g.edges_.size());
      e = Expansion{};
    }
    level_begin = level_end;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Reports

const char* verdict_name(Verdict v)
{
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool CheckReport::passed() const
{
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.verdict == Verdict::Pass; });
}

bool CheckReport::inconclusive() const
{
  return std::any_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.verdict == Verdict::Inconclusive; });
}

const PropertyResult* CheckReport::find(const std::string& name) const
{
  for (const auto& p : properties)
    if (p.name == name)
      return &p;
  return nullptr;
}

void CheckReport::merge(CheckReport other)
{
  if (instance.empty())
    instance = other.instance;
  if (algorithm.empty())
    algorithm = other.algorithm;
  states = std::max(states, other.states);
  edges = std::max(edges, other.edges);
  wall_ms += other.wall_ms;
  for (auto& p : other.properties)
    properties.push_back(std::move(p));
}

namespace {

std::string instance_name(const SystemState& s)
{
  return "n=" + std::to_string(s.config.n()) + " phi=" + std::to_string(s.config.phi()) + " " +
         s.config.pattern();
}

CheckReport empty_report(const StateGraph& g)
{
  CheckReport r;
  r.instance = instance_name(g.initial());
  r.algorithm = g.algorithm().name();
  r.states = g.size();
  r.edges = g.edge_count();
  return r;
}

// Counts violations; the first one found carries the counterexample.
class Tally
{
 public:
  Tally(const StateGraph& g, std::string name) : g_(g) { result_.name = std::move(name); }

  void vertex(std::uint32_t v, const std::string& what)
  {
    if (bump(what))
      result_.counterexample = g_.concretize(g_.path_from_initial(v));
  }

  void edge(std::uint32_t v, std::uint32_t to, const std::string& what)
  {
    if (bump(what)) {
      auto path = g_.path_from_initial(v);
      path.push_back(to);
      result_.counterexample = g_.concretize(path);
    }
  }

  PropertyResult take() { return std::move(result_); }

 private:
  bool bump(const std::string& what)
  {
    result_.verdict = Verdict::Fail;
    if (result_.violations++ > 0)
      return false;
    result_.detail = what;
    return true;
  }

  const StateGraph& g_;
  PropertyResult result_;
};

bool is_alg2(const Algorithm& alg) { return alg.colors().contains(Color::Purple); }

}  // namespace

CheckReport check_safety(const StateGraph& g)
{
  CheckReport report = empty_report(g);
  Tally cautious(g, "cautiousness");
  Tally border_count(g, "border-count");
  Tally connected(g, "connectivity");
  Tally d_mono(g, "d-monotone");
  Tally ow_mono(g, "ow-monotone");
  const bool alg2 = is_alg2(g.algorithm());

  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const VertexInfo& a = g.info(v);
    if (!a.inside_arc)
      cautious.vertex(v, "robot outside the initial arc");
    if (a.border_count > 2 || (a.border_count == 0 && !a.gathered))
      border_count.vertex(v, std::to_string(a.border_count) + " borders");
    if (!a.connected)
      connected.vertex(v, "visibility graph disconnected");
    if (a.gathered)
      continue;
    for (const auto& e : g.out(v)) {
      const VertexInfo& b = g.info(e.to);
      if (a.d >= 0 && b.d >= 0 && b.d > a.d)
        d_mono.edge(v, e.to, "D grows from " + std::to_string(a.d) + " to " + std::to_string(b.d));
      if (alg2 && b.ow > a.ow)
        ow_mono.edge(v, e.to, "#O_W grows from " + std::to_string(a.ow) + " to " + std::to_string(b.ow));
    }
  }
  report.properties.push_back(cautious.take());
  report.properties.push_back(border_count.take());
  report.properties.push_back(connected.take());
  report.properties.push_back(d_mono.take());
  if (alg2)
    report.properties.push_back(ow_mono.take());
  return report;
}

// ---------------------------------------------------------------------------
// Liveness

namespace {

constexpr std::uint32_t kNoComp = 0xffffffffu;

// Iterative Tarjan over the active vertices. `degree(v)` and `target(v, i)`
// describe the out-edges; edges into inactive vertices are ignored.
template <class Degree, class Target>
std::vector<std::uint32_t> strong_components(std::size_t n, const std::vector<char>& active, Degree degree,
                                             Target target, std::uint32_t& comp_count)
{
  std::vector<std::uint32_t> index(n, kNoComp), low(n, 0), comp(n, kNoComp);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0;
  comp_count = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!active[root] || index[root] != kNoComp)
      continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < degree(v)) {
        std::uint32_t w = target(v, i++);
        if (!active[w])
          continue;
        if (index[w] == kNoComp) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comp_count;
        } while (w != done);
        ++comp_count;
      }
    }
  }
  return comp;
}

// Concrete states above one quotient component, explored from one of them.
struct Lift
{
  std::size_t width = 0;
  std::vector<std::uint32_t> words;
  std::vector<std::uint32_t> slots;
  std::vector<std::uint32_t> parent;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> to;
  std::vector<std::uint8_t> robot;

  std::size_t size() const { return parent.size(); }
  std::vector<std::uint32_t> key(std::uint32_t v) const
  {
    return {words.begin() + static_cast<std::ptrdiff_t>(v * width),
            words.begin() + static_cast<std::ptrdiff_t>((v + 1) * width)};
  }
};

bool build_lift(const StateGraph& g, const std::vector<std::uint32_t>& comp, std::uint32_t c,
                const SystemState& start, std::size_t budget, Lift& lift)
{
  const int n = g.initial().config.n();
  const int phi = g.initial().config.phi();
  lift.width = start.phases.size();
  KeyTable table{lift.width, &lift.words, &lift.slots};
  auto k0 = concrete_key(start);
  table.insert(k0.data());
  lift.parent.push_back(0);
  for (std::uint32_t v = 0; v < lift.size(); ++v) {
    SystemState s = from_concrete_key(n, phi, lift.key(v));
    for (const auto& succ : successors(s, g.algorithm())) {
      auto q = g.find(succ.state);
      if (!q || comp[*q] != c)
        continue;
      auto k = concrete_key(succ.state);
      auto [w, inserted] = table.insert(k.data());
      if (inserted) {
        if (lift.size() >= budget)
          return false;
        lift.parent.push_back(v);
      }
      lift.to.push_back(w);
      lift.robot.push_back(static_cast<std::uint8_t>(succ.action.robot));
    }
    lift.offsets.push_back(lift.to.size());
  }
  return true;
}

// Shortest path from `from` to `goal` inside vertices with comp == c.
std::vector<std::uint32_t> path_within(const Lift& lift, const std::vector<std::uint32_t>& comp, std::uint32_t c,
                                       std::uint32_t from, const std::function<bool(std::uint32_t)>& goal)
{
  std::vector<std::uint32_t> prev(lift.size(), kNoComp);
  std::vector<std::uint32_t> queue{from};
  prev[from] = from;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t v = queue[qi];
    if (goal(v)) {
      std::vector<std::uint32_t> path{v};
      while (v != from) {
        v = prev[v];
        path.push_back(v);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (std::size_t i = lift.offsets[v]; i < lift.offsets[v + 1]; ++i) {
      std::uint32_t w = lift.to[i];
      if (comp[w] == c && prev[w] == kNoComp) {
        prev[w] = v;
        queue.push_back(w);
      }
    }
  }
  return {};
}

}  // namespace

CheckReport check_liveness(const StateGraph& g, std::size_t lift_budget)
{
  CheckReport report = empty_report(g);
  PropertyResult result;
  result.name = "liveness";
  const std::size_t n = g.size();
  const Algorithm& alg = g.algorithm();
  std::vector<std::string> failures;

  // (a) every state reaches stable gathering
  std::vector<std::size_t> roff(n + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto& e : g.out(v))
      ++roff[e.to + 1];
  for (std::size_t i = 0; i < n; ++i)
    roff[i + 1] += roff[i];
  std::vector<std::uint32_t> rsrc(roff[n]);
  {
    std::vector<std::size_t> fill(roff.begin(), roff.end() - 1);
    for (std::uint32_t v = 0; v < n; ++v)
      for (const auto& e : g.out(v))
        rsrc[fill[e.to]++] = v;
  }
  std::vector<char> reaches(n, 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v)
    if (g.info(v).stably_gathered) {
      reaches[v] = 1;
      queue.push_back(v);
    }
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (std::size_t i = roff[queue[qi]]; i < roff[queue[qi] + 1]; ++i)
      if (!reaches[rsrc[i]]) {
        reaches[rsrc[i]] = 1;
        queue.push_back(rsrc[i]);
      }
  std::optional<std::uint32_t> stuck;
  std::size_t stuck_count = 0;
  for (std::uint32_t v = 0; v < n; ++v)
    if (!reaches[v]) {
      ++stuck_count;
      if (!stuck)
        stuck = v;
    }
  if (stuck_count > 0)
    failures.push_back(std::to_string(stuck_count) + " states cannot reach stable gathering");

  // (b) stable gathering is closed
  std::optional<std::pair<std::uint32_t, std::uint32_t>> escape;
  std::size_t escape_count = 0;
  for (std::uint32_t v = 0; v < n; ++v)
    if (g.info(v).stably_gathered)
      for (const auto& e : g.out(v))
        if (!g.info(e.to).stably_gathered) {
          ++escape_count;
          if (!escape)
            escape = std::make_pair(v, e.to);
        }
  if (escape_count > 0)
    failures.push_back(std::to_string(escape_count) + " edges leave stable gathering");

  // (c) no fair cycle through non-gathered states
  std::vector<char> active(n);
  for (std::uint32_t v = 0; v < n; ++v)
    active[v] = !g.info(v).stably_gathered;
  std::uint32_t comps = 0;
  auto comp = strong_components(
      n, active, [&](std::uint32_t v) { return g.out(v).size(); },
      [&](std::uint32_t v, std::size_t i) { return g.out(v)[i].to; }, comps);
  std::vector<std::uint32_t> comp_size(comps, 0), comp_rep(comps, kNoComp);
  std::vector<char> nontrivial(comps, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (comp[v] == kNoComp)
      continue;
    ++comp_size[comp[v]];
    if (comp_rep[comp[v]] == kNoComp)
      comp_rep[comp[v]] = v;
    for (const auto& e : g.out(v))
      if (e.to == v)
        nontrivial[comp[v]] = 1;
  }
  // Components whose states all share one configuration only cycle through
  // idle Look-Compute-Move rounds. Every robot can act there forever only if
  // no robot holds a pending move or color change and every fresh decision is
  // idle too; only then is the lift needed.
  std::vector<char> fixed(comps, 1);
  for (std::uint32_t v = 0; v < n; ++v)
    if (comp[v] != kNoComp && fixed[comp[v]])
      for (const auto& e : g.out(v))
        if (e.step != Step::Look && comp[e.to] == comp[v] &&
            (e.direction != 0 || g.state(v).config.node_colors() != g.state(e.to).config.node_colors())) {
          fixed[comp[v]] = 0;
          break;
        }
  auto idle_everywhere = [&](std::uint32_t v) {
    SystemState s = g.state(v);
    for (std::size_t i = 0; i < s.phases.size(); ++i) {
      const Phase& p = s.phases[i];
      if (p.pending_move() || (p.kind == PhaseKind::Observed && p.decision.new_color != s.config.robots()[i].color))
        return false;
    }
    for (const auto& r : s.config.robots()) {
      Decision d = decide(alg, s.config, r.id);
      if (d.moves() || (d.rule != kNoRule && d.new_color != r.color))
        return false;
    }
    return true;
  };

  const std::size_t robots = g.initial().phases.size();
  std::size_t fair_cycles = 0;
  bool lift_exhausted = false;
  for (std::uint32_t c = 0; c < comps; ++c) {
    if (comp_size[c] < 2 && !nontrivial[c])
      continue;
    if (fixed[c] && !idle_everywhere(comp_rep[c]))
      continue;
    const std::uint32_t rep = comp_rep[c];
    Trace prefix = g.concretize(g.path_from_initial(rep));
    SystemState start = replay(prefix, alg);
    Lift lift;
    if (!build_lift(g, comp, c, start, lift_budget, lift)) {
      lift_exhausted = true;
      continue;
    }
    std::vector<char> all(lift.size(), 1);
    std::uint32_t lcomps = 0;
    auto lcomp = strong_components(
        lift.size(), all, [&](std::uint32_t v) { return lift.offsets[v + 1] - lift.offsets[v]; },
        [&](std::uint32_t v, std::size_t i) { return lift.to[lift.offsets[v] + i]; }, lcomps);
    std::vector<std::uint64_t> acting(lcomps, 0);
    for (std::uint32_t v = 0; v < lift.size(); ++v)
      for (std::size_t i = lift.offsets[v]; i < lift.offsets[v + 1]; ++i)
        if (lcomp[lift.to[i]] == lcomp[v])
          acting[lcomp[v]] |= 1ull << start.config.index_of(lift.robot[i]);
    const std::uint64_t everyone = robots >= 64 ? ~0ull : (1ull << robots) - 1;
    for (std::uint32_t lc = 0; lc < lcomps; ++lc) {
      if (acting[lc] != everyone)
        continue;
      if (fair_cycles++ > 0)
        break;
      // Lasso: reach the component, then walk an edge of every robot and return.
      auto in = [&](std::uint32_t v) { return lcomp[v] == lc; };
      std::vector<std::uint32_t> into = path_within(lift, std::vector<std::uint32_t>(lift.size(), 0), 0, 0, in);
      const std::uint32_t entry = into.back();
      std::vector<std::uint32_t> cycle{entry};
      std::uint32_t at = entry;
      for (std::size_t k = 0; k < robots; ++k) {
        const int id = start.config.robots()[k].id;
        std::uint32_t src = kNoComp, dst = kNoComp;
        for (std::uint32_t v = 0; v < lift.size() && src == kNoComp; ++v)
          if (in(v))
            for (std::size_t i = lift.offsets[v]; i < lift.offsets[v + 1]; ++i)
              if (in(lift.to[i]) && lift.robot[i] == id) {
                src = v;
                dst = lift.to[i];
                break;
              }
        auto hop = at == src ? std::vector<std::uint32_t>{at}
                             : path_within(lift, lcomp, lc, at, [&](std::uint32_t v) { return v == src; });
        cycle.insert(cycle.end(), hop.begin() + 1, hop.end());
        cycle.push_back(dst);
        at = dst;
      }
      if (at != entry) {
        auto back = path_within(lift, lcomp, lc, at, [&](std::uint32_t v) { return v == entry; });
        cycle.insert(cycle.end(), back.begin() + 1, back.end());
      }
      Trace trace = prefix;
      SystemState s = start;
      auto key_of = [](const SystemState& x) { return concrete_key(x); };
      for (std::size_t i = 1; i < into.size(); ++i)
        follow(trace, s, alg, lift.key(into[i]), key_of);
      result.cycle_start = trace.steps.size();
      for (std::size_t i = 1; i < cycle.size(); ++i)
        follow(trace, s, alg, lift.key(cycle[i]), key_of);
      trace.outcome = "fair-cycle";
      result.counterexample = std::move(trace);
    }
  }
  if (fair_cycles > 0)
    failures.insert(failures.begin(), "fair cycle through non-gathered states");

  result.violations = stuck_count + escape_count + fair_cycles;
  if (!failures.empty()) {
    result.verdict = Verdict::Fail;
    for (std::size_t i = 0; i < failures.size(); ++i)
      result.detail += (i ? "; " : "") + failures[i];
    if (!result.counterexample) {
      if (stuck)
        result.counterexample = g.concretize(g.path_from_initial(*stuck));
      else if (escape) {
        auto path = g.path_from_initial(escape->first);
        path.push_back(escape->second);
        result.counterexample = g.concretize(path);
      }
    }
  } else if (lift_exhausted) {
    result.verdict = Verdict::Inconclusive;
    result.detail = "cycle lift exceeded its budget";
  } else {
    result.detail = "every state reaches stable gathering; no fair cycle";
  }
  report.properties.push_back(std::move(result));
  return report;
}

// ---------------------------------------------------------------------------
// Parity, mega-cycles, Lemma 2

namespace {

// Expected arrival colors along the initial arc.
class ParityRule
{
 public:
  ParityRule(const Configuration& initial, const Algorithm& alg) : alg2_(is_alg2(alg)), n_(initial.n())
  {
    try {
      arc_ = robot_arc(initial);
    } catch (const RingError&) {
      return;
    }
    occupied_.assign(static_cast<std::size_t>(arc_->m), 0);
    for (const auto& r : initial.robots())
      occupied_[static_cast<std::size_t>(arc_->index_of(r.node, n_))] = 1;
  }

  // Checks robot `index` of `pre` about to take its Move. Returns an error
  // message, or an empty string when the move is fine or not subject to parity.
  std::string check_move(const SystemState& pre, std::size_t index) const
  {
    if (!arc_)
      return {};
    const Robot& r = pre.config.robots()[index];
    const int dir = pre.phases[index].decision.direction;
    if (dir == 0 || (r.color != Color::Red && r.color != Color::Blue))
      return {};
    const int y = pre.config.wrap(r.node + dir);
    if (!arc_->contains(y, n_) || !arc_->contains(r.node, n_))
      return {};
    const int iy = arc_->index_of(y, n_);
    int h = iy;
    if (alg2_) {
      if (!pre.config.colors_at(y).contains(Color::White))
        return {};
      auto b = borders(pre.config);
      if (std::find(b.begin(), b.end(), r.node) == b.end())
        return {};
      const int ix = arc_->index_of(r.node, n_);
      h = 0;
      if (iy > ix) {
        for (int k = 1; k <= iy; ++k)
          h += occupied_[static_cast<std::size_t>(k)];
      } else {
        for (int k = iy; k < arc_->m - 1; ++k)
          h += occupied_[static_cast<std::size_t>(k)];
      }
    }
    const Color want = h % 2 == 1 ? Color::Blue : Color::Red;
    if (r.color == want)
      return {};
    return std::string("robot arrives ") + color_letter(r.color) + " at arc index " + std::to_string(iy) +
           " (h=" + std::to_string(h) + ", expected " + color_letter(want) + ")";
  }

 private:
  bool alg2_;
  int n_;
  std::optional<Arc> arc_;
  std::vector<char> occupied_;
};

int progress(const Algorithm& alg, int d, int ow) { return is_alg2(alg) ? ow : d; }
int progress_floor(const Algorithm& alg) { return is_alg2(alg) ? 1 : 2; }

// Empty when a step from quantity a to b (gathered_b for the target) is a
// legal mega-cycle step.
std::string megacycle_step(const Algorithm& alg, int a, int b, bool gathered_b)
{
  const int floor = progress_floor(alg);
  const char* q = is_alg2(alg) ? "#O_W" : "D";
  if (gathered_b) {
    if (a > floor)
      return std::string("gathered while ") + q + "=" + std::to_string(a);
    return {};
  }
  if (a < 0 || b < 0)
    return {};
  if (b > a)
    return std::string(q) + " grows from " + std::to_string(a) + " to " + std::to_string(b);
  if (a - b > 2)
    return std::string(q) + " drops by " + std::to_string(a - b);
  if (a > floor && b < floor)
    return std::string(q) + " skips " + std::to_string(floor) + " (" + std::to_string(a) + " -> " +
           std::to_string(b) + ")";
  return {};
}

// Walks a trace, handing each pre-state and step to `visit`.
void walk(const Trace& trace, const Algorithm& alg,
          const std::function<void(const SystemState&, std::size_t, const SystemState&)>& visit)
{
  SystemState state = trace.initial;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    SystemState next = state;
    if (s.action.step == Step::Look) {
      Decision d = decide(alg, state.config, s.action.robot);
      if (d.ambiguous_direction && s.direction != 0)
        d.direction = s.direction;
      next = apply_look(state, state.config.index_of(s.action.robot), d);
    } else {
      next = apply(state, alg, s.action);
    }
    if (digest(next.config) != s.digest)
      throw RingError("trace does not replay: digest mismatch at step " + std::to_string(i));
    visit(state, i, next);
    state = std::move(next);
  }
}

CheckReport trace_report(const Trace& trace)
{
  CheckReport r;
  r.instance = instance_name(trace.initial);
  r.algorithm = trace.algorithm;
  return r;
}

// The trace cut right after step `i`.
Trace prefix_of(const Trace& trace, std::size_t i)
{
  Trace t{trace.initial, trace.algorithm, {}, "counterexample"};
  t.steps.assign(trace.steps.begin(), trace.steps.begin() + static_cast<std::ptrdiff_t>(i + 1));
  return t;
}

}  // namespace

CheckReport check_parity(const StateGraph& g)
{
  CheckReport report = empty_report(g);
  Tally tally(g, "parity");
  ParityRule rule(g.initial().config, g.algorithm());
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    std::optional<SystemState> s;
    for (const auto& e : g.out(v)) {
      if (e.step != Step::Move || e.direction == 0)
        continue;
      if (!s)
        s = g.state(v);
      std::string err = rule.check_move(*s, s->config.index_of(e.robot));
      if (!err.empty())
        tally.edge(v, e.to, err);
    }
  }
  report.properties.push_back(tally.take());
  return report;
}

CheckReport check_megacycles(const StateGraph& g)
{
  CheckReport report = empty_report(g);
  Tally tally(g, "megacycles");
  const Algorithm& alg = g.algorithm();
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const VertexInfo& a = g.info(v);
    if (a.gathered)
      continue;
    for (const auto& e : g.out(v)) {
      const VertexInfo& b = g.info(e.to);
      std::string err = megacycle_step(alg, progress(alg, a.d, a.ow), progress(alg, b.d, b.ow), b.gathered);
      if (!err.empty())
        tally.edge(v, e.to, err);
    }
  }
  report.properties.push_back(tally.take());
  return report;
}

CheckReport check_lemma2(const StateGraph& g)
{
  CheckReport report = empty_report(g);
  Tally tally(g, "lemma2");
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    std::optional<SystemState> s;
    std::vector<int> b;
    for (const auto& e : g.out(v)) {
      if (e.step != Step::Look || e.direction == 0)
        continue;
      if (!s) {
        s = g.state(v);
        b = borders(s->config);
      }
      const int u = s->config.robot(e.robot).node;
      if (std::find(b.begin(), b.end(), u) == b.end())
        continue;
      ColorSet cs = s->config.colors_at(u);
      if (cs == ColorSet{Color::White, Color::Red} || cs == ColorSet{Color::White, Color::Blue})
        tally.edge(v, e.to, "robot leaves border node {" + cs.str() + "} before it is singly colored");
    }
  }
  report.properties.push_back(tally.take());
  return report;
}

CheckReport check_parity(const Trace& trace, const Algorithm& alg)
{
  CheckReport report = trace_report(trace);
  PropertyResult result;
  result.name = "parity";
  ParityRule rule(trace.initial.config, alg);
  walk(trace, alg, [&](const SystemState& pre, std::size_t i, const SystemState&) {
    const auto& a = trace.steps[i].action;
    if (a.step != Step::Move)
      return;
    std::string err = rule.check_move(pre, pre.config.index_of(a.robot));
    if (err.empty())
      return;
    result.verdict = Verdict::Fail;
    if (result.violations++ == 0) {
      result.detail = "step " + std::to_string(i) + ": " + err;
      result.counterexample = prefix_of(trace, i);
    }
  });
  report.properties.push_back(std::move(result));
  return report;
}

CheckReport check_megacycles(const Trace& trace, const Algorithm& alg)
{
  CheckReport report = trace_report(trace);
  PropertyResult result;
  result.name = "megacycles";
  const Configuration& c0 = trace.initial.config;
  if (!is_gathered(c0)) {
    int q = progress(alg, border_distance(c0), occupied_white_count(c0));
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const auto& s = trace.steps[i];
      const bool gathered = is_gathered(s.config);
      const int next = progress(alg, s.d, s.ow);
      std::string err = megacycle_step(alg, q, next, gathered);
      if (!err.empty()) {
        result.verdict = Verdict::Fail;
        if (result.violations++ == 0) {
          result.detail = "step " + std::to_string(i) + ": " + err;
          result.counterexample = prefix_of(trace, i);
        }
      }
      if (gathered)
        break;
      if (next < q)
        ++cycles;
      q = next;
    }
    if (result.verdict == Verdict::Pass)
      result.detail = std::to_string(cycles) + " mega-cycles";
  } else {
    result.detail = "gathered from the start";
  }
  report.properties.push_back(std::move(result));
  return report;
}

// ---------------------------------------------------------------------------
// Drivers

CheckReport check_instance(const SystemState& initial, const Algorithm& alg, const ExploreOptions& options,
                           const CheckSelection& sel)
{
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  report.instance = instance_name(initial);
  report.algorithm = alg.name();
  try {
    StateGraph g = explore(initial, alg, options);
    report.states = g.size();
    report.edges = g.edge_count();
    if (sel.safety)
      report.merge(check_safety(g));
    if (sel.liveness)
      report.merge(check_liveness(g));
    if (sel.parity)
      report.merge(check_parity(g));
    if (sel.megacycles)
      report.merge(check_megacycles(g));
    if (sel.lemma2)
      report.merge(check_lemma2(g));
  } catch (const BudgetExceeded& e) {
    report.states = e.states();
    report.edges = e.edges();
    std::vector<std::string> names;
    if (sel.safety)
      names.insert(names.end(), {"cautiousness", "border-count", "connectivity", "d-monotone"});
    if (sel.safety && is_alg2(alg))
      names.push_back("ow-monotone");
    if (sel.liveness)
      names.push_back("liveness");
    if (sel.parity)
      names.push_back("parity");
    if (sel.megacycles)
      names.push_back("megacycles");
    if (sel.lemma2)
      names.push_back("lemma2");
    for (auto& name : names) {
      PropertyResult p;
      p.name = name;
      p.verdict = Verdict::Inconclusive;
      p.detail = e.what();
      report.properties.push_back(std::move(p));
    }
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

CheckReport demo_symmetric(const Configuration& config, const Algorithm& alg, std::size_t bound)
{
  if (!is_edge_view_symmetric(config))
    throw RingError("configuration is not edge-view-symmetric");
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  report.instance = "n=" + std::to_string(config.n()) + " phi=" + std::to_string(config.phi()) + " " +
                    config.pattern();
  report.algorithm = alg.name();
  PropertyResult result;
  result.name = "symmetric-impossibility";

  SymmetricAdversary adversary;
  SystemState state = SystemState::initial(config);
  Trace trace{state, alg.name(), {}, ""};
  std::vector<std::size_t> batch_start;
  std::string problem;
  try {
    while (trace.steps.size() < bound) {
      auto batch = adversary.next(state, alg);
      if (!batch)
        break;
      batch_start.push_back(trace.steps.size());
      for (const auto& a : *batch)
        state = record(trace, state, alg, a);
      if (is_gathered(state.config)) {
        problem = "gathered after " + std::to_string(trace.steps.size()) + " steps";
        break;
      }
      if (!is_edge_view_symmetric(state.config)) {
        problem = "symmetry lost after " + std::to_string(trace.steps.size()) + " steps";
        break;
      }
    }
  } catch (const RingError& e) {
    problem = e.what();
  }
  report.states = batch_start.size();

  const bool recurred = problem.empty() && adversary.stop_reason() == "recurrence";
  if (!problem.empty()) {
    result.verdict = Verdict::Fail;
    result.detail = problem;
    trace.outcome = "counterexample";
  } else if (!recurred) {
    result.verdict = Verdict::Inconclusive;
    result.detail = "no recurrence within " + std::to_string(bound) + " steps";
    trace.outcome = "step-limit";
  } else {
    const std::size_t loop = batch_start[adversary.loop_start()];
    std::set<int> acted;
    for (std::size_t i = loop; i < trace.steps.size(); ++i)
      acted.insert(trace.steps[i].action.robot);
    trace.outcome = "recurrence";
    result.cycle_start = loop;
    if (acted.size() != config.robot_count()) {
      result.verdict = Verdict::Fail;
      result.detail = "the recurring schedule starves " + std::to_string(config.robot_count() - acted.size()) +
                      " robots";
    } else {
      result.detail = "symmetric at every step; state recurs after " + std::to_string(trace.steps.size()) +
                      " steps (loop of " + std::to_string(trace.steps.size() - loop) + ") without gathering";
    }
  }
  result.counterexample = std::move(trace);
  report.properties.push_back(std::move(result));
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace {

// Occupied nodes split by holes wider than phi, as clockwise arcs.
std::vector<Arc> clusters(const Configuration& c)
{
  auto occ = c.occupied_nodes();
  std::vector<Arc> out;
  const std::size_t k = occ.size();
  std::vector<std::size_t> cuts;  // cluster ends: gap after occ[i] exceeds phi
  for (std::size_t i = 0; i < k; ++i)
    if (c.wrap(occ[(i + 1) % k] - occ[i]) > c.phi() || k == 1)
      cuts.push_back(i);
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const int first = occ[(cuts[(j + cuts.size() - 1) % cuts.size()] + 1) % k];
    const int last = occ[cuts[j]];
    out.push_back(Arc{first, c.wrap(last - first) + 1});
  }
  return out;
}

}  // namespace

CheckReport demo_multiborder(const Configuration& config, const Algorithm& alg, const ExploreOptions& options)
{
  auto arcs = clusters(config);
  if (arcs.size() != 2)
    throw RingError("expected two clusters separated by holes wider than phi, found " +
                    std::to_string(arcs.size()));
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  report.instance = "n=" + std::to_string(config.n()) + " phi=" + std::to_string(config.phi()) + " " +
                    config.pattern();
  report.algorithm = alg.name();
  PropertyResult result;
  result.name = "multiborder";
  try {
    StateGraph g = explore(SystemState::initial(config), alg, options);
    report.states = g.size();
    report.edges = g.edge_count();
    Tally tally(g, "multiborder");
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      if (g.info(v).gathered) {
        tally.vertex(v, "gathered");
        continue;
      }
      SystemState s = g.state(v);
      bool hit[2] = {false, false};
      bool stray = false;
      for (const auto& r : s.config.robots()) {
        bool any = false;
        for (int a = 0; a < 2; ++a)
          if (arcs[static_cast<std::size_t>(a)].contains(r.node, config.n()))
            hit[a] = any = true;
        stray = stray || !any;
      }
      if (stray || !hit[0] || !hit[1])
        tally.vertex(v, "a cluster left its initial arc");
    }
    result = tally.take();
    if (result.verdict == Verdict::Pass)
      result.detail = "no gathered state among " + std::to_string(g.size()) + "; clusters stay in their arcs";
  } catch (const BudgetExceeded& e) {
    result.verdict = Verdict::Inconclusive;
    result.detail = e.what();
    report.states = e.states();
  }
  report.properties.push_back(std::move(result));
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace ringgather
