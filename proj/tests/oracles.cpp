#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace oracle {

Snapshot snapshot(const SystemState& s)
{
  Snapshot out;
  for (std::size_t i = 0; i < s.phases.size(); ++i) {
    const Robot& r = s.config.robots()[i];
    const Phase& p = s.phases[i];
    const bool ready = p.kind == PhaseKind::Ready;
    out.emplace_back(r.id, r.node, static_cast<int>(r.color), static_cast<int>(p.kind),
                     ready ? -1 : p.decision.rule, ready ? -1 : static_cast<int>(p.decision.new_color),
                     ready ? 0 : p.decision.direction);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NaiveGraph naive_explore(const SystemState& initial, const Algorithm& alg, std::size_t limit)
{
  NaiveGraph g;
  std::map<Snapshot, std::size_t> index;
  index[snapshot(initial)] = 0;
  g.states.push_back(initial);
  for (std::size_t v = 0; v < g.states.size(); ++v) {
    g.out.emplace_back();
    for (auto& s : successors(g.states[v], alg)) {
      auto key = snapshot(s.state);
      auto it = index.find(key);
      std::size_t to;
      if (it == index.end()) {
        if (g.states.size() >= limit) {
          g.complete = false;
          return g;
        }
        to = g.states.size();
        index.emplace(key, to);
        g.states.push_back(s.state);
      } else {
        to = it->second;
      }
      g.out[v].emplace_back(to, s.action.robot);
    }
  }
  return g;
}

namespace {

using Anonymous = std::vector<std::tuple<int, int, int, int, int, int>>;

Anonymous transformed(const SystemState& s, int shift, bool reflect)
{
  const int n = s.config.n();
  Anonymous out;
  for (const auto& row : snapshot(s)) {
    auto [id, node, color, kind, rule, nc, dir] = row;
    int x = reflect ? -node : node;
    x = ((x + shift) % n + n) % n;
    out.emplace_back(x, color, kind, rule, nc, reflect ? -dir : dir);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, bool>> fixing_transforms(const SystemState& s)
{
  std::vector<std::pair<int, bool>> out;
  auto base = transformed(s, 0, false);
  for (int shift = 0; shift < s.config.n(); ++shift)
    for (bool reflect : {false, true})
      if (transformed(s, shift, reflect) == base)
        out.emplace_back(shift, reflect);
  return out;
}

}  // namespace

std::size_t orbit_count(const NaiveGraph& g)
{
  auto group = fixing_transforms(g.states.front());
  std::set<Anonymous> classes;
  for (const auto& s : g.states) {
    std::optional<Anonymous> best;
    for (auto [shift, reflect] : group) {
      auto t = transformed(s, shift, reflect);
      if (!best || t < *best)
        best = t;
    }
    classes.insert(*best);
  }
  return classes.size();
}

namespace {

// Kosaraju's algorithm, iterative.
std::vector<std::size_t> components(const NaiveGraph& g, const std::vector<bool>& keep)
{
  const std::size_t n = g.states.size();
  std::vector<std::vector<std::size_t>> rev(n);
  for (std::size_t v = 0; v < n; ++v)
    for (auto [w, r] : g.out[v])
      if (keep[v] && keep[w])
        rev[w].push_back(v);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> order;
  for (std::size_t root = 0; root < n; ++root) {
    if (!keep[root] || seen[root])
      continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < g.out[v].size()) {
        std::size_t w = g.out[v][i++].first;
        if (keep[w] && !seen[w]) {
          seen[w] = true;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, none);
  std::size_t c = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != none)
      continue;
    std::vector<std::size_t> stack{*it};
    comp[*it] = c;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : rev[v])
        if (comp[w] == none) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
    ++c;
  }
  return comp;
}

bool gathered_for_good(const SystemState& s)
{
  if (!is_gathered(s.config))
    return false;
  for (std::size_t i = 0; i < s.phases.size(); ++i) {
    const Phase& p = s.phases[i];
    if (p.kind == PhaseKind::Ready)
      continue;
    if (p.decision.direction != 0)
      return false;
    if (p.kind == PhaseKind::Observed && p.decision.new_color != s.config.robots()[i].color)
      return false;
  }
  return true;
}

}  // namespace

bool naive_liveness(const NaiveGraph& g)
{
  const std::size_t n = g.states.size();
  std::vector<bool> good(n);
  for (std::size_t v = 0; v < n; ++v)
    good[v] = gathered_for_good(g.states[v]);
  // Backward reachability by fixpoint iteration.
  std::vector<bool> reach = good;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v)
      if (!reach[v])
        for (auto [w, r] : g.out[v])
          if (reach[w]) {
            reach[v] = true;
            changed = true;
            break;
          }
  }
  if (std::find(reach.begin(), reach.end(), false) != reach.end())
    return false;
  std::vector<bool> keep(n);
  for (std::size_t v = 0; v < n; ++v)
    keep[v] = !good[v];
  auto comp = components(g, keep);
  std::map<std::size_t, std::set<int>> actors;
  for (std::size_t v = 0; v < n; ++v)
    if (keep[v])
      for (auto [w, r] : g.out[v])
        if (keep[w] && comp[w] == comp[v])
          actors[comp[v]].insert(r);
  const std::size_t robots = g.states.front().phases.size();
  for (const auto& [c, who] : actors)
    if (who.size() == robots)
      return false;
  return true;
}

namespace {

// Border nodes by direct inspection of the phi cells on each side.
std::vector<int> oracle_borders(const Configuration& c)
{
  auto counts = c.robots_per_node();
  std::vector<int> out;
  for (int u = 0; u < c.n(); ++u) {
    if (counts[static_cast<std::size_t>(u)] == 0)
      continue;
    bool side[2] = {true, true};
    for (int k = 1; k <= c.phi(); ++k) {
      if (counts[static_cast<std::size_t>(c.wrap(u + k))] > 0)
        side[0] = false;
      if (counts[static_cast<std::size_t>(c.wrap(u - k))] > 0)
        side[1] = false;
    }
    if (side[0] != side[1])
      out.push_back(u);
  }
  return out;
}

bool oracle_connected(const Configuration& c)
{
  auto counts = c.robots_per_node();
  std::vector<int> occ;
  for (int u = 0; u < c.n(); ++u)
    if (counts[static_cast<std::size_t>(u)] > 0)
      occ.push_back(u);
  // Flood fill over robots within distance phi (either way round).
  std::vector<bool> seen(occ.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < occ.size(); ++j) {
      int d = std::abs(occ[i] - occ[j]);
      d = std::min(d, c.n() - d);
      if (!seen[j] && d <= c.phi()) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Occupied nodes as a set of arc positions from border a walking toward b
// through occupied territory; returns the length of that walk.
int span_between(const Configuration& c, int a, int b, int dir)
{
  int len = 0;
  for (int u = a; u != b; u = c.wrap(u + dir))
    ++len;
  return len + 1;
}

}  // namespace

bool naive_safety(const NaiveGraph& g)
{
  const Configuration& c0 = g.states.front().config;
  auto b0 = oracle_borders(c0);
  if (b0.size() != 2)
    return false;
  // The initial arc: the walk from one border to the other that covers every robot.
  std::set<int> arc;
  for (int dir : {1, -1}) {
    std::set<int> nodes;
    for (int u = b0[0];; u = c0.wrap(u + dir)) {
      nodes.insert(u);
      if (u == b0[1])
        break;
    }
    bool all = std::all_of(c0.robots().begin(), c0.robots().end(),
                           [&](const Robot& r) { return nodes.count(r.node) > 0; });
    if (all && (arc.empty() || nodes.size() < arc.size()))
      arc = nodes;
  }
  auto dist = [&](const Configuration& c) {
    if (is_gathered(c))
      return 0;
    auto b = oracle_borders(c);
    if (b.size() != 2)
      return -1;
    int best = -1;
    for (int dir : {1, -1}) {
      int len = span_between(c, b[0], b[1], dir);
      bool all = true;
      for (const auto& r : c.robots()) {
        bool on = false;
        for (int u = b[0], k = 0; k < len; u = c.wrap(u + dir), ++k)
          on = on || u == r.node;
        all = all && on;
      }
      if (all && (best < 0 || len - 1 < best))
        best = len - 1;
    }
    return best;
  };
  for (std::size_t v = 0; v < g.states.size(); ++v) {
    const Configuration& c = g.states[v].config;
    for (const auto& r : c.robots())
      if (!arc.count(r.node))
        return false;
    auto b = oracle_borders(c);
    if (b.size() > 2 || (b.empty() && !is_gathered(c)))
      return false;
    if (!oracle_connected(c))
      return false;
    if (is_gathered(c))
      continue;
    const int d = dist(c);
    for (auto [w, r] : g.out[v]) {
      const int dw = dist(g.states[w].config);
      if (d >= 0 && dw > d)
        return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> brute_force_initial(int n, int phi, Parity parity)
{
  std::set<std::vector<int>> classes;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> occ;
    for (int u = 0; u < n; ++u)
      if (mask >> u & 1)
        occ.push_back(u);
    if (occ.size() < 2)
      continue;
    // Gaps between cyclically consecutive occupied nodes.
    std::vector<int> gaps;
    for (std::size_t i = 0; i < occ.size(); ++i)
      gaps.push_back((occ[(i + 1) % occ.size()] - occ[i] + n) % n);
    int wide = 0, widest = 0;
    std::size_t outer = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (gaps[i] > phi)
        ++wide;
      if (gaps[i] > widest) {
        widest = gaps[i];
        outer = i;
      }
    }
    // Exactly one gap wider than phi: the outer hole. Everything else is an
    // inner gap, which makes the visibility graph a path with two ends.
    if (wide != 1)
      continue;
    if (widest - 1 <= phi)  // largest run of empty nodes
      continue;
    const int m = n - widest + 1;
    const int o = static_cast<int>(occ.size());
    (void)outer;
    if (parity == Parity::MOdd && m % 2 == 0)
      continue;
    if (parity == Parity::MEvenOOdd && (m % 2 == 1 || o % 2 == 0))
      continue;
    std::vector<int> best;
    for (int shift = 0; shift < n; ++shift)
      for (int sign : {1, -1}) {
        std::vector<int> t;
        for (int u : occ)
          t.push_back(((sign * u + shift) % n + n) % n);
        std::sort(t.begin(), t.end());
        if (best.empty() || t < best)
          best = t;
      }
    classes.insert(best);
  }
  return {classes.begin(), classes.end()};
}

}  // namespace oracle
