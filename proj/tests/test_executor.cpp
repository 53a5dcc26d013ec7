#include <doctest.h>

#include "ringgather/executor.hpp"

#include <map>
#include <random>

using namespace ringgather;

namespace {

constexpr Step L = Step::Look;
constexpr Step C = Step::Compute;
constexpr Step M = Step::Move;

void cycle(std::vector<Action>& s, int id)
{
  s.push_back({id, L});
  s.push_back({id, C});
  s.push_back({id, M});
}

// Every robot in `ids` looks first, then all compute, then all move.
void together(std::vector<Action>& s, std::initializer_list<int> ids)
{
  for (Step st : {L, C, M})
    for (int id : ids)
      s.push_back({id, st});
}

std::vector<std::string> labels_without_none(const Trace& t, const Algorithm& alg)
{
  std::vector<std::string> out;
  for (auto& l : t.rule_labels(alg))
    if (l != "none")
      out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("phases advance Look, Compute, Move")
{
  auto alg = algorithm1();
  auto s = SystemState::initial(Configuration::parse("W|W|W", 9, 2));
  CHECK_THROWS_AS(apply(s, alg, {0, C}), RingError);
  CHECK_THROWS_AS(apply(s, alg, {0, M}), RingError);
  s = apply(s, alg, {0, L});
  CHECK(s.phases[0].kind == PhaseKind::Observed);
  CHECK(s.config.robot(0).color == Color::White);  // light changes at Compute
  s = apply(s, alg, {0, C});
  CHECK(s.config.robot(0).color == Color::Red);
  s = apply(s, alg, {0, M});
  CHECK(s.phases[0].kind == PhaseKind::Ready);
  CHECK_THROWS_AS(apply(s, alg, {9, L}), RingError);
}

TEST_CASE("outdated robots act on their old snapshot")
{
  auto alg = algorithm1();
  // Two Red robots on the left border both see R2a; once the first has
  // turned Blue the second would no longer match, but it already decided.
  auto s = SystemState::initial(Configuration::parse("R,R|_|W|_|R", 10, 2));
  s = apply(s, alg, {0, L});
  s = apply(s, alg, {1, L});
  s = apply(s, alg, {0, C});
  CHECK(decide(alg, s.config, 1).rule == kNoRule);
  s = apply(s, alg, {0, M});
  s = apply(s, alg, {1, C});
  s = apply(s, alg, {1, M});
  CHECK(s.config.robot(1).node == 1);
  CHECK(s.config.robot(1).color == Color::Blue);
}

TEST_CASE("successors enumerate one action per robot")
{
  auto alg = algorithm1();
  auto s = SystemState::initial(Configuration::parse("W,W|W|W", 9, 2));
  auto succ = successors(s, alg);
  CHECK(succ.size() == 4);
  for (const auto& x : succ)
    CHECK(x.action.step == L);
}

TEST_CASE("stable gathering")
{
  auto alg = algorithm1();
  auto s = SystemState::initial(Configuration::parse("B,B", 7, 2));
  CHECK(s.stably_gathered());
  s = apply(s, alg, {0, L});
  CHECK(s.stably_gathered());
  // A pending move spoils it even though every robot is on one node.
  auto t = SystemState::initial(Configuration::parse("R|B", 7, 2));
  t = apply(t, alg, {0, L});
  t = apply(t, alg, {0, C});
  t = apply(t, alg, {0, M});
  CHECK(is_gathered(t.config));
  CHECK(t.stably_gathered());
  auto u = SystemState::initial(Configuration::parse("R|B", 7, 2));
  u.phases[1] = Phase{PhaseKind::Computed, Decision{0, Color::Blue, -1, false}};
  u.config = u.config.with_robot(0, 1, Color::Blue);
  CHECK(is_gathered(u.config));
  CHECK_FALSE(u.stably_gathered());
}

TEST_CASE("progress measures")
{
  auto c = Configuration::parse("R|W|W|W,R", 9, 2);
  CHECK(border_distance(c) == 3);
  CHECK(occupied_white_count(c) == 2);
  CHECK(occupied_white_count(Configuration::parse("W,W", 5, 1)) == 0);
  CHECK(border_distance(Configuration::parse("W|_|_|_|_|W", 12, 1)) == -1);
}

TEST_CASE("execution example of Algorithm 1 (phi = 2)")
{
  auto alg = algorithm1();
  // a,b,d = 0,1,2 on the left border; 3 in the middle; 4 on the right border.
  auto start = SystemState::initial(Configuration::parse("W,W,W|_|W|_|W", 10, 2));
  std::vector<Action> s;
  together(s, {0, 1, 2, 4});                   // R1 on both borders
  s.insert(s.end(), {{0, L}, {1, L}, {0, C}});  // 1 looked, 0 recolored: both outdated
  s.insert(s.end(), {{1, C}, {0, M}, {1, M}});
  cycle(s, 4);                                 // right border R2a
  cycle(s, 2);                                 // the straggler still sees White: R2a
  s.insert(s.end(), {{0, L}, {1, L}, {2, L}, {0, C}, {0, M}, {1, C}, {1, M}});  // R3b, 2 left behind
  cycle(s, 4);                                 // right border R3b
  cycle(s, 3);                                 // R4a
  together(s, {0, 1, 3, 4});                   // R5 onto the outdated robot's node
  s.insert(s.end(), {{2, C}, {2, M}});         // the outdated robot steps away ...
  cycle(s, 2);                                 // ... and comes back by R5
  auto sched = scripted(s);
  Trace t = run(start, alg, *sched, 1000);
  CHECK(t.outcome == "gathered");
  std::vector<std::string> want = {"R1",  "R1",  "R1",  "R1",  "R2a", "R2a", "R2a", "R2a", "R3b",
                                   "R3b", "R3b", "R3b", "R4a", "R5",  "R5",  "R5",  "R5",  "R5"};
  CHECK(labels_without_none(t, alg) == want);
  // The outdated robot really left the gathering node before returning.
  bool left = false;
  for (std::size_t i = 1; i < t.steps.size(); ++i)
    if (is_gathered(t.steps[i - 1].config) && !is_gathered(t.steps[i].config))
      left = true;
  CHECK(left);
  CHECK(replay(t, alg).config == t.steps.back().config);
}

TEST_CASE("execution example of Algorithm 2 (phi = 3)")
{
  auto alg = algorithm2();
  // a = 0 left border, b = 1, c,d = 2,3 right border tower.
  auto start = SystemState::initial(Configuration::parse("W|_|W|_|_|W,W", 12, 3));
  std::vector<Action> s;
  cycle(s, 0);  // R1
  cycle(s, 0);  // R2a-1: moves onto the empty node, stays Red
  cycle(s, 0);  // R2b: absorbs the White robot, turns Blue
  cycle(s, 1);  // R4b
  cycle(s, 0);  // R3a-1
  cycle(s, 1);  // R3a-2
  together(s, {2, 3});  // R1, R1
  together(s, {0, 2});  // R3a-1, R2a-1: Blue and Red meet on the middle node
  cycle(s, 3);  // R2a-2
  cycle(s, 1);  // R5b-2: two occupied nodes left
  cycle(s, 0);  // R5a
  cycle(s, 2);
  cycle(s, 3);
  auto sched = scripted(s);
  Trace t = run(start, alg, *sched, 1000);
  CHECK(t.outcome == "gathered");
  std::vector<std::string> want = {"R1",    "R2a-1", "R2b",   "R4b",   "R3a-1", "R3a-2", "R1", "R1",
                                   "R3a-1", "R2a-1", "R2a-2", "R5b-2", "R5a",   "R5a",   "R5a"};
  CHECK(labels_without_none(t, alg) == want);
  // R2a-1 keeps the color; R2b changes it.
  CHECK(t.steps[5].config.robot(0).color == Color::Red);
  CHECK(t.steps[8].config.robot(0).color == Color::Blue);
}

TEST_CASE("round robin and synchronous schedules")
{
  auto alg = algorithm1();
  auto start = SystemState::initial(Configuration::parse("W|W|W", 9, 2));
  auto rr = round_robin();
  Trace t = run(start, alg, *rr, 9);
  REQUIRE(t.steps.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(t.steps[i].action.robot == static_cast<int>(i / 3));
    CHECK(t.steps[i].action.step == static_cast<Step>(i % 3));
  }
  auto sync = synchronous();
  Trace u = run(start, alg, *sync, 3);
  REQUIRE(u.steps.size() == 3);
  for (const auto& s : u.steps)
    CHECK(s.action.step == L);
  CHECK(run(start, alg, *synchronous(), 100000).outcome == "gathered");
  CHECK(run(start, alg, *round_robin(), 100000).outcome == "gathered");
}

TEST_CASE("random fair scheduler: seeded and fair (property)")
{
  auto alg = algorithm1();
  auto start = SystemState::initial(Configuration::parse("W,W|W|_|W|W", 11, 2));
  const std::size_t r = start.phases.size();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    for (int wf : {2, 3}) {
      Trace a = run(start, alg, *random_fair(seed, wf), 400);
      Trace b = run(start, alg, *random_fair(seed, wf), 400);
      REQUIRE(a.steps.size() == b.steps.size());
      for (std::size_t i = 0; i < a.steps.size(); ++i)
        CHECK(a.steps[i].action == b.steps[i].action);
      CHECK(a.outcome == "gathered");
      // Every robot acts in every window of W/5 steps, so it completes a
      // whole Look-Compute-Move cycle within every window of W.
      const std::size_t window = 3 * r * static_cast<std::size_t>(wf);
      const std::size_t bound = std::max(window / 5, r);
      std::map<int, std::size_t> last;
      for (std::size_t i = 0; i < a.steps.size(); ++i) {
        int id = a.steps[i].action.robot;
        auto it = last.find(id);
        std::size_t prev = it == last.end() ? 0 : it->second + 1;
        CHECK(i - prev < bound);
        last[id] = i;
      }
    }
  }
}

TEST_CASE("replay detects tampering")
{
  auto alg = algorithm1();
  auto start = SystemState::initial(Configuration::parse("W|W|W", 9, 2));
  Trace t = run(start, alg, *round_robin(), 100);
  CHECK_NOTHROW(replay(t, alg));
  t.steps[4].digest ^= 1;
  CHECK_THROWS_AS(replay(t, alg), RingError);
}

TEST_CASE("symmetric adversary keeps W|W symmetric until recurrence")
{
  auto alg = algorithm1();
  auto start = SystemState::initial(Configuration::parse("W|W", 8, 1));
  auto adv = symmetric_adversary();
  Trace t = run(start, alg, *adv, 1000);
  CHECK(t.outcome == "recurrence");
  for (const auto& s : t.steps)
    CHECK_FALSE(is_gathered(s.config));
  CHECK(adv->mirror_edge() == 0);
  CHECK_THROWS_AS(run(SystemState::initial(Configuration::parse("W|W|W", 10, 1)), alg, *symmetric_adversary(), 10),
                  RingError);
}

TEST_CASE("state canonicalization (property)")
{
  auto alg = algorithm1();
  std::mt19937_64 rng(3);
  auto start = SystemState::initial(Configuration::parse("W,W|W|_|W|W", 11, 2));
  for (int trial = 0; trial < 50; ++trial) {
    // Random reachable state.
    SystemState s = start;
    const int len = static_cast<int>(rng() % 40);
    for (int k = 0; k < len; ++k) {
      auto succ = successors(s, alg);
      s = succ[rng() % succ.size()].state;
    }
    auto f = canonicalize(s);
    // Rename robots and rotate/reflect the ring.
    const int shift = static_cast<int>(rng() % 11);
    const bool reflect = rng() % 2;
    RingTransform g{shift, reflect};
    std::vector<Robot> robots = s.config.robots();
    std::vector<Phase> phases = s.phases;
    for (std::size_t i = 0; i < robots.size(); ++i) {
      robots[i].node = g.apply(robots[i].node, 11);
      robots[i].id = 100 - robots[i].id;
      phases[i].decision.direction = g.apply_step(phases[i].decision.direction);
    }
    SystemState moved{Configuration(11, 2, robots), phases};
    CHECK(canonicalize(moved) == f);
    CHECK(canonicalize(from_canonical_state(f)) == f);
    auto key = concrete_key(s);
    CHECK(from_concrete_key(11, 2, key) == s);
    CHECK(digest(from_concrete_key(11, 2, key)) == digest(s));
  }
}
