#include <doctest.h>

#include "ringgather/configspace.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace ringgather;

namespace {

std::vector<int> occupied(const Configuration& c) { return c.occupied_nodes(); }

bool has_occupancy(const std::vector<Configuration>& list, std::vector<int> nodes)
{
  for (const auto& c : list) {
    auto f = canonicalize(c);
    std::vector<Robot> robots;
    for (int u : nodes)
      robots.push_back(Robot{static_cast<int>(robots.size()), u, Color::White});
    if (f == canonicalize(Configuration(c.n(), c.phi(), robots)))
      return true;
  }
  return false;
}

InitFilter filter(int n, int phi, Parity parity, bool towers = false)
{
  InitFilter f;
  f.n_range = {n, n};
  f.r_range = {1, n};
  f.phi = phi;
  f.towers_allowed = towers;
  f.parity = parity;
  return f;
}

}  // namespace

TEST_CASE("enumeration examples")
{
  auto small = enumerate_initial(filter(5, 1, Parity::MOdd));
  CHECK(has_occupancy(small, {0, 1, 2}));
  auto f = filter(12, 2, Parity::MEvenOOdd);
  f.r_range = {1, 5};
  auto twelve = enumerate_initial(f);
  CHECK(has_occupancy(twelve, {0, 2, 3}));
}

TEST_CASE("enumeration matches a brute-force filter")
{
  for (int n = 4; n <= 9; ++n)
    for (int phi = 1; phi <= 3; ++phi)
      for (Parity p : {Parity::MOdd, Parity::MEvenOOdd, Parity::Any}) {
        if (p == Parity::MEvenOOdd && phi < 2)
          continue;
        CAPTURE(n);
        CAPTURE(phi);
        auto got = enumerate_initial(filter(n, phi, p));
        auto want = oracle::brute_force_initial(n, phi, p);
        CHECK(got.size() == want.size());
        for (const auto& nodes : want)
          CHECK(has_occupancy(got, nodes));
      }
}

TEST_CASE("emitted configurations re-validate and dedup is sound")
{
  InitFilter f;
  f.n_range = {5, 8};
  f.r_range = {2, 5};
  f.phi = 2;
  f.tower_cap = 2;
  auto with = enumerate_initial(f);
  for (const auto& c : with)
    CHECK(validate_initial(c, f.parity).empty());
  f.dedup = false;
  auto without = enumerate_initial(f);
  CHECK(without.size() >= with.size());
  std::set<CanonicalForm> a, b;
  for (const auto& c : with)
    CHECK(a.insert(canonicalize(c)).second);  // no duplicates
  for (const auto& c : without)
    b.insert(canonicalize(c));
  CHECK(a == b);
}

TEST_CASE("towers respect the cap and the robot range")
{
  InitFilter f;
  f.n_range = {6, 6};
  f.r_range = {4, 4};
  f.phi = 1;
  f.tower_cap = 2;
  f.parity = Parity::MOdd;
  for (const auto& c : enumerate_initial(f)) {
    CHECK(c.robot_count() == 4);
    for (int k : c.robots_per_node())
      CHECK(k <= 2);
  }
  f.towers_allowed = false;
  for (const auto& c : enumerate_initial(f))
    for (int k : c.robots_per_node())
      CHECK(k <= 1);
}

TEST_CASE("parity classes are disjoint")
{
  for (int n = 5; n <= 10; ++n) {
    std::set<CanonicalForm> odd;
    for (const auto& c : enumerate_initial(filter(n, 2, Parity::MOdd)))
      odd.insert(canonicalize(c));
    for (const auto& c : enumerate_initial(filter(n, 2, Parity::MEvenOOdd)))
      CHECK(odd.count(canonicalize(c)) == 0);
  }
}

TEST_CASE("validation messages")
{
  auto far = Configuration::parse("W|_|_|_|W", 12, 2);
  auto v = validate_initial(far, Parity::Any);
  CHECK(std::find(v.begin(), v.end(), "visibility graph disconnected") != v.end());
  auto pair = Configuration::parse("W|W", 8, 1);
  auto p = validate_initial(pair, Parity::MOdd);
  CHECK(std::find(p.begin(), p.end(), "M_init even") != p.end());
  CHECK(validate_initial(Configuration::parse("W|_|_|W|_|W|W", 20, 3), Parity::Any).empty());
  CHECK_FALSE(validate_initial(Configuration::parse("W|R|W", 9, 1), Parity::Any).empty());
  CHECK_FALSE(validate_initial(Configuration::parse("W,W", 9, 1), Parity::Any).empty());
}

TEST_CASE("invalid filters")
{
  auto f = filter(6, 1, Parity::MEvenOOdd);
  CHECK_THROWS_AS(enumerate_initial(f), RingError);
  f = filter(6, 2, Parity::Any);
  f.n_range = {7, 6};
  CHECK_THROWS_AS(enumerate_initial(f), RingError);
  CHECK_THROWS_AS(parity_from_name("even"), RingError);
  CHECK(parity_from_name("m-even-o-odd") == Parity::MEvenOOdd);
}
