// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringgather/ringgather.h"

#include <string>

namespace {

std::string take(char* s)
{
  std::string out = s ? s : "";
  rg_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("configurations")
{
  rg_config* c = nullptr;
  REQUIRE(rg_config_parse("W|_|_|W|_|W|W", 20, 3, &c) == RG_OK);
  rg_config_info info;
  REQUIRE(rg_config_describe(c, &info) == RG_OK);
  CHECK(info.n == 20);
  CHECK(info.robots == 4);
  CHECK(info.borders == 2);
  CHECK(info.connected == 1);
  CHECK(info.m == 7);
  CHECK(info.o == 4);
  char* pattern = nullptr;
  REQUIRE(rg_config_pattern(c, &pattern) == RG_OK);
  CHECK(take(pattern).substr(0, 13) == "W|_|_|W|_|W|W");
  char* v = nullptr;
  REQUIRE(rg_config_validate(c, "any", &v) == RG_OK);
  CHECK(take(v).empty());
  REQUIRE(rg_config_validate(c, "m-odd", &v) == RG_OK);
  CHECK(take(v).empty());
  CHECK(rg_config_validate(c, "bogus", &v) == RG_INVALID);
  rg_config_free(c);

  rg_config* bad = nullptr;
  CHECK(rg_config_parse("W|X", 0, 1, &bad) == RG_INVALID);
  CHECK(std::string(rg_last_error()).find("color") != std::string::npos);
  CHECK(bad == nullptr);
}

TEST_CASE("simulate and replay")
{
  rg_config* c = nullptr;
  rg_algorithm* a = nullptr;
  REQUIRE(rg_config_parse("W|W|W", 9, 2, &c) == RG_OK);
  REQUIRE(rg_algorithm_new("alg1", 0, &a) == RG_OK);
  rg_simulate_options o;
  rg_simulate_options_default(&o);
  char* trace = nullptr;
  char* outcome = nullptr;
  CHECK(rg_simulate(c, a, &o, &trace, &outcome) == RG_OK);
  CHECK(take(outcome) == "gathered");
  std::string text = take(trace);
  char* final_pattern = nullptr;
  CHECK(rg_replay(text.c_str(), &final_pattern) == RG_OK);
  CHECK(take(final_pattern).find(',') != std::string::npos);

  o.scheduler = RG_SCHED_RANDOM;
  CHECK(rg_simulate(c, a, &o, nullptr, nullptr) == RG_INVALID);
  o.has_seed = 1;
  o.seed = 9;
  CHECK(rg_simulate(c, a, &o, nullptr, nullptr) == RG_OK);
  o.max_steps = 2;
  CHECK(rg_simulate(c, a, &o, nullptr, &outcome) == RG_NOT_GATHERED);
  CHECK(take(outcome) == "step-limit");

  o.scheduler = RG_SCHED_SCRIPT;
  o.script_json = R"([{"robot":0,"phase":"look"},{"robot":0,"phase":"compute"}])";
  o.max_steps = 100;
  CHECK(rg_simulate(c, a, &o, nullptr, &outcome) == RG_NOT_GATHERED);
  CHECK(take(outcome) == "scheduler-end");
  o.script_json = R"([{"robot":0,"phase":"move"}])";
  CHECK(rg_simulate(c, a, &o, nullptr, nullptr) == RG_INVALID);
  rg_algorithm_free(a);

  rg_algorithm* a2 = nullptr;
  REQUIRE(rg_algorithm_new("alg2", 0, &a2) == RG_OK);
  rg_config* low = nullptr;
  REQUIRE(rg_config_parse("W|W|W", 9, 1, &low) == RG_OK);
  rg_simulate_options_default(&o);
  CHECK(rg_simulate(low, a2, &o, nullptr, nullptr) == RG_INVALID);
  CHECK(std::string(rg_last_error()) == "alg2 requires phi>=2");
  rg_config_free(low);
  rg_algorithm_free(a2);
  rg_config_free(c);
}

TEST_CASE("check, demo, enumerate, dump")
{
  rg_algorithm* a = nullptr;
  REQUIRE(rg_algorithm_new("alg1", 0, &a) == RG_OK);
  rg_check_options o;
  rg_check_options_default(&o);

  rg_config* good = nullptr;
  REQUIRE(rg_config_parse("W|W|W", 9, 2, &good) == RG_OK);
  char* report = nullptr;
  CHECK(rg_check(good, a, &o, &report) == RG_OK);
  CHECK(take(report).find("\"verdict\": \"pass\"") != std::string::npos);
  o.state_budget = 10;
  CHECK(rg_check(good, a, &o, nullptr) == RG_INCONCLUSIVE);
  rg_check_options_default(&o);

  rg_config* pair = nullptr;
  REQUIRE(rg_config_parse("W|W", 8, 1, &pair) == RG_OK);
  CHECK(rg_check(pair, a, &o, &report) == RG_FAIL);
  CHECK(take(report).find("counterexample") != std::string::npos);
  CHECK(rg_demo("symmetric", pair, a, 10000, &report) == RG_OK);
  take(report);
  rg_config* lopsided = nullptr;
  REQUIRE(rg_config_parse("W|W|W", 10, 2, &lopsided) == RG_OK);
  CHECK(rg_demo("symmetric", lopsided, a, 10000, nullptr) == RG_INVALID);
  rg_config_free(lopsided);
  CHECK(rg_demo("teleport", pair, a, 0, nullptr) == RG_INVALID);

  rg_enum_filter f;
  rg_enum_filter_default(&f);
  f.n_min = f.n_max = 5;
  f.phi = 1;
  f.towers_allowed = 0;
  f.parity = "m-odd";
  char* patterns = nullptr;
  REQUIRE(rg_enumerate(&f, &patterns) == RG_OK);
  CHECK(take(patterns).find("W|W|W|_|_\n") != std::string::npos);
  f.parity = "m-even-o-odd";
  CHECK(rg_enumerate(&f, nullptr) == RG_INVALID);

  char* dump = nullptr;
  REQUIRE(rg_algorithm_dump(a, &dump) == RG_OK);
  CHECK(take(dump).rfind("# alg1", 0) == 0);
  rg_config_free(good);
  rg_config_free(pair);
  rg_algorithm_free(a);
  CHECK(rg_algorithm_new("alg9", 0, &a) == RG_INVALID);
}
