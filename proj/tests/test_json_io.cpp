#include <doctest.h>

#include "ringgather/json_io.hpp"

#include <json.hpp>

using namespace ringgather;

TEST_CASE("trace JSONL round trip")
{
  auto alg = algorithm2();
  auto s = SystemState::initial(Configuration::parse("W|_|W|W", 12, 2));
  Trace t = run(s, alg, *random_fair(5), 10000);
  std::string text = trace_to_jsonl(t, alg);
  Trace back = trace_from_jsonl(text);
  CHECK(back.steps.size() == t.steps.size());
  CHECK(back.outcome == t.outcome);
  CHECK(trace_to_jsonl(back, alg) == text);

  auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(first["type"] == "init");
  CHECK(first["pattern"] == "W|_|W|W|_|_|_|_|_|_|_|_");
  auto line = text.substr(text.find('\n') + 1);
  auto rec = nlohmann::json::parse(line.substr(0, line.find('\n')));
  for (const char* key : {"step", "robot", "phase", "rule", "dir", "nodes", "d", "ow", "borders", "digest"})
    CHECK(rec.contains(key));
  CHECK(rec["nodes"].size() == 12);
}

TEST_CASE("tampered traces are rejected")
{
  auto alg = algorithm1();
  Trace t = run(SystemState::initial(Configuration::parse("W|W|W", 9, 2)), alg, *round_robin(), 100);
  std::string text = trace_to_jsonl(t, alg);
  auto pos = text.find("\"robot\":0");
  REQUIRE(pos != std::string::npos);
  std::string bad = text;
  bad.replace(pos, 9, "\"robot\":2");
  CHECK_THROWS_AS(trace_from_jsonl(bad), RingError);
  CHECK_THROWS_AS(trace_from_jsonl("not json"), RingError);
  CHECK_THROWS_AS(trace_from_jsonl(""), RingError);
}

TEST_CASE("scripts")
{
  auto s = script_from_json(R"([{"robot": 1, "phase": "look"}, {"robot": 1, "phase": "compute"}])");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Action{1, Step::Look});
  CHECK(s[1] == Action{1, Step::Compute});
  CHECK_THROWS_AS(script_from_json(R"({"robot": 1})"), RingError);
  CHECK_THROWS_AS(script_from_json(R"([{"robot": 1, "phase": "jump"}])"), RingError);
}

TEST_CASE("reports")
{
  auto s = SystemState::initial(Configuration::parse("W|W", 8, 1));
  auto r = check_instance(s, algorithm1(), {});
  auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["verdict"] == "fail");
  CHECK_FALSE(doc.contains("wall_ms"));
  bool found = false;
  for (const auto& p : doc["properties"])
    if (p["name"] == "liveness") {
      found = true;
      CHECK(p["verdict"] == "fail");
      REQUIRE(p.contains("counterexample"));
      Trace t = trace_from_jsonl(p["counterexample"].get<std::string>());
      CHECK(t.steps.size() > 0);
    }
  CHECK(found);
  CHECK(nlohmann::json::parse(report_to_json(r, true)).contains("wall_ms"));
  // Byte-identical without timing.
  CHECK(report_to_json(r) == report_to_json(check_instance(s, algorithm1(), {})));
}
