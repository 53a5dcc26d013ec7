#include "ringgather/json_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace ringgather {

using nlohmann::json;

namespace {

std::string hex(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json nodes_of(const Configuration& c)
{
  json nodes = json::array();
  for (ColorSet s : c.node_colors()) {
    json cell = json::array();
    for (int k = 0; k < kColorCount; ++k)
      if (s.contains(static_cast<Color>(k)))
        cell.push_back(std::string(1, color_letter(static_cast<Color>(k))));
    nodes.push_back(cell);
  }
  return nodes;
}

}  // namespace

std::string trace_to_jsonl(const Trace& trace, const Algorithm& alg)
{
  const Configuration& c = trace.initial.config;
  json robots = json::array();
  for (const auto& r : c.robots())
    robots.push_back({{"id", r.id}, {"node", r.node}, {"color", std::string(1, color_letter(r.color))}});
  json head = {{"type", "init"},     {"algorithm", trace.algorithm}, {"n", c.n()},
               {"phi", c.phi()},     {"pattern", c.pattern()},       {"robots", robots},
               {"nodes", nodes_of(c)}, {"outcome", trace.outcome}};
  std::string out = head.dump() + "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    json rec = {{"step", i},
                {"robot", s.action.robot},
                {"phase", step_name(s.action.step)},
                {"rule", alg.label(s.rule)},
                {"dir", s.direction},
                {"nodes", nodes_of(s.config)},
                {"d", s.d},
                {"ow", s.ow},
                {"borders", s.borders},
                {"digest", hex(s.digest)}};
    out += rec.dump() + "\n";
  }
  return out;
}

Trace trace_from_jsonl(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<json> records;
  try {
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        records.push_back(json::parse(line));
  } catch (const json::exception& e) {
    throw RingError(std::string("malformed trace: ") + e.what());
  }
  if (records.empty() || records[0].value("type", "") != "init")
    throw RingError("malformed trace: missing init record");
  try {
    const json& head = records[0];
    const int n = head.at("n").get<int>();
    const int phi = head.at("phi").get<int>();
    std::vector<Robot> robots;
    for (const auto& r : head.at("robots"))
      robots.push_back(Robot{r.at("id").get<int>(), r.at("node").get<int>(),
                             color_from_letter(r.at("color").get<std::string>().at(0))});
    Algorithm alg = algorithm_by_name(head.at("algorithm").get<std::string>());
    Trace trace{SystemState::initial(Configuration(n, phi, std::move(robots))), alg.name(), {},
                head.value("outcome", "")};
    SystemState state = trace.initial;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const json& rec = records[i];
      Action a{rec.at("robot").get<int>(), step_from_name(rec.at("phase").get<std::string>())};
      if (a.step == Step::Look) {
        Decision d = decide(alg, state.config, a.robot);
        const int dir = rec.value("dir", 0);
        if (d.ambiguous_direction && dir != 0)
          d.direction = dir;
        state = record_look(trace, state, a, d);
      } else {
        state = record(trace, state, alg, a);
      }
      if (hex(trace.steps.back().digest) != rec.at("digest").get<std::string>())
        throw RingError("trace does not replay: digest mismatch at step " + std::to_string(i - 1));
    }
    return trace;
  } catch (const json::exception& e) {
    throw RingError(std::string("malformed trace: ") + e.what());
  }
}

std::vector<Action> script_from_json(const std::string& text)
{
  std::vector<Action> out;
  try {
    json doc = json::parse(text);
    if (!doc.is_array())
      throw RingError("script must be a JSON array");
    for (const auto& item : doc)
      out.push_back(Action{item.at("robot").get<int>(), step_from_name(item.at("phase").get<std::string>())});
  } catch (const json::exception& e) {
    throw RingError(std::string("malformed script: ") + e.what());
  }
  return out;
}

std::string report_to_json(const CheckReport& report, bool timing)
{
  json props = json::array();
  for (const auto& p : report.properties) {
    json j = {{"name", p.name},
              {"verdict", verdict_name(p.verdict)},
              {"violations", p.violations},
              {"detail", p.detail}};
    if (p.cycle_start)
      j["cycle_start"] = *p.cycle_start;
    if (p.counterexample)
      j["counterexample"] = trace_to_jsonl(*p.counterexample, algorithm_by_name(p.counterexample->algorithm));
    props.push_back(std::move(j));
  }
  bool failed = false;
  for (const auto& p : report.properties)
    failed = failed || p.verdict == Verdict::Fail;
  std::string verdict = failed ? "fail" : (report.inconclusive() ? "inconclusive" : "pass");
  json doc = {{"instance", report.instance},
              {"algorithm", report.algorithm},
              {"states", report.states},
              {"edges", report.edges},
              {"verdict", verdict},
              {"properties", props}};
  if (timing)
    doc["wall_ms"] = report.wall_ms;
  return doc.dump(2) + "\n";
}

}  // namespace ringgather
