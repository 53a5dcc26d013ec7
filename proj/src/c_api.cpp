#include "ringgather/ringgather.h"

#include "ringgather/configspace.hpp"
#include "ringgather/json_io.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct rg_config
{
  ringgather::Configuration config;
};

struct rg_algorithm
{
  ringgather::Algorithm alg;
};

namespace {

thread_local std::string last_error;

rg_status fail(rg_status s, const std::string& msg)
{
  last_error = msg;
  return s;
}

char* dup(const std::string& s)
{
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out)
    std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s)
{
  if (out)
    *out = dup(s);
}

template <class F>
rg_status guarded(F&& body)
{
  last_error.clear();
  try {
    return body();
  } catch (const ringgather::RingError& e) {
    return fail(RG_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(RG_INTERNAL, e.what());
  } catch (...) {
    return fail(RG_INTERNAL, "unknown error");
  }
}

void require_phi(const ringgather::Configuration& c, const ringgather::Algorithm& alg)
{
  if (c.phi() < alg.min_phi())
    throw ringgather::RingError(alg.name() + " requires phi>=" + std::to_string(alg.min_phi()));
}

}  // namespace

extern "C" {

const char* rg_last_error(void) { return last_error.c_str(); }

void rg_string_free(char* s) { std::free(s); }

rg_status rg_config_parse(const char* pattern, int n, int phi, rg_config** out)
{
  return guarded([&] {
    if (!pattern || !out)
      return fail(RG_INVALID, "null argument");
    *out = new rg_config{ringgather::Configuration::parse(pattern, n, phi)};
    return RG_OK;
  });
}

void rg_config_free(rg_config* config) { delete config; }

rg_status rg_config_pattern(const rg_config* config, char** out)
{
  return guarded([&] {
    if (!config)
      return fail(RG_INVALID, "null configuration");
    put(out, config->config.pattern());
    return RG_OK;
  });
}

rg_status rg_config_describe(const rg_config* config, rg_config_info* out)
{
  return guarded([&] {
    if (!config || !out)
      return fail(RG_INVALID, "null argument");
    const auto& c = config->config;
    rg_config_info info{};
    info.n = c.n();
    info.phi = c.phi();
    info.robots = static_cast<int>(c.robot_count());
    info.borders = static_cast<int>(ringgather::borders(c).size());
    info.gathered = ringgather::is_gathered(c);
    info.connected = ringgather::visibility_connected(c);
    info.edge_symmetric = ringgather::is_edge_view_symmetric(c);
    info.m = info.o = info.d = info.h_inner = info.h_max = -1;
    try {
      auto m = ringgather::metrics(c);
      info.m = m.m;
      info.o = m.o;
      info.d = m.d;
      info.h_inner = m.h_inner;
      info.h_max = m.h_max;
    } catch (const ringgather::RingError&) {
    }
    *out = info;
    return RG_OK;
  });
}

rg_status rg_config_validate(const rg_config* config, const char* parity, char** out)
{
  return guarded([&] {
    if (!config)
      return fail(RG_INVALID, "null configuration");
    auto v = ringgather::validate_initial(config->config, ringgather::parity_from_name(parity ? parity : "any"));
    std::string text;
    for (const auto& line : v)
      text += line + "\n";
    put(out, text);
    return RG_OK;
  });
}

rg_status rg_algorithm_new(const char* name, int strict_question_mark, rg_algorithm** out)
{
  return guarded([&] {
    if (!name || !out)
      return fail(RG_INVALID, "null argument");
    auto q = strict_question_mark ? ringgather::QuestionMark::NonEmpty : ringgather::QuestionMark::Wildcard;
    *out = new rg_algorithm{ringgather::algorithm_by_name(name, q)};
    return RG_OK;
  });
}

void rg_algorithm_free(rg_algorithm* alg) { delete alg; }

rg_status rg_algorithm_dump(const rg_algorithm* alg, char** out)
{
  return guarded([&] {
    if (!alg)
      return fail(RG_INVALID, "null algorithm");
    put(out, alg->alg.dump());
    return RG_OK;
  });
}

void rg_simulate_options_default(rg_simulate_options* opts)
{
  if (!opts)
    return;
  opts->scheduler = RG_SCHED_ROUND_ROBIN;
  opts->has_seed = 0;
  opts->seed = 0;
  opts->script_json = nullptr;
  opts->max_steps = 100000;
}

rg_status rg_simulate(const rg_config* config, const rg_algorithm* alg, const rg_simulate_options* opts,
                      char** trace_jsonl, char** outcome)
{
  return guarded([&] {
    if (!config || !alg)
      return fail(RG_INVALID, "null argument");
    rg_simulate_options o;
    rg_simulate_options_default(&o);
    if (opts)
      o = *opts;
    require_phi(config->config, alg->alg);
    std::unique_ptr<ringgather::Scheduler> sched;
    switch (o.scheduler) {
      case RG_SCHED_ROUND_ROBIN: sched = ringgather::round_robin(); break;
      case RG_SCHED_RANDOM:
        if (!o.has_seed)
          return fail(RG_INVALID, "the random scheduler needs an explicit seed");
        sched = ringgather::random_fair(o.seed);
        break;
      case RG_SCHED_SYNC: sched = ringgather::synchronous(); break;
      case RG_SCHED_SCRIPT:
        if (!o.script_json)
          return fail(RG_INVALID, "the script scheduler needs a script");
        sched = ringgather::scripted(ringgather::script_from_json(o.script_json));
        break;
      case RG_SCHED_SYMMETRIC:
        if (!ringgather::is_edge_view_symmetric(config->config))
          return fail(RG_INVALID, "configuration is not edge-view-symmetric");
        sched = ringgather::symmetric_adversary();
        break;
      default: return fail(RG_INVALID, "unknown scheduler");
    }
    auto trace = ringgather::run(ringgather::SystemState::initial(config->config), alg->alg, *sched,
                                 static_cast<std::size_t>(o.max_steps));
    put(trace_jsonl, ringgather::trace_to_jsonl(trace, alg->alg));
    put(outcome, trace.outcome);
    return trace.outcome == "gathered" ? RG_OK : RG_NOT_GATHERED;
  });
}

rg_status rg_replay(const char* trace_jsonl, char** final_pattern)
{
  return guarded([&] {
    if (!trace_jsonl)
      return fail(RG_INVALID, "null trace");
    auto trace = ringgather::trace_from_jsonl(trace_jsonl);
    put(final_pattern, trace.steps.empty() ? trace.initial.config.pattern() : trace.steps.back().config.pattern());
    return RG_OK;
  });
}

void rg_check_options_default(rg_check_options* opts)
{
  if (!opts)
    return;
  ringgather::ExploreOptions e;
  opts->state_budget = e.state_budget;
  opts->workers = 1;
  opts->symmetry_reduction = 1;
  opts->safety = opts->liveness = opts->parity = opts->megacycles = opts->lemma2 = 1;
  opts->timing = 0;
}

namespace {

rg_status status_of(const ringgather::CheckReport& r)
{
  for (const auto& p : r.properties)
    if (p.verdict == ringgather::Verdict::Fail)
      return RG_FAIL;
  return r.inconclusive() ? RG_INCONCLUSIVE : RG_OK;
}

}  // namespace

rg_status rg_check(const rg_config* config, const rg_algorithm* alg, const rg_check_options* opts,
                   char** report_json)
{
  return guarded([&] {
    if (!config || !alg)
      return fail(RG_INVALID, "null argument");
    rg_check_options o;
    rg_check_options_default(&o);
    if (opts)
      o = *opts;
    require_phi(config->config, alg->alg);
    ringgather::ExploreOptions e;
    e.state_budget = static_cast<std::size_t>(o.state_budget);
    e.workers = o.workers;
    e.reduction = o.symmetry_reduction ? ringgather::Reduction::Symmetric : ringgather::Reduction::None;
    ringgather::CheckSelection sel;
    sel.safety = o.safety;
    sel.liveness = o.liveness;
    sel.parity = o.parity;
    sel.megacycles = o.megacycles;
    sel.lemma2 = o.lemma2;
    auto report = ringgather::check_instance(ringgather::SystemState::initial(config->config), alg->alg, e, sel);
    put(report_json, ringgather::report_to_json(report, o.timing));
    return status_of(report);
  });
}

rg_status rg_check_trace(const char* trace_jsonl, char** report_json)
{
  return guarded([&] {
    if (!trace_jsonl)
      return fail(RG_INVALID, "null trace");
    auto trace = ringgather::trace_from_jsonl(trace_jsonl);
    auto alg = ringgather::algorithm_by_name(trace.algorithm);
    auto report = ringgather::check_parity(trace, alg);
    report.merge(ringgather::check_megacycles(trace, alg));
    put(report_json, ringgather::report_to_json(report));
    return status_of(report);
  });
}

rg_status rg_demo(const char* kind, const rg_config* config, const rg_algorithm* alg, uint64_t bound,
                  char** report_json)
{
  return guarded([&] {
    if (!kind || !config || !alg)
      return fail(RG_INVALID, "null argument");
    require_phi(config->config, alg->alg);
    ringgather::CheckReport report;
    const std::string k = kind;
    if (k == "symmetric") {
      report = ringgather::demo_symmetric(config->config, alg->alg, static_cast<std::size_t>(bound));
    } else if (k == "multiborder") {
      ringgather::ExploreOptions e;
      if (bound > 0)
        e.state_budget = static_cast<std::size_t>(bound);
      report = ringgather::demo_multiborder(config->config, alg->alg, e);
    } else {
      return fail(RG_INVALID, "unknown demo '" + k + "'");
    }
    put(report_json, ringgather::report_to_json(report));
    return status_of(report);
  });
}

void rg_enum_filter_default(rg_enum_filter* filter)
{
  if (!filter)
    return;
  ringgather::InitFilter f;
  filter->n_min = f.n_range.first;
  filter->n_max = f.n_range.second;
  filter->r_min = f.r_range.first;
  filter->r_max = f.r_range.second;
  filter->phi = f.phi;
  filter->towers_allowed = f.towers_allowed;
  filter->tower_cap = f.tower_cap;
  filter->parity = "any";
  filter->dedup = f.dedup;
}

rg_status rg_enumerate(const rg_enum_filter* filter, char** patterns)
{
  return guarded([&] {
    if (!filter)
      return fail(RG_INVALID, "null filter");
    ringgather::InitFilter f;
    f.n_range = {filter->n_min, filter->n_max};
    f.r_range = {filter->r_min, filter->r_max};
    f.phi = filter->phi;
    f.towers_allowed = filter->towers_allowed;
    f.tower_cap = filter->tower_cap;
    f.parity = ringgather::parity_from_name(filter->parity ? filter->parity : "any");
    f.dedup = filter->dedup;
    std::string text;
    ringgather::enumerate_initial(f, [&](const ringgather::Configuration& c) { text += c.pattern() + "\n"; });
    put(patterns, text);
    return RG_OK;
  });
}

}  // extern "C"
