// ringgather: simulate | check | enumerate | demo | dump-rules

#include "ringgather/ringgather.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kInvalid = 2;

struct Owned
{
  char* p = nullptr;
  ~Owned() { rg_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Common
{
  std::string alg = "alg1";
  int phi = 1;
  int n = 0;
  std::string pattern;
  bool strict = false;
};

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("--alg", c.alg, "alg1 or alg2")->check(CLI::IsMember({"alg1", "alg2"}));
  cmd->add_option("--phi", c.phi, "visibility radius")->required();
  cmd->add_option("--n", c.n, "ring size (default: pattern length)");
  cmd->add_option("--pattern", c.pattern, "placement, e.g. \"W|_|W,W\"")->required();
  cmd->add_flag("--strict-question-mark", c.strict, "read '?' in rules as non-empty");
}

int error(const std::string& what)
{
  std::cerr << "error: " << what << "\n";
  return kInvalid;
}

// Loads configuration and algorithm; returns 0 or an exit code.
int load(const Common& c, rg_config** config, rg_algorithm** alg)
{
  if (rg_config_parse(c.pattern.c_str(), c.n, c.phi, config) != RG_OK)
    return error(rg_last_error());
  if (rg_algorithm_new(c.alg.c_str(), c.strict, alg) != RG_OK) {
    rg_config_free(*config);
    return error(rg_last_error());
  }
  return 0;
}

bool write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

bool read_file(const std::string& path, std::string& text)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

// Prints one summary line per property from a report.
void summarize(const std::string& report)
{
  // The report is pretty-printed JSON; keep the CLI free of a JSON parser by
  // echoing the verdict lines.
  std::istringstream in(report);
  std::string line;
  std::string name;
  while (std::getline(in, line)) {
    auto key = line.find("\"name\": ");
    if (key != std::string::npos)
      name = line.substr(key + 9, line.rfind('"') - key - 9);
    auto v = line.find("\"verdict\": ");
    if (v != std::string::npos && !name.empty()) {
      std::cout << "  " << name << ": " << line.substr(v + 12, line.rfind('"') - v - 12) << "\n";
      name.clear();
    }
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Gathering of luminous myopic robots on rings"};
  app.require_subcommand(1);

  // simulate
  Common sim;
  std::string sched = "rr";
  std::uint64_t seed = 0;
  std::string script_path, sim_out;
  std::uint64_t max_steps = 100000;
  auto* simulate = app.add_subcommand("simulate", "run one execution and write a trace");
  add_common(simulate, sim);
  simulate->add_option("--sched", sched, "rr | random | sync | script | symmetric")
      ->check(CLI::IsMember({"rr", "random", "sync", "script", "symmetric"}));
  auto* seed_opt = simulate->add_option("--seed", seed, "seed for --sched random");
  simulate->add_option("--script", script_path, "JSON schedule for --sched script");
  simulate->add_option("--max-steps", max_steps, "action limit");
  simulate->add_option("--out", sim_out, "trace JSONL path (default: stdout)");

  // check
  Common chk;
  std::uint64_t budget = 5'000'000;
  int workers = 1;
  bool no_symmetry = false, timing = false;
  bool only_safety = false, only_liveness = false, only_parity = false, only_mega = false, only_lemma2 = false;
  std::string chk_out, trace_path;
  auto* check = app.add_subcommand("check", "explore every interleaving and check properties");
  add_common(check, chk);
  check->add_option("--budget", budget, "state budget");
  check->add_option("--workers", workers, "exploration threads")->check(CLI::PositiveNumber);
  check->add_flag("--no-symmetry", no_symmetry, "explore concrete states only");
  check->add_flag("--safety", only_safety, "select safety invariants");
  check->add_flag("--liveness", only_liveness, "select liveness");
  check->add_flag("--parity", only_parity, "select border color parity");
  check->add_flag("--megacycles", only_mega, "select mega-cycle monotonicity");
  check->add_flag("--lemma2", only_lemma2, "select singly-colored convergence");
  check->add_flag("--timing", timing, "record wall time in the report");
  check->add_option("--out", chk_out, "report JSON path (default: stdout)");

  auto* check_trace = app.add_subcommand("check-trace", "parity and mega-cycle checks along a trace");
  check_trace->add_option("trace", trace_path, "trace JSONL")->required();

  // enumerate
  int en_n = 0, en_n_min = 0, en_n_max = 0, en_phi = 1, r_min = 2, r_max = 5, tower_cap = 3;
  std::string parity = "any";
  bool towerless = false, no_dedup = false, count_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "list valid initial configurations");
  enumerate->add_option("--n", en_n, "ring size");
  enumerate->add_option("--n-min", en_n_min, "smallest ring size");
  enumerate->add_option("--n-max", en_n_max, "largest ring size");
  enumerate->add_option("--phi", en_phi, "visibility radius")->required();
  enumerate->add_option("--r-min", r_min, "fewest robots");
  enumerate->add_option("--r-max", r_max, "most robots");
  enumerate->add_option("--tower-cap", tower_cap, "robots per node");
  enumerate->add_option("--parity", parity, "m-odd | m-even-o-odd | any")
      ->check(CLI::IsMember({"m-odd", "m-even-o-odd", "any"}));
  enumerate->add_flag("--towerless", towerless, "one robot per node");
  enumerate->add_flag("--no-dedup", no_dedup, "keep rotations and reflections");
  enumerate->add_flag("--count", count_only, "print only the number of configurations");

  // demo
  Common demo_c;
  std::string kind;
  std::uint64_t bound = 0;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo", "impossibility demonstrations");
  demo->add_option("kind", kind, "symmetric | multiborder")
      ->required()
      ->check(CLI::IsMember({"symmetric", "multiborder"}));
  add_common(demo, demo_c);
  demo->add_option("--bound", bound, "step bound (symmetric) or state budget (multiborder)");
  demo->add_option("--out", demo_out, "report JSON path (default: stdout)");

  // dump-rules
  std::string dump_alg = "alg1";
  bool dump_strict = false;
  auto* dump = app.add_subcommand("dump-rules", "print a rule table");
  dump->add_option("--alg", dump_alg, "alg1 or alg2")->check(CLI::IsMember({"alg1", "alg2"}));
  dump->add_flag("--strict-question-mark", dump_strict, "read '?' in rules as non-empty");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  if (*simulate) {
    rg_config* config = nullptr;
    rg_algorithm* alg = nullptr;
    if (int rc = load(sim, &config, &alg))
      return rc;
    rg_simulate_options o;
    rg_simulate_options_default(&o);
    o.max_steps = max_steps;
    std::string script;
    if (sched == "rr")
      o.scheduler = RG_SCHED_ROUND_ROBIN;
    else if (sched == "random") {
      o.scheduler = RG_SCHED_RANDOM;
      if (seed_opt->count() == 0) {
        rg_config_free(config);
        rg_algorithm_free(alg);
        return error("--sched random requires --seed");
      }
      o.has_seed = 1;
      o.seed = seed;
    } else if (sched == "sync")
      o.scheduler = RG_SCHED_SYNC;
    else if (sched == "symmetric")
      o.scheduler = RG_SCHED_SYMMETRIC;
    else {
      o.scheduler = RG_SCHED_SCRIPT;
      if (script_path.empty() || !read_file(script_path, script)) {
        rg_config_free(config);
        rg_algorithm_free(alg);
        return error("--sched script requires a readable --script file");
      }
      o.script_json = script.c_str();
    }
    Owned trace, outcome;
    rg_status st = rg_simulate(config, alg, &o, &trace.p, &outcome.p);
    rg_config_free(config);
    rg_algorithm_free(alg);
    if (st != RG_OK && st != RG_NOT_GATHERED)
      return error(rg_last_error());
    if (sim_out.empty())
      std::cout << trace.str();
    else if (!write_file(sim_out, trace.str()))
      return error("cannot write " + sim_out);
    std::cerr << outcome.str() << "\n";
    return st;
  }

  if (*check) {
    rg_config* config = nullptr;
    rg_algorithm* alg = nullptr;
    if (int rc = load(chk, &config, &alg))
      return rc;
    rg_check_options o;
    rg_check_options_default(&o);
    o.state_budget = budget;
    o.workers = workers;
    o.symmetry_reduction = !no_symmetry;
    o.timing = timing;
    if (only_safety || only_liveness || only_parity || only_mega || only_lemma2) {
      o.safety = only_safety;
      o.liveness = only_liveness;
      o.parity = only_parity;
      o.megacycles = only_mega;
      o.lemma2 = only_lemma2;
    }
    Owned report;
    rg_status st = rg_check(config, alg, &o, &report.p);
    rg_config_free(config);
    rg_algorithm_free(alg);
    if (st != RG_OK && st != RG_FAIL && st != RG_INCONCLUSIVE)
      return error(rg_last_error());
    if (chk_out.empty())
      std::cout << report.str();
    else if (!write_file(chk_out, report.str()))
      return error("cannot write " + chk_out);
    std::cerr << (st == RG_OK ? "pass" : st == RG_FAIL ? "fail" : "inconclusive") << "\n";
    if (!chk_out.empty())
      summarize(report.str());
    return st;
  }

  if (*check_trace) {
    std::string text;
    if (!read_file(trace_path, text))
      return error("cannot read " + trace_path);
    Owned report;
    rg_status st = rg_check_trace(text.c_str(), &report.p);
    if (st != RG_OK && st != RG_FAIL)
      return error(rg_last_error());
    std::cout << report.str();
    return st;
  }

  if (*enumerate) {
    rg_enum_filter f;
    rg_enum_filter_default(&f);
    f.n_min = en_n_min ? en_n_min : en_n;
    f.n_max = en_n_max ? en_n_max : en_n;
    if (f.n_min == 0 || f.n_max == 0)
      return error("give --n or --n-min/--n-max");
    f.phi = en_phi;
    f.r_min = r_min;
    f.r_max = r_max;
    f.towers_allowed = !towerless;
    f.tower_cap = tower_cap;
    f.parity = parity.c_str();
    f.dedup = !no_dedup;
    Owned patterns;
    if (rg_enumerate(&f, &patterns.p) != RG_OK)
      return error(rg_last_error());
    if (count_only) {
      std::string s = patterns.str();
      std::cout << std::count(s.begin(), s.end(), '\n') << "\n";
    } else {
      std::cout << patterns.str();
    }
    return 0;
  }

  if (*demo) {
    rg_config* config = nullptr;
    rg_algorithm* alg = nullptr;
    if (int rc = load(demo_c, &config, &alg))
      return rc;
    if (bound == 0 && kind == "symmetric")
      bound = 100000;
    Owned report;
    rg_status st = rg_demo(kind.c_str(), config, alg, bound, &report.p);
    rg_config_free(config);
    rg_algorithm_free(alg);
    if (st != RG_OK && st != RG_FAIL && st != RG_INCONCLUSIVE)
      return error(rg_last_error());
    if (demo_out.empty())
      std::cout << report.str();
    else if (!write_file(demo_out, report.str()))
      return error("cannot write " + demo_out);
    std::cerr << (st == RG_OK ? "exhibited" : st == RG_FAIL ? "not exhibited" : "inconclusive") << "\n";
    return st;
  }

  if (*dump) {
    rg_algorithm* alg = nullptr;
    if (rg_algorithm_new(dump_alg.c_str(), dump_strict, &alg) != RG_OK)
      return error(rg_last_error());
    Owned text;
    rg_algorithm_dump(alg, &text.p);
    rg_algorithm_free(alg);
    std::cout << text.str();
    return 0;
  }
  return 0;
}
