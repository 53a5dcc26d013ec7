// Trace JSONL, scripted schedules and check reports on disk.

#pragma once

#include "ringgather/checker.hpp"

#include <string>
#include <vector>

namespace ringgather {

// First line describes the initial state, then one record per action:
// {"step","robot","phase","rule","dir","nodes","d","ow","borders","digest"}.
std::string trace_to_jsonl(const Trace& trace, const Algorithm& alg);

// Parses and replays a trace; throws RingError on malformed input or when the
// recorded digests do not replay.
Trace trace_from_jsonl(const std::string& text);

// [{"robot": 0, "phase": "look"}, ...]
std::vector<Action> script_from_json(const std::string& text);

// Single JSON document; counterexamples are embedded as JSONL strings.
// Wall time is included only when `timing` is set so reports stay stable.
std::string report_to_json(const CheckReport& report, bool timing = false);

}  // namespace ringgather
