#pragma once

// Persistence: JSON formats for curves, families, and evaluation results;
// JSON-lines event logs; CSV summaries; content hashing for reproducibility.

#include <string>
#include <vector>

#include <json.hpp>

#include "knotstrata/cocycle.hpp"
#include "knotstrata/curve.hpp"
#include "knotstrata/cycle.hpp"
#include "knotstrata/strata.hpp"

namespace knotstrata {
namespace io {

using json = nlohmann::json;

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Curve JSON: {"kind","n","window"|"period","samples":[[t,x1..xn],...]}.
json curve_to_json(const ParamCurve& curve);
ParamCurve curve_from_json(const json& j);

// Family JSON: either {"scenario": name, "params": {...}} or
// {"domain":"circle","grid":[N],"frames":[<curve>...]} (closed frame loop).
// `description` (optional out) receives a short human-readable family label.
KnotCycle family_from_json(const json& j, std::string* description = nullptr);
KnotCycle read_family(const std::string& path,
                      std::string* description = nullptr);
json scenario_family_json(const std::string& name, const json& params);

json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const json& j);

json event_to_json(const Event& e);

// Full result document: class/family labels, config echo, input content hash,
// per-stratum counts, canonically sorted events.
json result_to_json(const EvalResult& result, const std::string& input_hash);

// One Event per line, canonically sorted.
std::string event_log_lines(const EvalResult& result);
// CSV: stratum,count_mod2,count_signed,n_events.
std::string csv_summary(const EvalResult& result);

}  // namespace io
}  // namespace knotstrata
