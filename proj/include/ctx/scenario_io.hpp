#pragma once

#include <string>

#include "ctx/contextuality.hpp"
#include "ctx/optimizer.hpp"

namespace ctx {

/// Scenario JSON schema:
///   { "n_qubits": int,
///     "observables": [expr, expr, expr, expr],
///     "state": expr | "canonical",
///     "aux": { "1": [expr...], ... },          // optional
///     "optimizer": { "dim":, "scheme":, ... }  // optional stanza
///   }
/// Expressions use the operator grammar of OperatorExpr::parse.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

SearchConfig search_config_from_json(const std::string& text);
std::string search_result_to_json(const SearchResult& r, const SearchConfig& c);

std::string report_to_json(const ViolationReport& r);
std::string report_to_csv(const ViolationReport& r);  // with header line

}  // namespace ctx
