#include "ctx/scenario_io.hpp"

#include <cstdio>

#include <json.hpp>

#include "ctx/pauli.hpp"

namespace ctx {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what(), 0);
  }
  if (!j.contains("n_qubits") || !j["n_qubits"].is_number_integer())
    throw ParseError("scenario JSON: missing integer n_qubits", 0);
  const int n = j["n_qubits"].get<int>();
  if (n < 1 || n > 6) throw ParseError("scenario JSON: n_qubits out of range", 0);

  if (!j.contains("observables") || !j["observables"].is_array() ||
      j["observables"].size() != 4)
    throw ParseError("scenario JSON: observables must list four expressions", 0);

  std::array<DichotomicObservable, 4> obs;
  for (int i = 0; i < 4; ++i) {
    auto e = OperatorExpr::parse(j["observables"][i].get<std::string>());
    if (e.n_qubits() != n)
      throw ParseError("scenario JSON: observable qubit count mismatch", 0);
    obs[i] = eigen_partition(e.to_dense());
  }

  DensityMatrix state = [&] {
    if (!j.contains("state") || j["state"] == "canonical") {
      if (n != 2 && n != 3)
        throw ParseError("scenario JSON: canonical state exists for n in {2, 3}", 0);
      return canonical_scenario(n).state;
    }
    auto e = OperatorExpr::parse(j["state"].get<std::string>());
    if (e.n_qubits() != n) throw ParseError("scenario JSON: state qubit count mismatch", 0);
    return DensityMatrix::validated(e.to_dense());
  }();

  Scenario s{obs, state, {}};
  if (j.contains("aux")) {
    for (const auto& [key, val] : j["aux"].items()) {
      const int idx = std::stoi(key);
      if (idx < 1 || idx > 4) throw ParseError("scenario JSON: aux index out of range", 0);
      std::vector<Matrix> ops;
      for (const auto& expr_text : val)
        ops.push_back(OperatorExpr::parse(expr_text.get<std::string>()).to_dense());
      s.db_aux[idx] = std::move(ops);
    }
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  int n = 0;
  while ((1 << n) < s.dim()) ++n;
  j["n_qubits"] = n;
  j["observables"] = json::array();
  for (const auto& o : s.observables)
    j["observables"].push_back(OperatorExpr::from_dense(o.op).str());
  j["state"] = OperatorExpr::from_dense(s.state.matrix()).str();
  if (!s.db_aux.empty()) {
    ordered_json aux;
    for (const auto& [idx, ops] : s.db_aux) {
      json arr = json::array();
      for (const auto& op : ops) arr.push_back(OperatorExpr::from_dense(op).str());
      aux[std::to_string(idx)] = arr;
    }
    j["aux"] = aux;
  }
  return j.dump(2);
}

SearchConfig search_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), 0);
  }
  const json& o = j.contains("optimizer") ? j["optimizer"] : j;
  SearchConfig c;
  if (o.contains("dim")) c.dim = o["dim"].get<int>();
  if (o.contains("scheme")) {
    const std::string s = o["scheme"].get<std::string>();
    if (s == "dp")
      c.scheme = SchemeSpec::dp();
    else if (s == "db")
      c.scheme = SchemeSpec::db();
    else
      throw ParseError("config JSON: scheme must be dp or db", 0);
  }
  if (o.contains("projectors")) c.scheme.k = o["projectors"].get<int>();
  if (o.contains("restarts")) c.restarts = o["restarts"].get<int>();
  if (o.contains("max_iters")) c.max_iters = o["max_iters"].get<int>();
  if (o.contains("seed")) c.seed = o["seed"].get<std::uint64_t>();
  if (o.contains("step_tolerance")) c.step_tolerance = o["step_tolerance"].get<double>();
  if (o.contains("value_tolerance")) c.value_tolerance = o["value_tolerance"].get<double>();
  if (o.contains("penalty_lambda")) c.penalty_lambda = o["penalty_lambda"].get<double>();
  if (o.contains("sweeps")) c.sweeps = o["sweeps"].get<int>();
  if (o.contains("threads")) c.threads = o["threads"].get<int>();
  return c;
}

std::string search_result_to_json(const SearchResult& r, const SearchConfig& c) {
  ordered_json j;
  j["config"] = {{"dim", c.dim},
                 {"scheme", c.scheme.kind == MeasurementScheme::Kind::DP ? "dp" : "db"},
                 {"restarts", c.restarts},
                 {"max_iters", c.max_iters},
                 {"seed", c.seed},
                 {"penalty_lambda", c.penalty_lambda},
                 {"sweeps", c.sweeps}};
  j["best_value"] = fmt(r.best_value);
  j["penalized_score"] = fmt(r.penalized_score);
  j["constraint_residual"] = fmt(r.constraint_residual);
  j["converged"] = r.converged;
  j["best_restart"] = r.best_restart;
  json hist = json::array();
  for (const auto& h : r.history)
    hist.push_back({{"restart", h.restart}, {"iterations", h.iterations}, {"value", fmt(h.value)}});
  j["history"] = hist;
  json obs = json::array();
  for (const auto& o : r.observables) obs.push_back(OperatorExpr::from_dense(o).str());
  j["observables"] = obs;
  j["state"] = OperatorExpr::from_dense(r.state).str();
  return j.dump(2);
}

std::string report_to_json(const ViolationReport& r) {
  ordered_json j;
  j["dim"] = r.dim;
  j["scheme"] = r.scheme;
  j["k"] = r.k;
  j["value"] = r.value;
  j["bound_nc"] = r.bound_nc;
  j["bound_sos"] = r.bound_sos;
  j["per_term"] = r.per_term;
  j["witness_min_dim"] = r.witness_min_dim;
  return j.dump(2);
}

std::string report_to_csv(const ViolationReport& r) {
  std::string out = "dim,scheme,k,value,bound_nc,bound_sos,witness_min_dim\n";
  out += std::to_string(r.dim) + "," + r.scheme + "," + std::to_string(r.k) + "," +
         fmt(r.value) + "," + fmt(r.bound_nc) + "," + fmt(r.bound_sos) + "," +
         std::to_string(r.witness_min_dim) + "\n";
  return out;
}

}  // namespace ctx
