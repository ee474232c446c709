#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctx/contextuality.hpp"
#include "ctx/optimizer.hpp"
#include "ctx/scenario_io.hpp"
#include "ctx/verify.hpp"

namespace {

struct GlobalOpts {
  std::string format = "text";
  double tolerance = 1e-9;
  bool quiet = false;
};

std::string f8(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.8f", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ctx::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_verify(const GlobalOpts& g, const std::string& module, bool with_optimizer) {
  ctx::Tolerances tol;
  tol.hermitian = tol.trace = tol.psd = tol.imaginary = g.tolerance;
  auto checks = ctx::verification_suite(with_optimizer);
  int ran = 0, failed = 0;
  for (const auto& c : checks) {
    if (!module.empty() && c.module != module) continue;
    ++ran;
    ctx::CheckResult r;
    try {
      r = c.run(tol);
    } catch (const std::exception& e) {
      r = {false, 0, e.what()};
    }
    if (!r.passed) ++failed;
    if (!g.quiet || !r.passed) {
      std::printf("[%s] %s/%s  residual=%.3e%s%s\n", r.passed ? "PASS" : "FAIL",
                  c.module.c_str(), c.name.c_str(), r.residual,
                  r.detail.empty() ? "" : "  ", r.detail.c_str());
    }
  }
  if (ran == 0) {
    std::fprintf(stderr, "no checks match module '%s'\n", module.c_str());
    return 2;
  }
  std::printf("%d checks, %d passed, %d failed\n", ran, ran - failed, failed);
  return failed == 0 ? 0 : 1;
}

void print_report(const GlobalOpts& g, const ctx::ViolationReport& rep) {
  if (g.format == "json") {
    std::cout << ctx::report_to_json(rep) << "\n";
  } else if (g.format == "csv") {
    std::cout << ctx::report_to_csv(rep);
  } else {
    std::printf("dim=%d scheme=%s k=%d\n", rep.dim, rep.scheme.c_str(), rep.k);
    std::printf("value            %s\n", f8(rep.value).c_str());
    std::printf("per-term         %s %s %s %s (fourth subtracted)\n",
                f8(rep.per_term[0]).c_str(), f8(rep.per_term[1]).c_str(),
                f8(rep.per_term[2]).c_str(), f8(rep.per_term[3]).c_str());
    std::printf("bound_nc         %s\n", f8(rep.bound_nc).c_str());
    std::printf("bound_sos        %s\n", f8(rep.bound_sos).c_str());
    if (rep.witness_min_dim > 0)
      std::printf("witness_min_dim  %lld\n", rep.witness_min_dim);
    else
      std::printf("witness_min_dim  non-witnessing\n");
  }
}

int cmd_violation(const GlobalOpts& g, int dim, const std::string& scheme, int projectors,
                  const std::string& scenario_file) {
  ctx::Tolerances tol;
  tol.hermitian = tol.trace = tol.psd = tol.imaginary = g.tolerance;
  ctx::Scenario s = [&] {
    if (!scenario_file.empty()) return ctx::scenario_from_json(read_file(scenario_file));
    if (dim == 4) return ctx::canonical_scenario(2);
    if (dim == 8) return ctx::canonical_scenario(3);
    throw ctx::PreconditionError(
        "canonical scenarios exist for --dim 4 and --dim 8; otherwise pass --scenario");
  }();
  ctx::SchemeSpec spec = scheme == "db" ? ctx::SchemeSpec::db(projectors)
                                        : ctx::SchemeSpec::dp();
  auto rep = ctx::delta_value(s, spec, tol);
  print_report(g, rep);
  return 0;
}

int cmd_witness(const GlobalOpts& g, int max_n, double value, bool has_value) {
  if (has_value) {
    auto w = ctx::witness_min_dimension(value, g.tolerance);
    if (g.format == "json") {
      std::printf("{\"value\": %.17g, \"witnessing\": %s, \"min_dim\": %lld}\n", value,
                  w.witnessing ? "true" : "false", w.min_dim);
    } else if (w.witnessing) {
      std::printf("d >= %lld\n", w.min_dim);
    } else {
      std::printf("non-witnessing (value %s is classically attainable)\n", f8(value).c_str());
    }
    return 0;
  }
  auto rows = ctx::witness_table(max_n);
  if (g.format == "json") {
    std::printf("[");
    for (std::size_t i = 0; i < rows.size(); ++i)
      std::printf("%s{\"dim\": %s, \"value\": %.17g}", i ? ", " : "",
                  rows[i].dim ? std::to_string(rows[i].dim).c_str() : "\"inf\"",
                  rows[i].optimal_value);
    std::printf("]\n");
  } else if (g.format == "csv") {
    std::printf("dim,optimal_value\n");
    for (const auto& r : rows)
      std::printf("%s,%.17g\n", r.dim ? std::to_string(r.dim).c_str() : "inf",
                  r.optimal_value);
  } else {
    std::printf("%-8s %s\n", "dim", "optimal value");
    for (const auto& r : rows) {
      if (r.dim)
        std::printf("%-8d %s\n", r.dim, f8(r.optimal_value).c_str());
      else
        std::printf("%-8s %s\n", "inf", f8(r.optimal_value).c_str());
    }
  }
  return 0;
}

int cmd_optimize(const GlobalOpts& g, ctx::SearchConfig cfg, const std::string& out_path,
                 const std::string& config_file) {
  if (!config_file.empty()) {
    cfg = ctx::search_config_from_json(read_file(config_file));
  }
  if (const char* env = std::getenv("CTX_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  auto res = ctx::search_optimal_delta(cfg);
  const std::string payload = ctx::search_result_to_json(res, cfg);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ctx::Error("cannot write " + out_path);
    out << payload << "\n";
  }
  if (!g.quiet) {
    std::printf("best value      %s\n", f8(res.best_value).c_str());
    std::printf("converged       %s\n", res.converged ? "yes" : "no");
    std::printf("residual        %.3e\n", res.constraint_residual);
    std::printf("best restart    %d\n", res.best_restart);
    if (out_path.empty() && g.format == "json") std::cout << payload << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential-measurement contextuality toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--tolerance", g.tolerance, "numeric tolerance");
  app.add_flag("--quiet", g.quiet, "suppress per-item output");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->fallthrough();
  bool verify_all = false;
  bool with_optimizer = false;
  std::string module;
  verify->add_flag("--all", verify_all, "run every module");
  verify->add_option("--module", module, "restrict to one module");
  verify->add_flag("--with-optimizer", with_optimizer, "include optimizer searches");

  auto* violation = app.add_subcommand("violation", "report the functional value");
  violation->fallthrough();
  int dim = 4;
  std::string scheme = "dp";
  int projectors = 0;
  std::string scenario_file;
  violation->add_option("--dim", dim, "Hilbert space dimension");
  violation->add_option("--scheme", scheme, "measurement scheme")
      ->check(CLI::IsMember({"dp", "db"}));
  violation->add_option("--projectors", projectors, "block count for db");
  violation->add_option("--scenario", scenario_file, "scenario JSON file");

  auto* witness = app.add_subcommand("witness", "dimension witness table or bound");
  witness->fallthrough();
  int max_n = 4;
  double value = 0;
  witness->add_option("--max-n", max_n, "table rows up to n");
  auto* value_opt = witness->add_option("--value", value, "observed functional value");

  auto* optimize = app.add_subcommand("optimize", "derivative-free search");
  optimize->fallthrough();
  ctx::SearchConfig cfg;
  std::string out_path, config_file;
  std::string opt_scheme = "dp";
  optimize->add_option("--dim", cfg.dim, "dimension");
  optimize->add_option("--scheme", opt_scheme, "dp or db")
      ->check(CLI::IsMember({"dp", "db"}));
  optimize->add_option("--restarts", cfg.restarts, "random restarts");
  optimize->add_option("--seed", cfg.seed, "rng seed");
  optimize->add_option("--max-iters", cfg.max_iters, "simplex iterations per sweep");
  optimize->add_option("--sweeps", cfg.sweeps, "coordinate sweeps");
  optimize->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  optimize->add_option("--out", out_path, "result JSON path");
  optimize->add_option("--config", config_file, "config JSON (optimizer stanza)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      (void)verify_all;
      return cmd_verify(g, module, with_optimizer);
    }
    if (violation->parsed()) return cmd_violation(g, dim, scheme, projectors, scenario_file);
    if (witness->parsed()) return cmd_witness(g, max_n, value, value_opt->count() > 0);
    if (optimize->parsed()) {
      cfg.scheme = opt_scheme == "db" ? ctx::SchemeSpec::db() : ctx::SchemeSpec::dp();
      return cmd_optimize(g, cfg, out_path, config_file);
    }
  } catch (const ctx::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ctx::PreconditionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
