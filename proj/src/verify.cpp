#include "ctx/verify.hpp"

#include <cmath>
#include <random>

#include "ctx/contextuality.hpp"
#include "ctx/optimizer.hpp"
#include "ctx/pauli.hpp"

namespace ctx {
namespace {

Matrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return rho;
}

CheckResult pass(double residual, const std::string& detail = "") {
  return {true, residual, detail};
}
CheckResult fail(double residual, const std::string& detail) {
  return {false, residual, detail};
}

CheckResult check_residual(double residual, double bound, const std::string& what) {
  if (residual <= bound) return pass(residual);
  return fail(residual, what + " residual " + std::to_string(residual) + " exceeds " +
                            std::to_string(bound));
}

const char* kLetters = "IXYZ";

PauliWord random_word(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::string w;
  for (int i = 0; i < n; ++i) w += kLetters[pick(rng)];
  if (w.find_first_not_of('I') == std::string::npos) w[0] = 'X';
  return PauliWord(w);
}

// ---- core-algebra ------------------------------------------------------

CheckResult core_commutation_sign(const Tolerances&) {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    auto w1 = random_word(n, rng);
    auto w2 = random_word(n, rng);
    Matrix a = w1.to_dense(), b = w2.to_dense();
    const bool commute = w1.commutes_with(w2);
    const double res = commute ? max_abs(commutator(a, b)) : max_abs(anticommutator(a, b));
    worst = std::max(worst, res);
  }
  return check_residual(worst, 1e-12, "commutation sign rule");
}

CheckResult core_to_dense_linearity(const Tolerances&) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto w1 = random_word(2, rng);
    auto w2 = random_word(2, rng);
    const double a = g(rng), b = g(rng);
    OperatorExpr e1({{1.0, w1}});
    OperatorExpr e2({{1.0, w2}});
    OperatorExpr combo({{a, w1}, {b, w2}});
    worst = std::max(worst,
                     max_abs(combo.to_dense() - (a * e1.to_dense() + b * e2.to_dense())));
  }
  return check_residual(worst, 1e-12, "to_dense linearity");
}

CheckResult core_parse_roundtrip(const Tolerances&) {
  const char* samples[] = {
      "XX", "-ZY", "0.5*II + 0.5*ZZ", "0.70710678118654746*ZY - 0.70710678118654746*YI",
      "1/sqrt2*XI + 2*IZ - 0.25*YY"};
  for (const char* s : samples) {
    auto e = OperatorExpr::parse(s);
    auto round = OperatorExpr::parse(e.str());
    if (max_abs(e.to_dense() - round.to_dense()) > 1e-12)
      return fail(1, std::string("round-trip changed ") + s);
    if (round.str() != e.str()) return fail(1, std::string("printer unstable on ") + s);
  }
  return pass(0);
}

CheckResult core_word_properties(const Tolerances&) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto w = random_word(1 + trial % 4, rng);
    Matrix m = w.to_dense();
    if (!is_hermitian(m, 1e-12)) return fail(1, "word not Hermitian: " + w.letters());
    if (!is_involutory(m, 1e-12)) return fail(1, "word not involutory: " + w.letters());
    if (!w.is_identity() && std::abs(m.trace()) > 1e-12)
      return fail(std::abs(m.trace()), "non-identity word has trace: " + w.letters());
  }
  return pass(0);
}

// ---- measurement -------------------------------------------------------

CheckResult meas_trace_preservation(const Tolerances&) {
  double worst = 0;
  for (int n : {2, 3, 4}) {
    std::mt19937_64 rng(100 + n);
    const int d = 1 << n;
    auto obs = eigen_partition(canonical_observables(n)[0]);
    auto part = equal_rank_partition(obs, d);
    for (int trial = 0; trial < 100; ++trial) {
      auto rho = DensityMatrix::validated(random_density(d, rng));
      worst = std::max(worst, std::abs(dp_channel(rho, obs).matrix().trace().real() - 1.0));
      worst = std::max(worst, std::abs(db_channel(rho, part).matrix().trace().real() - 1.0));
    }
  }
  return check_residual(worst, 1e-12, "channel trace preservation");
}

CheckResult meas_positivity(const Tolerances& tol) {
  std::mt19937_64 rng(17);
  auto s = canonical_scenario(2);
  auto part = refine_partition(s.observables[0], s.db_aux.at(1));
  for (int trial = 0; trial < 50; ++trial) {
    auto rho = DensityMatrix::validated(random_density(4, rng));
    if (!is_density(dp_channel(rho, s.observables[0]).matrix(), tol))
      return fail(1, "dp channel output not a density matrix");
    if (!is_density(db_channel(rho, part).matrix(), tol))
      return fail(1, "db channel output not a density matrix");
  }
  return pass(0);
}

CheckResult meas_db_idempotence(const Tolerances&) {
  std::mt19937_64 rng(18);
  auto s = canonical_scenario(2);
  auto part = refine_partition(s.observables[0], s.db_aux.at(1));
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto rho = DensityMatrix::validated(random_density(4, rng));
    auto once = db_channel(rho, part);
    auto twice = db_channel(once, part);
    worst = std::max(worst, max_abs(once.matrix() - twice.matrix()));
  }
  return check_residual(worst, 1e-12, "db idempotence");
}

CheckResult meas_eq11_identity(const Tolerances&) {
  double worst = 0;
  for (int n : {2, 3}) {
    auto s = canonical_scenario(n);
    std::mt19937_64 rng(200 + n);
    const int d = 1 << n;
    for (int i = 0; i < 4; ++i) {
      auto part = refine_partition(s.observables[i], s.db_aux.at(i + 1));
      const auto& B = s.observables[(i + 1) % 4];
      for (int trial = 0; trial < 25; ++trial) {
        auto rho = DensityMatrix::validated(random_density(d, rng));
        const double db =
            sequential_correlation(rho, MeasurementScheme::db(part), B);
        const double dp =
            sequential_correlation(rho, MeasurementScheme::dp(s.observables[i]), B);
        const double cross = db_dp_cross_term(rho, part, B);
        worst = std::max(worst, std::abs(db - (dp - cross)));
      }
    }
  }
  return check_residual(worst, 1e-10, "db/dp cross-term identity");
}

CheckResult meas_db_degeneration(const Tolerances&) {
  std::mt19937_64 rng(19);
  auto s = canonical_scenario(2);
  auto coarse = coarse_partition(s.observables[0]);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto rho = DensityMatrix::validated(random_density(4, rng));
    worst = std::max(worst, max_abs(db_channel(rho, coarse).matrix() -
                                    dp_channel(rho, s.observables[0]).matrix()));
  }
  return check_residual(worst, 1e-14, "coarse db equals dp");
}

CheckResult meas_joint_measurability(const Tolerances& tol) {
  std::mt19937_64 rng(20);
  auto s = canonical_scenario(2);
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    const auto& A = s.observables[i];
    const auto& B = s.observables[(i + 1) % 4];
    for (int trial = 0; trial < 25; ++trial) {
      auto rho = DensityMatrix::validated(random_density(4, rng));
      const double seq = sequential_correlation(rho, MeasurementScheme::dp(A), B, tol);
      const double joint = expectation(rho, (A.op * B.op).eval(), tol);
      worst = std::max(worst, std::abs(seq - joint));
    }
  }
  return check_residual(worst, 1e-10, "compatible-pair joint measurability");
}

// ---- contextuality -----------------------------------------------------

CheckResult ctx_nc_bound(const Tolerances&) {
  auto nc = noncontextual_bound();
  if (nc.bound != 2) return fail(nc.bound, "enumerated bound is not 2");
  for (const auto& m : nc.maximizers)
    if (m.functional != 2) return fail(1, "maximizer list inconsistent");
  return pass(0, std::to_string(nc.maximizers.size()) + " maximizers");
}

CheckResult ctx_sos_scan(const Tolerances&) {
  auto [value, arg] = sos_optimal_value();
  double best = 0;
  for (double x = -2.0; x <= 2.0; x += 1e-4)
    best = std::max(best, std::sqrt(2.0 - x) + std::sqrt(2.0 + x));
  const double res = std::abs(best - value) + std::abs(arg);
  return check_residual(res, 1e-7, "sos grid scan");
}

CheckResult ctx_sos_identity(const Tolerances& tol) {
  auto s = canonical_scenario(2);
  std::mt19937_64 rng(21);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Scenario t = s;
    t.state = DensityMatrix::validated(random_density(4, rng));
    auto cert = sos_certificate(t, tol);
    if (cert.gamma_expectation < -1e-10)
      return fail(cert.gamma_expectation, "certificate expectation negative");
    const double via_l =
        0.5 * (cert.omega1 * cert.l1_residual * cert.l1_residual +
               cert.omega2 * cert.l2_residual * cert.l2_residual);
    worst = std::max(worst, std::abs(via_l - cert.gamma_expectation));
  }
  return check_residual(worst, 1e-10, "sos route agreement");
}

CheckResult ctx_canonical_d4(const Tolerances& tol) {
  auto s = canonical_scenario(2);
  const double dp = delta_value(s, SchemeSpec::dp(), tol).value;
  const double db = delta_value(s, SchemeSpec::db(), tol).value;
  const double r1 = std::abs(dp - 2.0 * std::sqrt(2.0));
  const double r2 = std::abs(db - (std::sqrt(2.0) + 2.0));
  return check_residual(std::max(r1, r2), 1e-9, "canonical d=4 values");
}

CheckResult ctx_canonical_d8(const Tolerances& tol) {
  auto s = canonical_scenario(3);
  const double dp = delta_value(s, SchemeSpec::dp(), tol).value;
  const double db = delta_value(s, SchemeSpec::db(), tol).value;
  const double r1 = std::abs(dp - 2.0 * std::sqrt(2.0));
  const double r2 = std::abs(db - db_channel_optimum(3));
  return check_residual(std::max(r1, r2), 1e-9, "canonical d=8 values");
}

CheckResult ctx_value_conditions(const Tolerances& tol) {
  double worst = 0;
  for (int n : {2, 3}) {
    auto s = canonical_scenario(n);
    for (const auto& vc : value_conditions(n)) {
      const Matrix sandwich = vc.conjugator * vc.pair_product * vc.conjugator;
      worst = std::max(worst,
                       std::abs(expectation(s.state, sandwich, tol) - vc.expected));
    }
  }
  return check_residual(worst, 1e-10, "canonical value conditions");
}

CheckResult ctx_partition_validity(const Tolerances&) {
  for (int n : {2, 3}) {
    auto s = canonical_scenario(n);
    for (int i = 0; i < 4; ++i) {
      Tolerances strict;
      strict.hermitian = 1e-12;
      auto part = refine_partition(s.observables[i], s.db_aux.at(i + 1), strict);
      if (!part.rank_one()) return fail(1, "canonical partition not rank-1");
      if (part.k() != (1 << n)) return fail(part.k(), "canonical partition block count");
    }
  }
  return pass(0);
}

CheckResult ctx_formula_table(const Tolerances&) {
  const double targets[3] = {3.41421356, 3.70710678, 3.85355339};
  double worst = 0;
  for (int n = 2; n <= 4; ++n)
    worst = std::max(worst, std::abs(db_optimal_formula(n) - targets[n - 2]));
  if (worst > 5e-9) return fail(worst, "table values");
  for (int n = 2; n < 20; ++n)
    if (db_optimal_formula(n + 1) <= db_optimal_formula(n))
      return fail(n, "table not strictly increasing");
  const double limit = std::abs(db_optimal_formula(20) - 4.0);
  return check_residual(limit, 1e-4, "table limit");
}

CheckResult ctx_witness_logic(const Tolerances&) {
  if (witness_min_dimension(3.5).min_dim != 8) return fail(1, "witness(3.5) != 8");
  if (witness_min_dimension(2.0 * std::sqrt(2.0)).min_dim != 4)
    return fail(1, "witness(2*sqrt2) != 4");
  if (witness_min_dimension(1.9).witnessing) return fail(1, "witness(1.9) not classical");
  return pass(0);
}

CheckResult ctx_eigenoperator_relations(const Tolerances&) {
  double worst = 0;
  for (int n : {2, 3}) {
    auto s = canonical_scenario(n);
    const Vector psi = s.state.principal_vector();
    const auto& A = s.observables;
    const double rt2 = std::sqrt(2.0);
    worst = std::max(worst,
                     (A[0].op * psi - (A[1].op - A[3].op) / rt2 * psi).norm());
    worst = std::max(worst,
                     (A[2].op * psi - (A[1].op + A[3].op) / rt2 * psi).norm());
  }
  return check_residual(worst, 1e-10, "state eigenoperator relations");
}

CheckResult ctx_state_purity(const Tolerances&) {
  double worst = 0;
  for (int n : {2, 3}) {
    auto s = canonical_scenario(n);
    worst = std::max(worst, std::abs(s.state.purity() - 1.0));
  }
  return check_residual(worst, 1e-12, "canonical state purity");
}

// ---- optimizer ---------------------------------------------------------

CheckResult opt_d4_dp(const Tolerances&) {
  SearchConfig cfg;
  cfg.dim = 4;
  cfg.restarts = 8;
  cfg.seed = 7;
  auto res = search_optimal_delta(cfg);
  const double target = 2.0 * std::sqrt(2.0);
  if (res.best_value < target - 1e-3)
    return fail(target - res.best_value, "d=4 dp search below the bound");
  if (res.converged && res.best_value > target + 1e-6)
    return fail(res.best_value - target, "d=4 dp search above the sos bound");
  return pass(std::abs(res.best_value - target));
}

CheckResult opt_d2_dp(const Tolerances&) {
  SearchConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 8;
  cfg.seed = 7;
  auto res = search_optimal_delta(cfg);
  if (res.best_value > 2.0 + 1e-6)
    return fail(res.best_value - 2.0, "d=2 search exceeds the classical bound");
  return pass(std::max(0.0, 2.0 - res.best_value));
}

CheckResult opt_d4_db(const Tolerances&) {
  SearchConfig cfg;
  cfg.dim = 4;
  cfg.scheme = SchemeSpec::db();
  cfg.restarts = 8;
  cfg.seed = 7;
  auto res = search_optimal_delta(cfg);
  const double target = std::sqrt(2.0) + 2.0;
  if (res.best_value < target - 1e-2)
    return fail(target - res.best_value, "d=4 db search below the optimum");
  return pass(std::abs(res.best_value - target));
}

CheckResult opt_determinism(const Tolerances&) {
  SearchConfig cfg;
  cfg.dim = 4;
  cfg.restarts = 2;
  cfg.sweeps = 2;
  cfg.max_iters = 60;
  cfg.seed = 42;
  auto a = search_optimal_delta(cfg);
  auto b = search_optimal_delta(cfg);
  if (a.best_value != b.best_value || a.history.size() != b.history.size())
    return fail(std::abs(a.best_value - b.best_value), "seeded runs differ");
  for (std::size_t i = 0; i < a.history.size(); ++i)
    if (a.history[i].value != b.history[i].value)
      return fail(1, "seeded histories differ");
  return pass(0);
}

}  // namespace

std::vector<Check> verification_suite(bool with_optimizer) {
  std::vector<Check> checks{
      {"core-algebra", "pauli-commutation-sign", core_commutation_sign},
      {"core-algebra", "to-dense-linearity", core_to_dense_linearity},
      {"core-algebra", "parse-print-roundtrip", core_parse_roundtrip},
      {"core-algebra", "word-properties", core_word_properties},
      {"measurement", "channel-trace-preservation", meas_trace_preservation},
      {"measurement", "channel-positivity", meas_positivity},
      {"measurement", "db-idempotence", meas_db_idempotence},
      {"measurement", "cross-term-identity", meas_eq11_identity},
      {"measurement", "coarse-db-equals-dp", meas_db_degeneration},
      {"measurement", "joint-measurability", meas_joint_measurability},
      {"contextuality", "noncontextual-bound", ctx_nc_bound},
      {"contextuality", "sos-grid-scan", ctx_sos_scan},
      {"contextuality", "sos-identity", ctx_sos_identity},
      {"contextuality", "canonical-d4-values", ctx_canonical_d4},
      {"contextuality", "canonical-d8-values", ctx_canonical_d8},
      {"contextuality", "value-conditions", ctx_value_conditions},
      {"contextuality", "partition-validity", ctx_partition_validity},
      {"contextuality", "formula-table", ctx_formula_table},
      {"contextuality", "witness-logic", ctx_witness_logic},
      {"contextuality", "eigenoperator-relations", ctx_eigenoperator_relations},
      {"contextuality", "state-purity", ctx_state_purity},
  };
  if (with_optimizer) {
    checks.push_back({"optimizer", "d4-dp-search", opt_d4_dp});
    checks.push_back({"optimizer", "d2-dp-search", opt_d2_dp});
    checks.push_back({"optimizer", "d4-db-search", opt_d4_db});
    checks.push_back({"optimizer", "seeded-determinism", opt_determinism});
  }
  return checks;
}

}  // namespace ctx
