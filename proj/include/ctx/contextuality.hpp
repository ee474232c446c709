#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "ctx/measurement.hpp"

namespace ctx {

/// The four cyclically compatible observables, the state, and (for DB
/// measurements) the per-observable auxiliary commuting sets.
struct Scenario {
  std::array<DichotomicObservable, 4> observables;
  DensityMatrix state;
  std::map<int, std::vector<Matrix>> db_aux;  // 1-based observable index

  int dim() const { return state.dim(); }
};

struct SchemeSpec {
  MeasurementScheme::Kind kind = MeasurementScheme::Kind::DP;
  int k = 0;  // block count for DB; 0 means full (k = d)

  static SchemeSpec dp() { return {MeasurementScheme::Kind::DP, 2}; }
  static SchemeSpec db(int k = 0) { return {MeasurementScheme::Kind::DB, k}; }
};

struct ViolationReport {
  std::string scheme;  // "dp" or "db"
  int k = 2;
  int dim = 0;
  double value = 0;
  double bound_nc = 2.0;
  double bound_sos = 0;
  std::array<double, 4> per_term{};
  long long witness_min_dim = 0;  // 0 = non-witnessing
};

struct SosCertificate {
  double omega1 = 0;
  double omega2 = 0;
  double gamma_expectation = 0;
  double l1_residual = 0;
  double l2_residual = 0;
};

struct Assignment {
  std::array<int, 4> values;
  int functional;
};

struct NoncontextualBound {
  int bound;
  std::vector<Assignment> maximizers;
};

/// Exhaustive enumeration of the 16 +-1 assignments of
/// v1 v2 + v2 v3 + v3 v4 - v4 v1.
NoncontextualBound noncontextual_bound();

/// max over x in [-2,2] of sqrt(2-x) + sqrt(2+x); returns (value, argmax).
std::pair<double, double> sos_optimal_value();

/// Gamma certificate for the scenario under DP semantics. gamma_expectation
/// is computed both as omega1 + omega2 - <Delta>_dp and through the explicit
/// L1/L2 operators; the two routes must agree within tolerance.
SosCertificate sos_certificate(const Scenario& s, const Tolerances& tol = {});

/// t1 + t2 + t3 - t4 with t_i the sequential correlation of the i-th pair
/// under the scheme; per-term values are reported so the subtracted fourth
/// term is auditable.
ViolationReport delta_value(const Scenario& s, const SchemeSpec& scheme,
                            const Tolerances& tol = {});

/// Canonical optimal scenarios: n = 2 (d = 4) and n = 3 (d = 8), with
/// compiled-in observables, state, and auxiliary refiner sets.
Scenario canonical_scenario(int n);

/// Observable family A1..A4 for any n >= 2 (the n = 2 set is the
/// two-qubit canonical choice; n >= 3 follows the X-padded pattern).
std::array<Matrix, 4> canonical_observables(int n);

struct StateBuildResult {
  Matrix rho;
  double purity = 0;
  bool pure = false;
  bool valid_density = false;
};

/// rho = (1/2^n)[I + A1(A2-A4)/sqrt2 + A3(A2+A4)/sqrt2 + sum_k eta_k C_k].
/// Generators must be mutually commuting involutions (checked). The result
/// carries purity/validity flags; a complete C set yields a rank-1 state.
StateBuildResult build_state(int n, const std::array<Matrix, 4>& observables,
                             const std::vector<Matrix>& c_set,
                             const std::vector<int>& signs,
                             const Tolerances& tol = {});

/// The C_k completion used by the canonical scenarios: all nontrivial
/// products of {g1, g2, e_2..e_(n-1)} beyond g1 and g2 themselves
/// (2^n - 3 operators). e_j is the single-X word at qubit j.
std::vector<Matrix> canonical_c_set(int n, const std::array<Matrix, 4>& observables);

/// Closed-form optimum reported by the witness table for d = 2^n:
/// 2*sqrt(2)/2^(n-1) + (2^(n-1)-1)/2^(n-3).
double db_optimal_formula(int n);

/// Largest value a rank-1 projective refinement can actually reach on a
/// d = 2^n scenario: 4 - 8(2-sqrt2)/(d+4). Agrees with db_optimal_formula
/// at n = 2 and sits strictly below it for n >= 3.
double db_channel_optimum(int n);

struct WitnessResult {
  bool witnessing = false;
  long long min_dim = 0;  // valid when witnessing
};

/// Smallest d = 2^n whose table optimum reaches the observed value.
/// Values <= 2 are classically attainable (non-witnessing); values above
/// 4 + tol exceed the algebraic maximum and throw.
WitnessResult witness_min_dimension(double observed_value, double tol = 1e-9);

struct WitnessRow {
  int dim;  // 0 encodes the d -> infinity row
  double optimal_value;
};

/// Rows for n = 2..max_n plus the limit row (inf, 4).
std::vector<WitnessRow> witness_table(int max_n);

struct ValueCondition {
  Matrix conjugator;    // commutes with the pair product it sandwiches
  Matrix pair_product;  // A_i * A_(i+1)
  double expected;      // +-1 on the canonical state
};

/// Named operators whose sandwiched pair products have exact +-1
/// expectations on the canonical state: four conditions at n = 2
/// (-1, -1, -1, +1) and three at n = 3 (all +1).
std::vector<ValueCondition> value_conditions(int n);

}  // namespace ctx
