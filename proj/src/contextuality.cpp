#include "ctx/contextuality.hpp"

#include <algorithm>
#include <cmath>

#include "ctx/pauli.hpp"

namespace ctx {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kC8 = std::cos(kPi / 8);
const double kS8 = std::sin(kPi / 8);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Matrix word(const std::string& w) { return PauliWord(w).to_dense(); }

Matrix expr2(double c1, const std::string& w1, double c2, const std::string& w2) {
  return c1 * word(w1) + c2 * word(w2);
}

}  // namespace

NoncontextualBound noncontextual_bound() {
  NoncontextualBound out{-4, {}};
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1 ? 1 : -1;
    int f = v[0] * v[1] + v[1] * v[2] + v[2] * v[3] - v[3] * v[0];
    if (f > out.bound) {
      out.bound = f;
      out.maximizers.clear();
    }
    if (f == out.bound) out.maximizers.push_back({v, f});
  }
  return out;
}

std::pair<double, double> sos_optimal_value() {
  // sqrt(2-x) + sqrt(2+x) is concave with the maximum at x = 0
  return {2.0 * std::sqrt(2.0), 0.0};
}

SosCertificate sos_certificate(const Scenario& s, const Tolerances& tol) {
  const auto& A = s.observables;
  for (int i = 0; i < 4; ++i)
    if (max_abs(commutator(A[i].op, A[(i + 1) % 4].op)) > tol.hermitian)
      throw PreconditionError("scenario observables are not cyclically compatible");

  const double anti24 = expectation(s.state, anticommutator(A[1].op, A[3].op), tol);
  const double w1 = std::sqrt(std::max(0.0, 2.0 - anti24));
  const double w2 = std::sqrt(std::max(0.0, 2.0 + anti24));
  if (w1 <= tol.hermitian || w2 <= tol.hermitian)
    throw PreconditionError("degenerate norm: omega vanishes");

  const Matrix L1 = (A[1].op - A[3].op) / w1 - A[0].op;
  const Matrix L2 = (A[1].op + A[3].op) / w2 - A[2].op;
  const double q1 = expectation(s.state, (L1.adjoint() * L1).eval(), tol);
  const double q2 = expectation(s.state, (L2.adjoint() * L2).eval(), tol);

  SosCertificate cert;
  cert.omega1 = w1;
  cert.omega2 = w2;
  cert.l1_residual = std::sqrt(std::max(0.0, q1));
  cert.l2_residual = std::sqrt(std::max(0.0, q2));

  const double via_l = 0.5 * (w1 * q1 + w2 * q2);
  double delta_dp = 0;
  const int outer[4] = {+1, +1, +1, -1};
  for (int i = 0; i < 4; ++i) {
    auto scheme = MeasurementScheme::dp(A[i]);
    delta_dp += outer[i] * sequential_correlation(s.state, scheme, A[(i + 1) % 4], tol);
  }
  const double via_delta = w1 + w2 - delta_dp;
  if (std::abs(via_l - via_delta) > 1e-8)
    throw Error("SOS certificate routes disagree: " + std::to_string(via_l) + " vs " +
                std::to_string(via_delta));
  cert.gamma_expectation = via_delta;
  return cert;
}

ViolationReport delta_value(const Scenario& s, const SchemeSpec& scheme,
                            const Tolerances& tol) {
  const auto& A = s.observables;
  for (int i = 0; i < 4; ++i)
    if (max_abs(commutator(A[i].op, A[(i + 1) % 4].op)) > tol.hermitian)
      throw PreconditionError("scenario observables are not cyclically compatible");

  ViolationReport rep;
  rep.dim = s.dim();
  rep.bound_nc = 2.0;
  rep.bound_sos = 2.0 * std::sqrt(2.0);

  const int outer[4] = {+1, +1, +1, -1};
  for (int i = 0; i < 4; ++i) {
    MeasurementScheme first = [&] {
      if (scheme.kind == MeasurementScheme::Kind::DP) return MeasurementScheme::dp(A[i]);
      auto it = s.db_aux.find(i + 1);
      if (it == s.db_aux.end())
        throw PreconditionError("DB scheme needs an aux set for observable " +
                                std::to_string(i + 1));
      auto full = refine_partition(A[i], it->second, tol);
      if (scheme.k != 0 && scheme.k != full.k()) {
        if (scheme.k == 2) return MeasurementScheme::dp(A[i]);
        return MeasurementScheme::db(equal_rank_partition(A[i], scheme.k, tol));
      }
      return MeasurementScheme::db(std::move(full));
    }();
    rep.per_term[i] = sequential_correlation(s.state, first, A[(i + 1) % 4], tol);
  }
  rep.value = rep.per_term[0] + rep.per_term[1] + rep.per_term[2] - rep.per_term[3];
  if (scheme.kind == MeasurementScheme::Kind::DP) {
    rep.scheme = "dp";
    rep.k = 2;
  } else {
    rep.scheme = "db";
    rep.k = scheme.k == 0 ? s.dim() : scheme.k;
  }
  auto w = witness_min_dimension(std::min(rep.value, 4.0));
  rep.witness_min_dim = w.witnessing ? w.min_dim : 0;
  return rep;
}

std::array<Matrix, 4> canonical_observables(int n) {
  if (n < 2) throw PreconditionError("canonical observables need n >= 2");
  if (n == 2)
    return {word("XX"), word("ZY"), word("XZ"), word("YY")};
  const std::string pad(n - 2, 'X');
  return {word("X" + pad + "X"), word("Z" + pad + "Z"), word("Y" + pad + "X"),
          word("Z" + pad + "Y")};
}

std::vector<Matrix> canonical_c_set(int n, const std::array<Matrix, 4>& A) {
  const Matrix g1 = A[0] * (A[1] - A[3]) * kInvSqrt2;
  const Matrix g2 = A[2] * (A[1] + A[3]) * kInvSqrt2;
  std::vector<Matrix> gens{g1, g2};
  for (int q = 1; q + 1 < n; ++q) {
    std::string w(n, 'I');
    w[q] = 'X';
    gens.push_back(word(w));
  }
  // all products over subsets, minus {I, g1, g2}
  const Eigen::Index d = Eigen::Index(1) << n;
  std::vector<Matrix> cs;
  const std::size_t g = gens.size();
  for (std::size_t mask = 1; mask < (std::size_t(1) << g); ++mask) {
    if (mask == 1 || mask == 2) continue;  // g1 and g2 themselves
    Matrix p = Matrix::Identity(d, d);
    for (std::size_t i = 0; i < g; ++i)
      if (mask & (std::size_t(1) << i)) p = p * gens[i];
    cs.push_back(std::move(p));
  }
  return cs;
}

StateBuildResult build_state(int n, const std::array<Matrix, 4>& observables,
                             const std::vector<Matrix>& c_set, const std::vector<int>& signs,
                             const Tolerances& tol) {
  if (n < 2) throw PreconditionError("build_state needs n >= 2");
  if (signs.size() != c_set.size())
    throw PreconditionError("one sign per C operator required");
  const Eigen::Index d = Eigen::Index(1) << n;
  const Matrix g1 = observables[0] * (observables[1] - observables[3]) * kInvSqrt2;
  const Matrix g2 = observables[2] * (observables[1] + observables[3]) * kInvSqrt2;

  std::vector<Matrix> gens{g1, g2};
  for (std::size_t i = 0; i < c_set.size(); ++i) gens.push_back(double(signs[i]) * c_set[i]);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!is_involutory(gens[i], tol.hermitian))
      throw PreconditionError("state generator " + std::to_string(i + 1) +
                              " is not an involution");
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (max_abs(commutator(gens[i], gens[j])) > tol.hermitian)
        throw PreconditionError("state generators " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " do not commute");
  }
  Matrix rho = Matrix::Identity(d, d);
  for (const auto& g : gens) rho += g;
  rho /= double(d);

  StateBuildResult out;
  out.rho = rho;
  out.purity = (rho * rho).trace().real();
  out.pure = std::abs(out.purity - 1.0) <= tol.trace;
  out.valid_density = is_density(rho, tol);
  return out;
}

namespace {

/// d = 4 canonical auxiliary refiners: one (partner, refiner) pair per
/// observable, chosen so the refined channel reaches the optimum.
std::vector<Matrix> d4_aux(const Matrix& a, int index) {
  Matrix refiner;
  switch (index) {
    case 1: refiner = expr2(kS8, "ZZ", kC8, "YZ"); break;
    case 2: refiner = expr2(kC8, "YX", -kS8, "YZ"); break;
    case 3: refiner = expr2(kC8, "ZX", -kS8, "YX"); break;
    case 4: refiner = expr2(kC8, "XX", -kS8, "XZ"); break;
    default: throw Error("bad aux index");
  }
  return {a * refiner, refiner};
}

/// Rank-1 partition -> the six-operator closure set (M1,N1,M2,N2,M3,N3)
/// by assigning independent sign patterns to the blocks of each eigenspace.
std::vector<Matrix> aux_from_partition(const Matrix& a, const ProjectorPartition& part) {
  const Eigen::Index d = part.dim();
  Matrix q1 = Matrix::Zero(d, d), q2 = Matrix::Zero(d, d);
  int idx_plus = 0, idx_minus = 0;
  for (const auto& b : part.blocks()) {
    int& idx = b.sign > 0 ? idx_plus : idx_minus;
    const int s1 = (idx & 1) ? -1 : +1;
    const int s2 = (idx & 2) ? -1 : +1;
    q1 += double(s1) * b.projector;
    q2 += double(s2) * b.projector;
    ++idx;
  }
  const Matrix q3 = q1 * q2;
  return {a * q1, q1, a * q2, q2, a * q3, q3};
}

}  // namespace

Scenario canonical_scenario(int n) {
  if (n != 2 && n != 3)
    throw PreconditionError("canonical scenarios exist for n = 2 and n = 3");
  auto ops = canonical_observables(n);
  auto cs = canonical_c_set(n, ops);
  std::vector<int> signs(cs.size(), +1);
  auto built = build_state(n, ops, cs, signs);
  if (!built.valid_density || !built.pure)
    throw Error("canonical state construction failed");

  Scenario s{{eigen_partition(ops[0]), eigen_partition(ops[1]), eigen_partition(ops[2]),
              eigen_partition(ops[3])},
             DensityMatrix::validated(built.rho),
             {}};
  if (n == 2) {
    for (int i = 1; i <= 4; ++i) s.db_aux[i] = d4_aux(ops[i - 1], i);
  } else {
    const Vector psi = s.state.principal_vector();
    const int outer[4] = {+1, +1, +1, -1};
    for (int i = 0; i < 4; ++i) {
      auto part = aligned_partition(psi, s.observables[i], s.observables[(i + 1) % 4].op,
                                    outer[i]);
      s.db_aux[i + 1] = aux_from_partition(ops[i], part);
    }
  }
  return s;
}

double db_optimal_formula(int n) {
  if (n < 2) throw PreconditionError("formula defined for n >= 2");
  const double dp_opt = 2.0 * std::sqrt(2.0);
  const double half = std::pow(2.0, n - 1);
  return dp_opt / half + (half - 1.0) / std::pow(2.0, n - 3);
}

double db_channel_optimum(int n) {
  if (n < 2) throw PreconditionError("formula defined for n >= 2");
  const double d = std::pow(2.0, n);
  return 4.0 - 8.0 * (2.0 - std::sqrt(2.0)) / (d + 4.0);
}

WitnessResult witness_min_dimension(double observed_value, double tol) {
  if (observed_value > 4.0 + tol)
    throw PreconditionError("observed value exceeds the algebraic maximum 4");
  if (observed_value <= 2.0 + tol) return {false, 0};
  if (observed_value <= 2.0 * std::sqrt(2.0) + tol) return {true, 4};
  for (int n = 2; n <= 62; ++n) {
    if (db_optimal_formula(n) >= observed_value - tol) return {true, 1LL << n};
  }
  // values this close to 4 sit beyond any representable 2^n
  return {true, 0};
}

std::vector<WitnessRow> witness_table(int max_n) {
  if (max_n < 2) throw PreconditionError("witness table needs max_n >= 2");
  std::vector<WitnessRow> rows;
  for (int n = 2; n <= max_n; ++n) rows.push_back({1 << n, db_optimal_formula(n)});
  rows.push_back({0, 4.0});
  return rows;
}

std::vector<ValueCondition> value_conditions(int n) {
  auto A = canonical_observables(n);
  if (n == 2) {
    return {
        {expr2(-kC8, "ZZ", kS8, "YZ"), A[0] * A[1], -1.0},
        {expr2(kS8, "YX", kC8, "ZX"), A[1] * A[2], -1.0},
        {expr2(kS8, "ZX", kC8, "YX"), A[2] * A[3], -1.0},
        {expr2(kC8, "YZ", -kS8, "ZZ"), A[3] * A[0], +1.0},
    };
  }
  if (n == 3) {
    return {
        {expr2(kS8, "XZY", -kC8, "XZZ"), A[0] * A[1], +1.0},
        {expr2(kS8, "IYZ", kC8, "IYY"), A[0] * A[1], +1.0},
        {expr2(kC8, "IZY", kS8, "IZZ"), A[0] * A[1], +1.0},
    };
  }
  throw PreconditionError("value conditions are tabulated for n in {2, 3}");
}

}  // namespace ctx
