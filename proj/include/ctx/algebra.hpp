#pragma once

#include "ctx/types.hpp"

namespace ctx {

Matrix tensor(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& a, double tol = 1e-9);
bool is_involutory(const Matrix& a, double tol = 1e-9);
bool is_projector(const Matrix& a, double tol = 1e-9);
bool is_density(const Matrix& a, const Tolerances& tol = {});

/// Largest absolute entry of a; the residual metric used by every
/// predicate above.
double max_abs(const Matrix& a);

/// Validated quantum state: Hermitian (tau_h), unit trace (tau_t),
/// positive semidefinite (tau_psd).
class DensityMatrix {
 public:
  static DensityMatrix validated(Matrix rho, const Tolerances& tol = {});
  /// Skip validation; for channel outputs that are valid by construction.
  static DensityMatrix trusted(Matrix rho);

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  double purity() const;

  /// Deterministic principal eigenvector for (near-)pure states:
  /// normalize(rho * e_k) for the first standard basis vector with
  /// non-negligible image. Exact for rank-1 states.
  Vector principal_vector() const;

 private:
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

/// Tr(rho * op) for Hermitian op; throws if the imaginary residue
/// exceeds tol.imaginary or op fails the Hermiticity check.
double expectation(const DensityMatrix& rho, const Matrix& op,
                   const Tolerances& tol = {});

}  // namespace ctx
