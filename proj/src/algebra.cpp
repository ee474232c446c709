#include "ctx/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ctx {

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

namespace {
void check_same_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("operator dimensions do not match");
}
}  // namespace

Matrix commutator(const Matrix& a, const Matrix& b) {
  check_same_dim(a, b);
  return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  check_same_dim(a, b);
  return a * b + b * a;
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint().eval()) <= tol;
}

bool is_involutory(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a * a - Matrix::Identity(a.rows(), a.cols())) <= tol;
}

bool is_projector(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return is_hermitian(a, tol) && max_abs(a * a - a) <= tol;
}

bool is_density(const Matrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) return false;
  if (!is_hermitian(a, tol.hermitian)) return false;
  if (std::abs(a.trace().real() - 1.0) > tol.trace) return false;
  if (std::abs(a.trace().imag()) > tol.trace) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol.psd;
}

DensityMatrix DensityMatrix::validated(Matrix rho, const Tolerances& tol) {
  if (!is_hermitian(rho, tol.hermitian))
    throw PreconditionError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol.trace ||
      std::abs(rho.trace().imag()) > tol.trace)
    throw PreconditionError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.psd)
    throw PreconditionError("density matrix is not positive semidefinite");
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::trusted(Matrix rho) { return DensityMatrix(std::move(rho)); }

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

Vector DensityMatrix::principal_vector() const {
  for (Eigen::Index k = 0; k < rho_.cols(); ++k) {
    Vector v = rho_.col(k);
    double n = v.norm();
    if (n > 1e-8) {
      v /= n;
      // one refinement pass keeps near-pure inputs exact for pure ones
      Vector w = rho_ * v;
      double wn = w.norm();
      if (wn > 1e-12) return w / wn;
      return v;
    }
  }
  throw PreconditionError("zero density matrix has no principal vector");
}

double expectation(const DensityMatrix& rho, const Matrix& op, const Tolerances& tol) {
  if (rho.dim() != op.rows() || op.rows() != op.cols())
    throw DimensionError("state and observable dimensions do not match");
  if (!is_hermitian(op, tol.hermitian))
    throw PreconditionError("expectation of a non-Hermitian operator");
  Complex t = (rho.matrix() * op).trace();
  if (std::abs(t.imag()) > tol.imaginary)
    throw Error("expectation has imaginary residue " + std::to_string(t.imag()));
  return t.real();
}

}  // namespace ctx
