#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctx/types.hpp"

namespace ctx {

/// Tensor word over {I, X, Y, Z}. Converts to a Hermitian, unitary,
/// involutory dense operator of dimension 2^n.
class PauliWord {
 public:
  explicit PauliWord(std::string letters);

  const std::string& letters() const { return letters_; }
  int n_qubits() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const;

  Matrix to_dense() const;

  /// Two words either commute or anticommute; the sign is
  /// (-1)^(number of positions where both letters differ and neither is I).
  bool commutes_with(const PauliWord& other) const;

  friend bool operator==(const PauliWord& a, const PauliWord& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator<(const PauliWord& a, const PauliWord& b) {
    return a.letters_ < b.letters_;
  }

 private:
  std::string letters_;
};

struct ExprTerm {
  double coeff;
  PauliWord word;
};

/// Real-weighted sum of Pauli words over a common qubit count.
/// Terms are kept canonical: lexicographically sorted, duplicates merged,
/// zero coefficients dropped.
class OperatorExpr {
 public:
  explicit OperatorExpr(std::vector<ExprTerm> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<ExprTerm>& terms() const { return terms_; }

  Matrix to_dense() const;

  /// Canonical printed form; parse(str()) == *this.
  std::string str() const;

  /// Grammar:
  ///   expr   := term (('+'|'-') term)*
  ///   term   := [number '*'] word
  ///   word   := [IXYZ]+
  ///   number := atom ['/' atom];  atom := decimal | 'sqrt2'
  /// Whitespace is insignificant.
  static OperatorExpr parse(std::string_view text);

  /// Least-squares-free exact expansion of a Hermitian operator in the
  /// Pauli word basis (real coefficients). Inverse of to_dense for
  /// operators with real Pauli spectra; coefficients below `drop_tol`
  /// are discarded.
  static OperatorExpr from_dense(const Matrix& op, double drop_tol = 1e-13);

 private:
  std::vector<ExprTerm> terms_;
  int n_qubits_;
};

}  // namespace ctx
