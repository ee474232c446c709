#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ctx {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances for the algebraic predicates. All canonical
/// computations combine exact +-1, +-1/sqrt2 and cos/sin(pi/8) entries,
/// so 1e-9 sits many orders above float noise.
struct Tolerances {
  double hermitian = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
  double imaginary = 1e-9;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar violation; carries the byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold; the message names the
/// violated relation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctx
