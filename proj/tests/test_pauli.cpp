#include <doctest.h>

#include <random>

#include "ctx/algebra.hpp"
#include "ctx/pauli.hpp"

using namespace ctx;

namespace {
Matrix word(const std::string& w) { return PauliWord(w).to_dense(); }
}  // namespace

TEST_CASE("single word parses to one unit term") {
  auto e = OperatorExpr::parse("XX");
  CHECK(e.n_qubits() == 2);
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].coeff == 1.0);
  CHECK(e.terms()[0].word.letters() == "XX");
  // 4x4 anti-diagonal of ones
  Matrix m = e.to_dense();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 3) = expect(1, 2) = expect(2, 1) = expect(3, 0) = 1;
  CHECK(max_abs(m - expect) == 0.0);
}

TEST_CASE("two-term expression with signed coefficients") {
  auto e = OperatorExpr::parse("0.70710678*ZY + -0.70710678*YI");
  CHECK(e.n_qubits() == 2);
  CHECK(e.terms().size() == 2);
  auto dense = e.to_dense();
  Matrix manual = 0.70710678 * word("ZY") - 0.70710678 * word("YI");
  CHECK(max_abs(dense - manual) < 1e-15);
}

TEST_CASE("mixed word lengths are rejected") {
  CHECK_THROWS_AS(OperatorExpr::parse("XX + ZYZ"), Error);
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(OperatorExpr::parse(""), ParseError);
  CHECK_THROWS_AS(OperatorExpr::parse("XA"), ParseError);
  CHECK_THROWS_AS(OperatorExpr::parse("2 XX"), ParseError);
  CHECK_THROWS_AS(OperatorExpr::parse("XX +"), ParseError);
  try {
    OperatorExpr::parse("XX + @Y");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("sqrt2 literals") {
  auto e = OperatorExpr::parse("1/sqrt2*XI + sqrt2*IZ");
  Matrix m = e.to_dense();
  Matrix manual = (1.0 / std::sqrt(2.0)) * word("XI") + std::sqrt(2.0) * word("IZ");
  CHECK(max_abs(m - manual) < 1e-15);
  auto frac = OperatorExpr::parse("1/2*ZZ");
  CHECK(frac.terms()[0].coeff == 0.5);
}

TEST_CASE("duplicate words merge and zeros drop") {
  auto e = OperatorExpr::parse("XX + XX");
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].coeff == 2.0);
  auto z = OperatorExpr::parse("XX - XX");
  CHECK(max_abs(z.to_dense()) == 0.0);
}

TEST_CASE("Z converts to diag(1,-1)") {
  Matrix z = OperatorExpr::parse("Z").to_dense();
  CHECK(z(0, 0) == Complex(1, 0));
  CHECK(z(1, 1) == Complex(-1, 0));
  CHECK(z(0, 1) == Complex(0, 0));
}

TEST_CASE("projector combination expands entry-exactly") {
  // direct 4x4 expansion by hand
  Matrix m = OperatorExpr::parse("0.5*II + 0.5*ZZ").to_dense();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 1;
  CHECK(max_abs(m - expect) == 0.0);
}

TEST_CASE("printer emits canonical form that round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> letter(0, 3);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::normal_distribution<double> coeff;
  const char* alphabet = "IXYZ";
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<ExprTerm> terms;
    const int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
      std::string w;
      for (int q = 0; q < n; ++q) w += alphabet[letter(rng)];
      terms.push_back({coeff(rng), PauliWord(w)});
    }
    OperatorExpr e(terms);
    auto round = OperatorExpr::parse(e.str());
    CHECK(max_abs(e.to_dense() - round.to_dense()) < 1e-14);
    CHECK(round.str() == e.str());
  }
}

TEST_CASE("bare signed words parse") {
  auto e = OperatorExpr::parse("-ZY + XI");
  CHECK(e.terms().size() == 2);
  CHECK(max_abs(e.to_dense() - (word("XI") - word("ZY"))) < 1e-15);
}

TEST_CASE("from_dense inverts to_dense") {
  auto e = OperatorExpr::parse("0.25*XY - 3*ZI + 1/sqrt2*YY");
  auto back = OperatorExpr::from_dense(e.to_dense());
  CHECK(max_abs(back.to_dense() - e.to_dense()) < 1e-13);
  CHECK(back.str() == e.str());
}

TEST_CASE("pauli words are Hermitian involutions, traceless unless identity") {
  for (const char* w : {"X", "XYZ", "ZZYX", "II", "IYI"}) {
    Matrix m = word(w);
    CHECK(is_hermitian(m, 1e-15));
    CHECK(is_involutory(m, 1e-15));
    if (!PauliWord(w).is_identity()) CHECK(std::abs(m.trace()) < 1e-15);
  }
}
