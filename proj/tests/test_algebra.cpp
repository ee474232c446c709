#include <doctest.h>

#include <random>

#include "ctx/algebra.hpp"
#include "ctx/contextuality.hpp"
#include "ctx/pauli.hpp"

using namespace ctx;

namespace {
Matrix word(const std::string& w) { return PauliWord(w).to_dense(); }
}  // namespace

TEST_CASE("basic matrix semantics") {
  Matrix x = word("X");
  CHECK(max_abs(x * x - Matrix::Identity(2, 2)) == 0.0);
  CHECK(Matrix::Identity(4, 4).trace() == Complex(4, 0));
  Matrix zz = tensor(word("Z"), word("Z"));
  CHECK(zz(0, 0) == Complex(1, 0));
  CHECK(zz(1, 1) == Complex(-1, 0));
  CHECK(zz(2, 2) == Complex(-1, 0));
  CHECK(zz(3, 3) == Complex(1, 0));
}

TEST_CASE("trace of a product is basis independent") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix a(3, 3), b(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      a(r, c) = Complex(g(rng), g(rng));
      b(r, c) = Complex(g(rng), g(rng));
    }
  CHECK(std::abs((a * b).trace() - (b * a).trace()) < 1e-12);
}

TEST_CASE("commutator and anticommutator") {
  CHECK(max_abs(anticommutator(word("X"), word("Z"))) == 0.0);
  CHECK(max_abs(commutator(word("XX"), word("ZY"))) == 0.0);
  // {A2, A4} = 0 for the canonical two-qubit pair, by direct multiplication
  CHECK(max_abs(anticommutator(word("ZY"), word("YY"))) == 0.0);
  CHECK_THROWS_AS(commutator(word("X"), word("XX")), DimensionError);
}

TEST_CASE("words commute or anticommute per the sign rule") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> letter(0, 3);
  const char* alphabet = "IXYZ";
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    std::string w1, w2;
    for (int q = 0; q < n; ++q) {
      w1 += alphabet[letter(rng)];
      w2 += alphabet[letter(rng)];
    }
    PauliWord a(w1), b(w2);
    if (a.commutes_with(b))
      CHECK(max_abs(commutator(a.to_dense(), b.to_dense())) == 0.0);
    else
      CHECK(max_abs(anticommutator(a.to_dense(), b.to_dense())) == 0.0);
  }
}

TEST_CASE("expectation values") {
  auto mixed = DensityMatrix::validated(Matrix::Identity(4, 4) / 4.0);
  CHECK(expectation(mixed, word("ZZ")) == 0.0);

  auto s = canonical_scenario(2);
  CHECK(expectation(s.state, word("YZ")) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(expectation(s.state, Matrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-14));

  Matrix non_hermitian = word("X") + Complex(0, 1) * word("Z");
  CHECK_THROWS_AS(expectation(mixed, non_hermitian), PreconditionError);
  CHECK_THROWS_AS(expectation(mixed, word("ZZZ")), DimensionError);
}

TEST_CASE("predicates") {
  CHECK(is_involutory(word("XYZ")));
  CHECK(is_projector((Matrix::Identity(2, 2) + word("Z")) / 2.0));
  CHECK_FALSE(is_projector(word("X")));
  // the canonical three-qubit state is a valid density matrix; frozen from
  // an eigenvalue scan of the explicit 8x8 matrix
  auto s8 = canonical_scenario(3);
  CHECK(is_density(s8.state.matrix()));
  CHECK_FALSE(is_density(word("ZZ")));
}

TEST_CASE("density validation rejects bad inputs") {
  CHECK_THROWS_AS(DensityMatrix::validated(word("Z")), PreconditionError);  // trace 0
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::validated(neg), PreconditionError);  // negative eigenvalue
  Matrix ok = Matrix::Zero(2, 2);
  ok(0, 0) = 1.0;
  auto rho = DensityMatrix::validated(ok);
  CHECK(rho.purity() == doctest::Approx(1.0));
}

TEST_CASE("principal vector is exact for pure states") {
  auto s = canonical_scenario(2);
  Vector psi = s.state.principal_vector();
  CHECK((s.state.matrix() * psi - psi).norm() < 1e-12);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
}
