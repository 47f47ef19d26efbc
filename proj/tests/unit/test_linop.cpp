#include "doctest.h"

#include "oneshot/error.hpp"
#include "oneshot/linop.hpp"
#include "oneshot/quantum.hpp"
#include "oneshot/rng.hpp"
#include "oracles.hpp"
#include "states.hpp"

using namespace oneshot;
using testing_states::diag;
using testing_states::max_abs;

namespace {

HermitianOperator random_hermitian(Rng& rng, int d) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return HermitianOperator(ComplexMatrix(g + g.adjoint()));
}

HermitianOperator random_psd(Rng& rng, int d, int r) {
  const ComplexMatrix g = ginibre(d, r, rng);
  return HermitianOperator(ComplexMatrix(g * g.adjoint()));
}

}  // namespace

TEST_CASE("eigenvalues of named matrices") {
  CHECK(eig_hermitian(HermitianOperator::identity(2)).values.isApprox(RealVector::Ones(2)));
  const RealVector v = eig_hermitian(diag({0.25, 0.75})).values;
  CHECK(v(0) == doctest::Approx(0.25));
  CHECK(v(1) == doctest::Approx(0.75));

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const RealVector px = eig_hermitian(HermitianOperator(x)).values;
  CHECK(px(0) == doctest::Approx(-1.0));
  CHECK(px(1) == doctest::Approx(1.0));
}

TEST_CASE("eig rejects non-finite input") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(HermitianOperator{m}, MalformedInput);
}

TEST_CASE("asymmetry beyond tolerance is rejected, drift is symmetrized") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 1e-14;
  const HermitianOperator h(m);
  CHECK(h.matrix()(0, 1) == h.matrix()(1, 0));
  m(0, 1) = 1e-3;
  CHECK_THROWS(HermitianOperator{m});
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  Rng rng(101);
  for (int t = 0; t < 500; ++t) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const HermitianOperator m = random_hermitian(rng, d);
    const EigenDecomposition e = eig_hermitian(m);
    const double scale = std::max(1.0, operator_norm(m));
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    REQUIRE(max_abs(back - m.matrix()) <= 1e-9 * scale);
    REQUIRE(max_abs(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(d, d)) <= 1e-10);
    for (int i = 1; i < d; ++i) REQUIRE(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("eigendecomposition is deterministic") {
  Rng rng(5);
  const HermitianOperator m = random_hermitian(rng, 5);
  const EigenDecomposition a = eig_hermitian(m), b = eig_hermitian(m);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("operator and trace norms") {
  CHECK(operator_norm(HermitianOperator::identity(3)) == doctest::Approx(1.0));
  CHECK(operator_norm(diag({0.5, -2.0})) == doctest::Approx(2.0));
  CHECK(trace_norm(diag({1.0, -1.0})) == doctest::Approx(2.0));
  CHECK(trace_norm(testing_states::phi2().op()) == doctest::Approx(1.0));

  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const HermitianOperator h = random_hermitian(rng, d);
    const RealVector ev = oracle::eigenvalues(h.matrix());
    REQUIRE(std::abs(operator_norm(h) - ev.cwiseAbs().maxCoeff()) <= 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
    const ComplexMatrix g = ginibre(d, d, rng);
    REQUIRE(std::abs(trace_norm(g) - oracle::trace_norm(g)) <= 1e-9);
  }
}

TEST_CASE("generalized inverse, square roots and support") {
  const HermitianOperator inv = generalized_inverse(diag({2.0, 0.0}));
  CHECK(max_abs(inv.matrix() - diag({0.5, 0.0}).matrix()) < 1e-12);
  CHECK(max_abs(matrix_sqrt(diag({4.0, 9.0})).matrix() - diag({2.0, 3.0}).matrix()) < 1e-12);
  CHECK(max_abs(support_projector(diag({0.3, 0.0, 0.7})).matrix() - diag({1.0, 0.0, 1.0}).matrix()) < 1e-12);

  ComplexVector v(2);
  v << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const HermitianOperator p = HermitianOperator::projector(v);
  CHECK(max_abs(generalized_inverse(p).matrix() - p.matrix()) < 1e-10);
  CHECK(max_abs(matrix_sqrt(p).matrix() - p.matrix()) < 1e-10);
  CHECK(max_abs(support_projector(p).matrix() - p.matrix()) < 1e-10);
  CHECK_THROWS_AS(generalized_inverse(diag({1.0, -0.5})), NotPsd);

  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + static_cast<int>(rng.below(6));
    const int r = 1 + static_cast<int>(rng.below(d));
    const HermitianOperator m = random_psd(rng, d, r);
    const double s = std::max(1.0, operator_norm(m));
    const ComplexMatrix mi = generalized_inverse(m).matrix();
    REQUIRE(max_abs(m.matrix() * mi * m.matrix() - m.matrix()) <= 1e-8 * s);
    const ComplexMatrix root = matrix_sqrt(m).matrix();
    REQUIRE(max_abs(root * root - m.matrix()) <= 1e-8 * s);
    const ComplexMatrix sp = support_projector(m).matrix();
    REQUIRE(max_abs(sp * sp - sp) <= 1e-9);
    REQUIRE(rank(m) == r);
    if (r == d) REQUIRE(max_abs(m.matrix() * mi - ComplexMatrix::Identity(d, d)) <= 1e-8 * s);
  }
}

TEST_CASE("tensor products") {
  CHECK(max_abs(tensor(ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(ComplexMatrix::Identity(3, 3))) - ComplexMatrix::Identity(6, 6)) == 0.0);
  const ComplexMatrix t = tensor(diag({1.0, 2.0}).matrix(), diag({3.0, 5.0}).matrix());
  CHECK(max_abs(t - diag({3.0, 5.0, 6.0, 10.0}).matrix()) == 0.0);

  Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng), c = ginibre(2, 2, rng), d = ginibre(3, 3, rng);
    REQUIRE(max_abs(tensor(a, b) * tensor(c, d) - tensor(ComplexMatrix(a * c), ComplexMatrix(b * d))) <= 1e-10);
    REQUIRE(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) <= 1e-10);
  }
}

TEST_CASE("partial trace") {
  const ComplexMatrix reduced = partial_trace(testing_states::phi2().matrix(), DimPair{2, 2}, Subsystem::B);
  CHECK(max_abs(reduced - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(5, 5), DimPair{2, 2}, Subsystem::A), DimensionMismatch);

  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const DimPair dims{2 + static_cast<int>(rng.below(3)), 2 + static_cast<int>(rng.below(3))};
    const HermitianOperator a = random_psd(rng, dims.a, dims.a), b = random_psd(rng, dims.b, dims.b);
    const ComplexMatrix ab = tensor(a.matrix(), b.matrix());
    REQUIRE(max_abs(partial_trace(ab, dims, Subsystem::B) - b.trace() * a.matrix()) <= 1e-10 * (1 + a.trace() * b.trace()));
    REQUIRE(max_abs(partial_trace(ab, dims, Subsystem::A) - a.trace() * b.matrix()) <= 1e-10 * (1 + a.trace() * b.trace()));
    const ComplexMatrix g = ginibre(dims.total(), dims.total(), rng);
    REQUIRE(std::abs(partial_trace(g, dims, Subsystem::A).trace() - g.trace()) <= 1e-12 * (1 + g.cwiseAbs().sum()));
    REQUIRE(max_abs(partial_trace(g, dims, Subsystem::B) - oracle::keep_a(g, dims.a, dims.b)) <= 1e-12 * (1 + g.cwiseAbs().sum()));
    REQUIRE(max_abs(partial_trace(g, dims, Subsystem::A) - oracle::keep_b(g, dims.a, dims.b)) <= 1e-12 * (1 + g.cwiseAbs().sum()));
  }
}

TEST_CASE("operator-norm domination under a larger denominator") {
  Rng rng(19);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const HermitianOperator b = random_psd(rng, d, 1 + static_cast<int>(rng.below(d)));
    const ComplexMatrix v = support_basis(b);
    const HermitianOperator a = conjugate(v, random_psd(rng, static_cast<int>(v.cols()), 1));
    const HermitianOperator c = b + random_psd(rng, d, 1 + static_cast<int>(rng.below(d)));
    const double lhs = lambda_max(conjugate(inv_sqrt(c).matrix(), a));
    const double rhs = lambda_max(conjugate(inv_sqrt(b).matrix(), a));
    REQUIRE(lhs <= rhs + 1e-8 * std::max(1.0, rhs));
  }
}

TEST_CASE("Jordan decomposition") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const HermitianOperator h = random_hermitian(rng, 4);
    const JordanParts j = jordan_decomposition(h);
    REQUIRE(max_abs((j.plus - j.minus).matrix() - h.matrix()) <= 1e-9);
    REQUIRE(lambda_min(j.plus) >= -1e-9);
    REQUIRE(lambda_min(j.minus) >= -1e-9);
    REQUIRE(max_abs(j.plus.matrix() * j.minus.matrix()) <= 1e-9);
  }
}
