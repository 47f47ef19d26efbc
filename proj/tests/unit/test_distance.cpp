#include "doctest.h"

#include "oneshot/distance.hpp"
#include "oneshot/error.hpp"
#include "oracles.hpp"
#include "states.hpp"

using namespace oneshot;
using testing_states::diag;
using testing_states::max_abs;

namespace {

DensityOperator basis_state(int i, int d) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return testing_states::pure(v, DimPair{d, 1});
}

DensityOperator random_sub(Rng& rng, int d) {
  DensityOperator r = random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed);
  return rng.uniform() < 0.5 ? r.scaled(0.3 + 0.7 * rng.uniform()) : r;
}

// Fidelity from an independent route: SVD of sqrt(rho) sqrt(sigma) via Eigen.
double fidelity_oracle(const DensityOperator& a, const DensityOperator& b) {
  const auto root = [](const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    return ComplexMatrix(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
                         es.eigenvectors().adjoint());
  };
  const double overlap = oracle::trace_norm(root(a.matrix()) * root(b.matrix()));
  // Traces within 1e-12 of one are normalized states carrying rounding.
  const auto deficit = [](double t) { return 1 - t > 1e-12 ? 1 - t : 0.0; };
  return overlap + std::sqrt(deficit(a.trace()) * deficit(b.trace()));
}

}  // namespace

TEST_CASE("fidelity named values") {
  Rng rng(41);
  const DensityOperator rho = random_density(DimPair{3, 1}, rng, StateKind::GinibreMixed);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(basis_state(0, 2), basis_state(1, 2)) == doctest::Approx(0.0));
  const DensityOperator half = basis_state(0, 2).scaled(0.5);
  CHECK(fidelity(half, half) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity(basis_state(0, 2), basis_state(0, 3)), DimensionMismatch);
}

TEST_CASE("purified distance named values") {
  Rng rng(43);
  const DensityOperator rho = random_density(DimPair{3, 1}, rng, StateKind::GinibreMixed);
  CHECK(purified_distance(rho, rho) == 0.0);
  CHECK(purified_distance(rho.scaled(0.4), rho.scaled(0.4)) == 0.0);
  CHECK(purified_distance(basis_state(0, 2), basis_state(1, 2)) == doctest::Approx(1.0));
  // F(diag(1,0), I/2) = sqrt(1/2) by hand, so P = sqrt(1/2).
  CHECK(purified_distance(basis_state(0, 2), maximally_mixed(2)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("fidelity agrees with an independent evaluation") {
  Rng rng(47);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const DensityOperator a = random_sub(rng, d), b = random_sub(rng, d);
    REQUIRE(std::abs(fidelity(a, b) - fidelity_oracle(a, b)) <= 1e-9);
  }
}

TEST_CASE("generalized trace distance") {
  const DensityOperator q = maximally_mixed(2);
  CHECK(trace_distance_generalized(q, q) == 0.0);
  CHECK(trace_distance_generalized(basis_state(0, 2), basis_state(1, 2)) == doctest::Approx(1.0));
  CHECK(trace_distance_generalized(q, q.scaled(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("ball membership") {
  Rng rng(53);
  const DensityOperator rho = random_density(DimPair{3, 1}, rng, StateKind::GinibreMixed);
  CHECK(in_ball(rho, rho, 0.0));
  for (double k : {0.5, 0.8, 0.95}) {
    const double eps = std::sqrt(1 - k * k);
    CHECK(in_ball(rho.scaled(k), rho, eps));
  }
  CHECK_FALSE(in_ball(basis_state(0, 2), basis_state(1, 2), 0.5));
  CHECK_THROWS_AS(require_smoothing_radius(0.8, 0.5), SmoothingParameterError);
  CHECK_NOTHROW(require_smoothing_radius(0.5, 0.5));
}

TEST_CASE("metric axioms and the trace/purified sandwich") {
  Rng rng(59);
  for (int t = 0; t < 500; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const DensityOperator a = random_sub(rng, d), b = random_sub(rng, d), c = random_sub(rng, d);
    const double ab = purified_distance(a, b);
    REQUIRE(ab == purified_distance(b, a));
    REQUIRE(purified_distance(a, c) <= ab + purified_distance(b, c) + 1e-9);
    const double dist = trace_distance_generalized(a, b);
    REQUIRE(dist <= ab + 1e-9);
    REQUIRE(ab <= std::sqrt(2 * dist) + 1e-9);
  }
}

TEST_CASE("scaling corollary") {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const DensityOperator a = random_sub(rng, 2 + static_cast<int>(rng.below(5)));
    for (int i = 1; i <= 10; ++i) {
      const double k = 0.1 * i;
      REQUIRE(purified_distance(a, a.scaled(k)) <= std::sqrt(std::max(0.0, 1 - k * k)) + 1e-9);
    }
  }
}

TEST_CASE("Uhlmann partner") {
  Rng rng(67);
  const DensityOperator rho = random_density(DimPair{3, 1}, rng, StateKind::GinibreMixed);
  const Purification phi = purify(rho);
  const Purification same = uhlmann_partner(phi, rho);
  CHECK(purified_distance(phi, same) <= 1e-7);
  CHECK(std::abs(std::abs(phi.vector.dot(same.vector)) - 1.0) <= 1e-9);

  const DensityOperator low = random_density(DimPair{3, 1}, rng, StateKind::RankK, 1);
  CHECK_THROWS_AS(uhlmann_partner(purify(low), rho), ParameterError);

  for (int t = 0; t < 200; ++t) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const DensityOperator a = random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed);
    const DensityOperator b = random_sub(rng, d);
    const Purification pa = purify(a);
    const Purification pb = uhlmann_partner(pa, b);
    REQUIRE(max_abs(pb.reduced_system().matrix() - b.matrix()) <= 1e-9);
    REQUIRE(std::abs(fidelity(pa, pb) - fidelity(a, b)) <= 1e-8);
  }
}

TEST_CASE("extension partner") {
  Rng rng(71);
  const DensityOperator ext = random_density(DimPair{2, 3}, rng, StateKind::GinibreMixed);
  const DensityOperator rho = ext.marginal(Subsystem::A);
  const DensityOperator same = extension_partner(ext, rho);
  CHECK(purified_distance(same, ext) <= 1e-7);

  // Product extension: the distance is preserved.
  const DensityOperator tau = random_density(DimPair{2, 1}, rng, StateKind::GinibreMixed);
  const DensityOperator sigma = random_density(DimPair{2, 1}, rng, StateKind::GinibreMixed);
  const DensityOperator prod(tensor(sigma.op(), tau.op()), DimPair{2, 2});
  const DensityOperator bar = extension_partner(prod, rho);
  CHECK(std::abs(purified_distance(bar, prod) - purified_distance(rho, sigma)) <= 1e-8);

  for (int t = 0; t < 100; ++t) {
    const DensityOperator e = random_density(DimPair{2, 2}, rng, StateKind::GinibreMixed);
    const DensityOperator s = random_sub(rng, 2);
    const DensityOperator p = extension_partner(e, s);
    REQUIRE(max_abs(p.marginal(Subsystem::A).matrix() - s.matrix()) <= 1e-8);
    REQUIRE(std::abs(purified_distance(p, e) - purified_distance(s, e.marginal(Subsystem::A))) <= 1e-8);
  }
}
