#include "doctest.h"

#include "oneshot/distance.hpp"
#include "oneshot/error.hpp"
#include "oneshot/maxinfo.hpp"
#include "oneshot/quantum.hpp"
#include "oracles.hpp"
#include "states.hpp"

using namespace oneshot;
using testing_states::diag;
using testing_states::max_abs;

TEST_CASE("density operator classification") {
  CHECK(testing_states::phi2().trace_class() == TraceClass::Normalized);
  CHECK(testing_states::single(diag({0.25, 0.25})).trace_class() == TraceClass::Subnormalized);
  CHECK_THROWS_AS(testing_states::single(diag({0.75, 0.5})), MalformedInput);
  CHECK_THROWS_AS(testing_states::single(diag({1.1, -0.1})), NotPsd);
  CHECK_THROWS_AS(DensityOperator(diag({0.5, 0.5}), DimPair{2, 2}), DimensionMismatch);
}

TEST_CASE("purify") {
  ComplexVector psi(2);
  psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const Purification p = purify(testing_states::pure(psi, DimPair{2, 1}));
  CHECK(p.ancilla_dim == 1);
  CHECK(p.schmidt.coefficients.size() == 1);

  const Purification mixed = purify(maximally_mixed(2));
  REQUIRE(mixed.schmidt.coefficients.size() == 2);
  CHECK(mixed.schmidt.coefficients(0) == doctest::Approx(0.5));
  CHECK(mixed.schmidt.coefficients(1) == doctest::Approx(0.5));
  CHECK(max_abs(mixed.reduced_ancilla().matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-12);

  const Purification half = purify(testing_states::pure(psi, DimPair{2, 1}).scaled(0.5));
  CHECK(half.norm2() == doctest::Approx(0.5));

  CHECK_THROWS(purify(testing_states::single(diag({0.0, 0.0}))));
}

TEST_CASE("purification round trip on random states") {
  Rng rng(29);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const int r = 1 + static_cast<int>(rng.below(d));
    DensityOperator rho = random_density(DimPair{d, 1}, rng, StateKind::RankK, r);
    if (t % 2) rho = rho.scaled(0.5);
    const Purification p = purify(rho);
    REQUIRE(p.ancilla_dim == r);
    REQUIRE(std::abs(p.norm2() - rho.trace()) <= 1e-10);
    REQUIRE(max_abs(p.reduced_system().matrix() - rho.matrix()) <= 1e-9);
    ComplexVector rebuilt = ComplexVector::Zero(p.vector.size());
    for (Eigen::Index i = 0; i < p.schmidt.coefficients.size(); ++i) {
      rebuilt += std::sqrt(p.schmidt.coefficients(i)) * tensor(ComplexVector(p.schmidt.left.col(i)), ComplexVector(p.schmidt.right.col(i)));
    }
    REQUIRE((rebuilt - p.vector).norm() <= 1e-9);
  }
}

TEST_CASE("channels") {
  Rng rng(31);
  const DensityOperator rho = random_density(DimPair{2, 2}, rng, StateKind::GinibreMixed);
  CHECK(max_abs(apply_channel(KrausChannel::identity(DimPair{2, 2}), rho).matrix() - rho.matrix()) < 1e-14);

  const DensityOperator q = random_density(DimPair{2, 1}, rng, StateKind::GinibreMixed);
  const DensityOperator deph = apply_channel(KrausChannel::full_dephasing(2), q);
  CHECK(max_abs(deph.matrix() - ComplexMatrix(q.matrix().diagonal().asDiagonal())) < 1e-14);

  const DensityOperator traced = apply_channel(KrausChannel::partial_trace(DimPair{2, 2}, Subsystem::B), rho);
  CHECK(max_abs(traced.matrix() - partial_trace(rho.matrix(), DimPair{2, 2}, Subsystem::B)) < 1e-14);

  CHECK_THROWS_AS(apply_channel(KrausChannel::full_dephasing(3), q), DimensionMismatch);

  const KrausChannel e = product_channel(KrausChannel::full_dephasing(2), KrausChannel::identity(DimPair{2, 1}));
  const DensityOperator out = apply_channel(e, testing_states::phi2());
  CHECK(max_abs(out.matrix() - testing_states::classical_pair().matrix()) < 1e-14);

  const KrausChannel ii = product_channel(KrausChannel::identity(DimPair{2, 1}), KrausChannel::identity(DimPair{3, 1}));
  const DensityOperator r6 = random_density(DimPair{2, 3}, rng, StateKind::GinibreMixed);
  CHECK(max_abs(apply_channel(ii, r6).matrix() - r6.matrix()) < 1e-14);

  for (int t = 0; t < 100; ++t) {
    const int din = 2 + static_cast<int>(rng.below(4));
    const int dout = 2 + static_cast<int>(rng.below(3));
    const int nk = (din + dout - 1) / dout + static_cast<int>(rng.below(2));
    const KrausChannel c = KrausChannel::random_cptp(din, dout, nk, rng);
    REQUIRE(c.completeness_defect() <= 1e-9);
    const DensityOperator in = random_density(DimPair{din, 1}, rng, StateKind::GinibreMixed);
    const DensityOperator o = apply_channel(c, in);
    REQUIRE(std::abs(o.trace() - 1.0) <= 1e-10);
    REQUIRE(oracle::eigenvalues(o.matrix()).minCoeff() >= -1e-12);
  }
}

TEST_CASE("random generators") {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    const DimPair d{1 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(4))};
    const StateKind kind = static_cast<StateKind>(seed % 3);
    const int k = kind == StateKind::RankK ? 1 + static_cast<int>(rng.below(d.total())) : 0;
    const DensityOperator rho = random_density(d, seed, kind, k);
    REQUIRE(std::abs(rho.trace() - 1.0) <= 1e-12);
    REQUIRE(rho.trace_class() == TraceClass::Normalized);
    REQUIRE(oracle::eigenvalues(rho.matrix()).minCoeff() >= -1e-10);
  }
  const DensityOperator pure = random_density(DimPair{3, 2}, 4, StateKind::HaarPure);
  CHECK((pure.matrix() * pure.matrix()).trace().real() == doctest::Approx(1.0).epsilon(1e-10));

  const DensityOperator a = random_density(DimPair{2, 2}, 7, StateKind::GinibreMixed);
  const DensityOperator b = random_density(DimPair{2, 2}, 7, StateKind::GinibreMixed);
  CHECK(a.matrix() == b.matrix());
  int collisions = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DensityOperator x = random_density(DimPair{2, 2}, s, StateKind::GinibreMixed);
    const DensityOperator y = random_density(DimPair{2, 2}, s + 1000, StateKind::GinibreMixed);
    if (purified_distance(x, y) <= 1e-3) ++collisions;
  }
  CHECK(collisions == 0);
  CHECK_THROWS_AS(random_density(DimPair{2, 1}, 1, StateKind::RankK, 3), ParameterError);
}

TEST_CASE("i.i.d. powers") {
  Rng rng(37);
  const DensityOperator rho = random_density(DimPair{2, 3}, rng, StateKind::GinibreMixed);
  CHECK(max_abs(iid_power(rho, 1).matrix() - rho.matrix()) == 0.0);

  const DensityOperator sub = rho.scaled(0.6);
  CHECK(iid_power(sub, 2).trace() == doctest::Approx(0.36));

  // A1 A2 | B1 B2 ordering: tracing out A2 and B2 recovers rho.
  const DensityOperator two = iid_power(rho, 2);
  CHECK(two.dims() == DimPair{4, 9});
  const std::vector<int> dims{2, 2, 3, 3};
  const std::vector<int> perm{0, 2, 1, 3};
  const ComplexMatrix regrouped = permute_subsystems(two.matrix(), dims, perm);
  const ComplexMatrix first = partial_trace(regrouped, DimPair{6, 6}, Subsystem::B);
  CHECK(max_abs(first - rho.matrix()) <= 1e-9);

  CHECK(imax1(iid_power(testing_states::phi2(), 2)).value == doctest::Approx(4.0).epsilon(1e-7));
  CHECK_THROWS_AS(iid_power(rho, 5), ParameterError);
  CHECK_THROWS_AS(iid_power(rho, 0), ParameterError);
}
