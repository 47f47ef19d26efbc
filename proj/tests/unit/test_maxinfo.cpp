#include "doctest.h"

#include <cmath>

#include "oneshot/distance.hpp"
#include "oneshot/error.hpp"
#include "oneshot/maxinfo.hpp"
#include "oracles.hpp"
#include "states.hpp"

using namespace oneshot;
using testing_states::max_abs;

namespace {

Imax3Config quick() {
  Imax3Config c;
  c.restarts = 2;
  return c;
}

// Inverse square root on the support, straight from Eigen.
ComplexMatrix inv_sqrt_oracle(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  Eigen::VectorXd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 1e-12 ? 1.0 / std::sqrt(d(i)) : 0.0;
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// |phi> as the system x ancilla coefficient matrix: (X (x) Y)|phi> <-> X M Y^T.
ComplexMatrix coefficients(const Purification& p) {
  ComplexMatrix m(p.system_dim, p.ancilla_dim);
  for (int s = 0; s < p.system_dim; ++s)
    for (int r = 0; r < p.ancilla_dim; ++r) m(s, r) = p.vector(s * p.ancilla_dim + r);
  return m;
}

double dual_residual(const Purification& p, const HermitianOperator& pi_a, const HermitianOperator& pi_b) {
  const ComplexMatrix m = coefficients(p);
  const ComplexMatrix lhs = pi_a.matrix() * m * inv_sqrt_oracle(p.reduced_ancilla().matrix()).transpose();
  const ComplexMatrix rhs = inv_sqrt_oracle(p.reduced_system().matrix()) * m * pi_b.matrix().transpose();
  return max_abs(lhs - rhs);
}

HermitianOperator random_projector(Rng& rng, int d) {
  const ComplexMatrix u = random_unitary(d, rng);
  const int r = 1 + static_cast<int>(rng.below(d));
  return HermitianOperator(ComplexMatrix(u.leftCols(r) * u.leftCols(r).adjoint()));
}

bool all_posts_ok(const InequalityReport& r) {
  for (const Postcondition& p : r.postconditions)
    if (!p.ok) return false;
  return true;
}

}  // namespace

TEST_CASE("correction terms") {
  const double cut = 1 - std::sqrt(0.99);
  CHECK(bounds::f(0.1, 0.0) == doctest::Approx(std::log2(1 / cut + 1)).epsilon(1e-14));
  CHECK(bounds::f(0.1, 0.0) == doctest::Approx(7.64745).epsilon(1e-6));
  CHECK(bounds::g(0.1) == doctest::Approx(std::log2(4.8 / (0.9 * cut))).epsilon(1e-14));
  CHECK(bounds::g(0.1) == doctest::Approx(10.05527).epsilon(1e-6));
  CHECK(bounds::l(0.1) == doctest::Approx(2 * std::log2(0.01 / 24)).epsilon(1e-14));
  CHECK(bounds::l(0.1) == doctest::Approx(-22.45764).epsilon(1e-6));
  CHECK(bounds::c(0.1, 1.0) == doctest::Approx(bounds::f(0.1, 0.0)).epsilon(1e-14));
  CHECK(bounds::f(0.3, 0.2) > bounds::f(0.3, 0.0));
  CHECK(bounds::f(0.3, 0.0) < bounds::f(0.1, 0.0));
}

TEST_CASE("named max-information values") {
  const DensityOperator product = testing_states::product_state();
  CHECK(std::abs(imax1(product).value) <= 1e-9);
  CHECK(std::abs(imax2(product).value) <= 1e-7);
  CHECK(std::abs(imax3(product, quick()).value) <= 1e-6);

  const DensityOperator phi = testing_states::phi2();
  CHECK(imax1(phi).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(imax2(phi).value == doctest::Approx(2.0).epsilon(1e-7));
  const EntropyValue i3 = imax3(phi, quick());
  CHECK(i3.upper == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(i3.lower <= 2.0 + 1e-7);
  const oracle::GridResult grid = oracle::bloch_grid_min(phi.marginal(Subsystem::A).matrix(), phi.matrix());
  CHECK(std::abs(std::log2(grid.value) - 2.0) <= 2e-3);

  const DensityOperator cl = testing_states::classical_pair();
  CHECK(imax1(cl).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(imax2(cl).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(imax3(cl, quick()).upper == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("second variant on commuting states matches the diagonal program") {
  Rng rng(211);
  for (int t = 0; t < 40; ++t) {
    const int da = 2 + static_cast<int>(rng.below(2)), db = 2 + static_cast<int>(rng.below(2));
    Eigen::VectorXd p(da * db);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.uniform_open_zero();
    p /= p.sum();
    Eigen::VectorXd pa = Eigen::VectorXd::Zero(da);
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b) pa(a) += p(a * db + b);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    const DensityOperator rho(HermitianOperator::diagonal(pv), DimPair{da, db});
    const double expected = std::log2(oracle::diagonal_lp(pa, p, da, db));
    const EntropyValue v = imax2(rho);
    REQUIRE(v.lower <= expected + 1e-7);
    REQUIRE(std::abs(v.upper - expected) <= 1e-6);
  }
}

TEST_CASE("second variant on qubit pairs matches the Bloch grid") {
  Rng rng(223);
  for (int t = 0; t < 10; ++t) {
    const DensityOperator rho = random_density(DimPair{2, 2}, rng, StateKind::GinibreMixed);
    const oracle::GridResult g = oracle::bloch_grid_min(rho.marginal(Subsystem::A).matrix(), rho.matrix());
    const EntropyValue v = imax2(rho);
    REQUIRE(std::abs(v.upper - std::log2(g.value)) <= 2e-3);
    const DensityOperator sigma = imax2_optimizer(v);
    REQUIRE(std::abs(sigma.trace() - 1.0) <= 1e-9);
  }
}

TEST_CASE("ordering of the three variants") {
  Rng rng(227);
  for (int t = 0; t < 20; ++t) {
    const DimPair d{2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2))};
    const DensityOperator rho = random_density(d, rng, t % 4 == 3 ? StateKind::RankK : StateKind::GinibreMixed, 2);
    const EntropyValue i1 = imax1(rho), i2 = imax2(rho), i3 = imax3(rho, quick());
    REQUIRE(i2.lower <= i1.value + 1e-7);
    REQUIRE(i3.lower <= i2.upper + 1e-7);
    REQUIRE(i3.upper <= 2 * std::log2(std::min(d.a, d.b)) + 1e-7);
    REQUIRE(i3.lower >= -1e-9);
  }
}

TEST_CASE("dual projector") {
  Rng rng(229);
  const DensityOperator rho = random_density(DimPair{3, 1}, rng, StateKind::GinibreMixed);
  const Purification phi = purify(rho);
  const HermitianOperator id = HermitianOperator::identity(3);
  CHECK(max_abs(dual_projector(phi, id).matrix() - ComplexMatrix::Identity(phi.ancilla_dim, phi.ancilla_dim)) <= 1e-10);

  // The projector onto the top Schmidt vector maps to the partner vector.
  const Eigen::Index top = phi.schmidt.coefficients.size() - 1;
  const ComplexVector left = phi.schmidt.left.col(top);
  const HermitianOperator pb = dual_projector(phi, HermitianOperator::projector(left));
  CHECK(max_abs(pb.matrix() - ComplexMatrix(phi.schmidt.right.col(top).conjugate() * phi.schmidt.right.col(top).transpose())) <= 1e-9);

  for (int t = 0; t < 500; ++t) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const DensityOperator r = random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed);
    const Purification p = purify(r);
    const HermitianOperator pa = random_projector(rng, d);
    const HermitianOperator b = dual_projector(p, pa);
    REQUIRE(dual_residual(p, pa, b) <= 1e-7);
    REQUIRE(max_abs(b.matrix() * b.matrix() - b.matrix()) <= 1e-9);
  }
}

TEST_CASE("first smoothing construction") {
  const DensityOperator product = testing_states::product_state();
  const InequalityReport rp = check_theorem("thm1", product, 0.1, 0.0);
  CHECK(all_posts_ok(rp));
  CHECK(rp.verdict == Verdict::Holds);
  CHECK(rp.slack >= bounds::f(0.1, 0.0) - 1e-5);

  const DensityOperator phi = testing_states::phi2();
  const Imax3Result i3 = imax3_detailed(phi, quick());
  const SmoothingConstruction s = smooth_state_thm1(phi, 0.3, i3.sigma_a, i3.sigma_b);
  CHECK(s.cut_weight <= 1 - std::sqrt(1 - 0.09) + 1e-12);
  CHECK(purified_distance(s.output_state(), phi) <= 0.3 + 1e-7);
  CHECK(max_abs(s.output_state().marginal(Subsystem::A).matrix() - phi.marginal(Subsystem::A).matrix()) <= 1e-8);
  const InequalityReport r = check_theorem("thm1", phi, 0.3, 0.0);
  CHECK(all_posts_ok(r));
  CHECK(r.verdict == Verdict::Holds);
}

TEST_CASE("second smoothing construction") {
  const DensityOperator product = testing_states::product_state();
  const SmoothingConstruction s = smooth_state_thm2(product, 0.2, product.marginal(Subsystem::B));
  CHECK(max_abs(s.output.matrix() - product.matrix()) <= 1e-8);
  CHECK(s.delta_minus.trace() <= 1e-9);
  const InequalityReport rp = check_theorem("thm2", product, 0.2, 0.0);
  CHECK(all_posts_ok(rp));
  CHECK(rp.verdict == Verdict::Holds);

  const InequalityReport r = check_theorem("thm2", testing_states::phi2(), 0.2, 0.0);
  CHECK(all_posts_ok(r));
  CHECK(r.verdict == Verdict::Holds);
  CHECK(r.quantities.at("delta_minus_trace") <= 0.4 + 1e-7);
  CHECK(r.quantities.at("purified_distance") <= 0.2 + 2 * std::sqrt(0.2) + 1e-7);
}

TEST_CASE("inequality checks on named states") {
  const DensityOperator phi = testing_states::phi2();
  const InequalityReport b13 = check_theorem("lemma_b13", phi, 0.0, 0.0);
  CHECK(b13.verdict == Verdict::Holds);
  CHECK(std::abs(b13.slack) <= 1e-6);

  StateAnalysis st(testing_states::product_state(), quick());
  for (const char* name : {"thm1", "thm2", "cor3", "chain_upper", "symmetry_i3", "dim_bound"}) {
    CAPTURE(name);
    const InequalityReport r = check_theorem(name, st, 0.1, 0.0);
    CHECK(r.verdict == Verdict::Holds);
  }
  CHECK_THROWS_AS(check_theorem("thm9", st, 0.1, 0.0), ParameterError);
  CHECK_THROWS_AS(check_theorem("thm1", st, 1.0, 0.0), SmoothingParameterError);
}

TEST_CASE("symmetry and dimension bound on random states") {
  Rng rng(233);
  for (int t = 0; t < 10; ++t) {
    const DimPair d{2 + static_cast<int>(rng.below(2)), 2 + static_cast<int>(rng.below(2))};
    StateAnalysis st(random_density(d, rng, StateKind::GinibreMixed), quick());
    REQUIRE(check_theorem("symmetry_i3", st, 0.0, 0.0).verdict == Verdict::Holds);
    REQUIRE(check_theorem("dim_bound", st, 0.0, 0.0).verdict == Verdict::Holds);
  }
}

TEST_CASE("verdict rule") {
  CHECK(classify({0.0, 1.0}, {1.0, 2.0}, {}) == Verdict::Holds);
  CHECK(classify({0.0, 1.0}, {1.0 - 5e-8, 2.0}, {}) == Verdict::Holds);
  CHECK(classify({0.0, 1.5}, {1.0, 2.0}, {}) == Verdict::Inconclusive);
  CHECK(classify({2.5, 3.0}, {1.0, 2.0}, {}) == Verdict::Violated);
  CHECK(classify({0.0, 1.0}, {1.0, 2.0}, {Postcondition{"x", 2.0, 1.0, false}}) == Verdict::Violated);
}

TEST_CASE("i.i.d. scan") {
  const std::vector<IidRow> prod = iid_scan(testing_states::product_state(), 2);
  REQUIRE(prod.size() == 2);
  for (const IidRow& r : prod) {
    CHECK(std::abs(r.imax1_rate) <= 1e-8);
    CHECK(std::abs(r.imax2_rate.upper) <= 1e-6);
    CHECK(std::abs(r.mutual_information) <= 1e-9);
  }
  const std::vector<IidRow> phi = iid_scan(testing_states::phi2(), 3);
  for (const IidRow& r : phi) {
    CHECK(r.imax1_rate == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(r.imax2_rate.upper == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.mutual_information == doctest::Approx(2.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(iid_scan(testing_states::phi2(), 5), ParameterError);
  CHECK_THROWS_AS(iid_scan(testing_states::phi2(), 0), ParameterError);
}
