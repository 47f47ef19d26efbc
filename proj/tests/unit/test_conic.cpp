#include "doctest.h"

#include "oneshot/conic.hpp"
#include "oneshot/error.hpp"
#include "oracles.hpp"
#include "states.hpp"

using namespace oneshot;
using testing_states::diag;

namespace {

void check_certificate(const HermitianOperator& c, const DensityOperator& rho, const CertifiedValue& v, const SolverConfig& cfg) {
  REQUIRE(v.lower <= v.upper);
  REQUIRE(v.gap() <= cfg.tol * std::max(1.0, v.upper));
  REQUIRE(primal_defect(c, rho, v.primal_witness) >= -1e-8);
  REQUIRE(lambda_min(v.primal_witness) >= -1e-8);
  REQUIRE(std::abs(v.upper - v.primal_witness.trace()) <= 1e-12 * std::max(1.0, v.upper));
  REQUIRE(std::abs(dual_lower_bound(c, rho, v.dual_witness) - v.lower) <= 1e-10 * std::max(1.0, v.upper));
  REQUIRE(v.lower <= v.upper + 1e-8);
}

}  // namespace

TEST_CASE("trivial A system returns rho_B") {
  Rng rng(73);
  const DensityOperator rb = random_density(DimPair{1, 3}, rng, StateKind::GinibreMixed);
  const CertifiedValue v = min_trace_dominating(HermitianOperator::identity(1), rb);
  CHECK(v.upper == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(testing_states::max_abs(v.primal_witness.matrix() - rb.matrix()) <= 1e-6);
}

TEST_CASE("product state with C = rho_A has value one") {
  const DensityOperator p = testing_states::product_state();
  const CertifiedValue v = min_trace_dominating(p.marginal(Subsystem::A).op(), p);
  CHECK(v.lower <= 1.0 + 1e-9);
  CHECK(v.upper == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("maximally entangled state with C = I/2 has value four") {
  const DensityOperator phi = testing_states::phi2();
  const HermitianOperator c = HermitianOperator::identity(2) * 0.5;
  const CertifiedValue v = min_trace_dominating(c, phi);
  CHECK(v.upper == doctest::Approx(4.0).epsilon(1e-7));
  const oracle::GridResult g = oracle::bloch_grid_min(c.matrix(), phi.matrix());
  CHECK(std::abs(g.value - 4.0) <= 2e-3);
}

TEST_CASE("dual lower bound") {
  const DensityOperator phi = testing_states::phi2();
  const HermitianOperator c = HermitianOperator::identity(2) * 0.5;
  CHECK(dual_lower_bound(c, phi, HermitianOperator::zero(4)) == 0.0);
  // Y = I sits on the boundary: tr_A(Y (C (x) I)) = I_B.
  const HermitianOperator y = HermitianOperator::identity(4) * 1.0;
  const double lb = dual_lower_bound(c, phi, y);
  CHECK(lb <= 4.0);
  CHECK_THROWS_AS(dual_lower_bound(c, phi, HermitianOperator::identity(4) * 3.0), ParameterError);
}

TEST_CASE("infeasible support is detected") {
  const DensityOperator phi = testing_states::phi2();
  CHECK_THROWS_AS(min_trace_dominating(diag({1.0, 0.0}), phi), Infeasible);
}

TEST_CASE("certificates on random instances") {
  Rng rng(79);
  SolverConfig cfg;
  for (int t = 0; t < 100; ++t) {
    const DimPair d{1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3))};
    const DensityOperator rho = random_density(d, rng, t % 4 == 3 ? StateKind::RankK : StateKind::GinibreMixed, 1);
    const HermitianOperator c = t % 2 ? rho.marginal(Subsystem::A).op() : HermitianOperator::identity(d.a);
    const CertifiedValue v = min_trace_dominating(c, rho, cfg);
    check_certificate(c, rho, v, cfg);
  }
}

TEST_CASE("scale covariance") {
  Rng rng(83);
  for (int t = 0; t < 30; ++t) {
    const DensityOperator rho = random_density(DimPair{2, 3}, rng, StateKind::GinibreMixed);
    const HermitianOperator c = HermitianOperator::identity(2);
    const double k = 0.2 + 0.8 * rng.uniform();
    const CertifiedValue a = min_trace_dominating(c, rho);
    const CertifiedValue b = min_trace_dominating(c, rho.scaled(k));
    REQUIRE(std::abs(b.upper - k * a.upper) <= 2e-7 * std::max(1.0, a.upper));
    REQUIRE(std::abs(b.lower - k * a.lower) <= 2e-7 * std::max(1.0, a.upper));
  }
}

TEST_CASE("commuting instances match the diagonal program") {
  Rng rng(89);
  for (int t = 0; t < 100; ++t) {
    const int da = 1 + static_cast<int>(rng.below(3)), db = 1 + static_cast<int>(rng.below(3));
    Eigen::VectorXd p(da * db);
    for (int i = 0; i < p.size(); ++i) p(i) = rng.uniform() < 0.2 ? 0.0 : rng.uniform_open_zero();
    if (p.sum() == 0.0) p(0) = 1.0;
    p /= p.sum();
    Eigen::VectorXd c(da);
    for (int a = 0; a < da; ++a) c(a) = 0.1 + rng.uniform();
    const std::vector<double> pv(p.data(), p.data() + p.size()), cv(c.data(), c.data() + c.size());
    const DensityOperator rho(HermitianOperator::diagonal(pv), DimPair{da, db});
    const CertifiedValue v = min_trace_dominating(HermitianOperator::diagonal(cv), rho);
    const double expected = oracle::diagonal_lp(c, p, da, db);
    REQUIRE(v.lower <= expected + 1e-7 * std::max(1.0, expected));
    REQUIRE(v.upper >= expected - 1e-7 * std::max(1.0, expected));
    REQUIRE(std::abs(v.upper - expected) <= 1e-7 * std::max(1.0, expected));
  }
}

TEST_CASE("Bloch-grid agreement on qubit pairs") {
  Rng rng(97);
  for (int t = 0; t < 10; ++t) {
    const DensityOperator rho = random_density(DimPair{2, 2}, rng, StateKind::GinibreMixed);
    for (const HermitianOperator& c : {HermitianOperator::identity(2), rho.marginal(Subsystem::A).op()}) {
      const CertifiedValue v = min_trace_dominating(c, rho);
      const oracle::GridResult g = oracle::bloch_grid_min(c.matrix(), rho.matrix());
      REQUIRE(std::abs(v.upper - g.value) <= 2e-3 * std::max(1.0, g.value));
      REQUIRE(v.lower <= g.value + 1e-9);
    }
  }
}
