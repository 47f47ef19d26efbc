#pragma once

// Relative entropies and (smooth) min-/max-entropies, all in bits.

#include <optional>

#include "oneshot/conic.hpp"
#include "oneshot/linop.hpp"
#include "oneshot/quantum.hpp"

namespace oneshot {

// A value in bits with its certified interval. `infinite` marks +infinity
// (for example Dmin between orthogonal states); value/lower/upper are then
// meaningless and callers must branch on the flag.
struct EntropyValue {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool infinite = false;
  std::optional<CertifiedValue> certified;

  static EntropyValue exact(double v) { return {v, v, v, false, std::nullopt}; }
  static EntropyValue plus_infinity() { return {0.0, 0.0, 0.0, true, std::nullopt}; }
};

// log2 || sigma^{-1/2} rho sigma^{-1/2} ||_inf; throws SupportViolation unless
// supp rho is inside supp sigma.
EntropyValue dmax(const HermitianOperator& rho, const HermitianOperator& sigma);
EntropyValue dmax(const DensityOperator& rho, const DensityOperator& sigma);

// -log2 ||sqrt(rho) sqrt(sigma)||_1^2; +infinity when the overlap vanishes.
EntropyValue dmin(const HermitianOperator& rho, const HermitianOperator& sigma);
EntropyValue dmin(const DensityOperator& rho, const DensityOperator& sigma);

// Unconditional entropies of the whole operator.
EntropyValue hmin(const DensityOperator& rho);
EntropyValue hmax(const DensityOperator& rho);

// -log2 min{tr X : I_A (x) X >= rho_AB}. value is the lower end.
EntropyValue hmin_cond(const DensityOperator& rho_ab, const SolverConfig& cfg = {});
// -Hmin(A|C) on a purification rho_ABC. value is the upper end.
EntropyValue hmax_cond(const DensityOperator& rho_ab, const SolverConfig& cfg = {});

// rho_AC of a purification |phi>_{ABC} of rho_AB (C of dimension rank rho_AB).
DensityOperator complementary_state(const DensityOperator& rho_ab);

// Smooth min-entropy of the whole operator over the purified-distance ball.
// The optimum commutes with rho, so the problem reduces to capping the
// spectrum p at a level lambda with water-filling q_i = min(lambda, k p_i):
//   lower = -log2(lambda_feasible)  attained by primal_witness (in the ball),
//   upper = -log2(lambda_infeasible) no state in the ball has a smaller top
//           eigenvalue; dual_witness = lambda_infeasible * I.
CertifiedValue smooth_hmin(const DensityOperator& rho, double eps);

struct CapResult {
  HermitianOperator pi;   // 0 <= Pi <= I, diagonal in the eigenbasis of rho
  DensityOperator state;  // Pi rho Pi
  double level = 0.0;     // eigenvalue cap
};

// Pi = sum_i sqrt(min(1, lambda / p_i)) |i><i| with lambda the feasible cap
// level of smooth_hmin at radius eps^2 / 16.
CapResult cap_operator(const DensityOperator& rho, double eps);

}  // namespace oneshot
