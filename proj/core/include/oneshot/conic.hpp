#pragma once

// The one cone problem everything else reduces to:
//
//   minimize tr X  subject to  C (x) X >= rho,  X >= 0
//
// with dual  maximize tr(Y rho)  subject to  Y >= 0,  tr_A((C (x) I) Y) <= I.
// log2 of the optimum is min over sigma_B of Dmax(rho || C (x) sigma_B) shifted
// by log2 tr X; C = I_A gives -Hmin(A|B), C = rho_A gives the second
// max-information.

#include "oneshot/linop.hpp"
#include "oneshot/quantum.hpp"

namespace oneshot {

struct SolverConfig {
  double tol = 1e-7;
  int max_iters = 400;
  double rank_tol = kDefaultRankTol;
};

struct CertifiedValue {
  double lower = 0.0;
  double upper = 0.0;
  HermitianOperator primal_witness;  // X on B, strictly feasible
  HermitianOperator dual_witness;    // Y on AB, feasible
  int iterations = 0;

  double gap() const { return upper - lower; }
};

// Throws Infeasible when supp(tr_B rho) is not inside supp(C), and
// SolverBudgetExhausted (carrying the best interval) when the gap cannot be
// closed to cfg.tol * max(1, upper).
CertifiedValue min_trace_dominating(const HermitianOperator& c, const DensityOperator& rho,
                                    const SolverConfig& cfg = {});
// C = I_A.
CertifiedValue min_trace_dominating(const DensityOperator& rho, const SolverConfig& cfg = {});

// tr(Y rho) after checking dual feasibility within `slack`; throws
// ParameterError naming the violated constraint.
double dual_lower_bound(const HermitianOperator& c, const DensityOperator& rho, const HermitianOperator& y,
                        double slack = 1e-8);

// lambda_min(C (x) X - rho); >= -slack means X is primal feasible.
double primal_defect(const HermitianOperator& c, const DensityOperator& rho, const HermitianOperator& x);

}  // namespace oneshot
