#include "oneshot/maxinfo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "oneshot/distance.hpp"
#include "oneshot/error.hpp"

namespace oneshot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVerdictSlack = 1e-7;

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ComplexMatrix as_matrix(const ComplexVector& v, int rows, int cols) {
  return Eigen::Map<const RowMajor>(v.data(), rows, cols);
}

ComplexVector as_vector(const ComplexMatrix& m) {
  const RowMajor r = m;
  return Eigen::Map<const ComplexVector>(r.data(), r.size());
}

double safe_log2(double x) { return x > 0.0 ? std::log2(x) : -kInf; }

double cut_budget(double eps) { return 1.0 - std::sqrt(std::max(0.0, 1.0 - eps * eps)); }

double idempotency_defect(const HermitianOperator& p) {
  return operator_norm(ComplexMatrix(p.matrix() * p.matrix() - p.matrix()));
}

EntropyValue bits_of(CertifiedValue cv) {
  EntropyValue e;
  e.upper = std::log2(cv.upper);
  e.lower = std::min(e.upper, safe_log2(cv.lower));
  e.value = e.upper;
  e.certified = std::move(cv);
  return e;
}

// Solves and, when the iteration budget runs out, keeps the interval carried by
// the exception.
struct Solve {
  double lower = 0.0;
  double upper = kInf;
  HermitianOperator x;
  bool feasible = true;
};

Solve solve_loose(const HermitianOperator& c, const DensityOperator& rho, const SolverConfig& cfg) {
  Solve s;
  try {
    CertifiedValue cv = min_trace_dominating(c, rho, cfg);
    s.lower = cv.lower;
    s.upper = cv.upper;
    s.x = std::move(cv.primal_witness);
  } catch (const SolverBudgetExhausted& e) {
    s.lower = e.lower();
    s.upper = e.upper();
  } catch (const Infeasible&) {
    s.feasible = false;
    s.lower = kInf;
  }
  return s;
}

DensityOperator normalized_single(const HermitianOperator& x) {
  const double t = x.trace();
  if (!(t > 0.0)) throw InternalError("optimizer candidate has non-positive trace");
  return DensityOperator(x * (1.0 / t));
}

// Cut of the smallest eigenvalues of Gamma = rho^{-1/2} sigma rho^{-1/2} on
// supp rho: the eigenvectors with the largest eigenvalues are dropped while
// their total weight under rho stays within the budget.
struct CutChoice {
  HermitianOperator gamma;
  HermitianOperator projector;
  double weight = 0.0;
  double gamma_norm = 0.0;
};

CutChoice choose_cut(const HermitianOperator& rho, const HermitianOperator& sigma, double eps) {
  CutChoice out;
  const HermitianOperator w = inv_sqrt(rho);
  out.gamma = conjugate(w.matrix(), sigma);
  const ComplexMatrix q = support_basis(rho);
  const HermitianOperator g_small(ComplexMatrix(q.adjoint() * out.gamma.matrix() * q));
  const EigenDecomposition e = eig_hermitian(g_small);
  const ComplexMatrix v = q * e.vectors;
  const int r = static_cast<int>(v.cols());
  const double budget = cut_budget(eps);
  int kept = r;
  double weight = 0.0;
  while (kept > 0) {
    const ComplexVector col = v.col(kept - 1);
    const double wk = std::max(0.0, (col.adjoint() * rho.matrix() * col)(0, 0).real());
    if (weight + wk > budget) break;
    weight += wk;
    --kept;
  }
  const ComplexMatrix keep = v.leftCols(kept);
  out.projector = HermitianOperator(ComplexMatrix(keep * keep.adjoint()));
  out.weight = weight;
  out.gamma_norm = kept > 0 ? std::max(0.0, e.values(kept - 1)) : 0.0;
  return out;
}

HermitianOperator pauli_combination(double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m << Complex(1.0 + z, 0.0), Complex(x, -y), Complex(x, y), Complex(1.0 - z, 0.0);
  return HermitianOperator(ComplexMatrix(0.5 * m));
}

struct Cell {
  std::array<double, 3> c{};
  double w = 0.0;
  double lower = 0.0;
  bool operator>(const Cell& o) const { return lower > o.lower; }
};

// Branch and bound over the Bloch ball of a qubit A. On a cube of half-width w
// around c every sigma_A obeys sigma_A <= g_c + eta I with eta = w sqrt(3) / 2,
// so the conic lower bound with that C bounds the whole cell.
double bloch_lower(const DensityOperator& rho, double upper_hint, double floor, const Imax3Config& cfg) {
  SolverConfig scfg = cfg.solver;
  scfg.tol = std::max(scfg.tol, 1e-5);
  double best_upper = upper_hint;
  int budget = cfg.bnb_budget;

  const auto evaluate = [&](Cell& cell) {
    const double eta = cell.w * std::sqrt(3.0) / 2.0;
    const HermitianOperator g = pauli_combination(cell.c[0], cell.c[1], cell.c[2]);
    HermitianOperator c = g + HermitianOperator::identity(2) * eta;
    // Cells that touch the ball have C >= 0 up to rounding.
    c = spectral_map(c, [](double v) { return std::max(0.0, v); });
    --budget;
    const Solve s = solve_loose(c, rho, scfg);
    cell.lower = std::max(floor, safe_log2(s.lower));
    if (s.feasible && std::isfinite(s.upper)) {
      best_upper = std::min(best_upper, std::log2(s.upper * (1.0 + 2.0 * eta)));
    }
  };
  const auto touches_ball = [](const Cell& cell) {
    double d2 = 0.0;
    for (double x : cell.c) {
      const double gap = std::max(0.0, std::abs(x) - cell.w);
      d2 += gap * gap;
    }
    return d2 <= 1.0;
  };

  std::priority_queue<Cell, std::vector<Cell>, std::greater<>> frontier;
  Cell root;
  root.w = 1.0;
  evaluate(root);
  frontier.push(root);
  while (!frontier.empty() && budget > 0) {
    const Cell top = frontier.top();
    if (top.lower >= best_upper - cfg.bnb_target) break;
    frontier.pop();
    const double hw = top.w / 2.0;
    for (int k = 0; k < 8; ++k) {
      Cell child;
      child.w = hw;
      for (int i = 0; i < 3; ++i) child.c[i] = top.c[i] + (((k >> i) & 1) ? hw : -hw);
      if (!touches_ball(child)) continue;
      evaluate(child);
      if (child.lower < best_upper) frontier.push(child);
    }
  }
  const double frontier_min = frontier.empty() ? kInf : frontier.top().lower;
  return std::min(frontier_min, best_upper);
}

double mutual_information(const DensityOperator& rho) {
  return von_neumann(rho.marginal(Subsystem::A).op()) + von_neumann(rho.marginal(Subsystem::B).op()) -
         von_neumann(rho.op());
}

// Bounds that need no search: the trace, the mutual information (Dmax >= D and
// D(rho || s_A (x) s_B) >= I(A:B) for normalized rho), -Hmin in both
// directions and the second variant corrected by the smallest marginal
// eigenvalue.
double marginal_lower(const DensityOperator& rho, const SolverConfig& cfg) {
  double best = safe_log2(rho.trace());
  if (rho.trace_class() == TraceClass::Normalized) best = std::max(best, mutual_information(rho) - 1e-9);
  for (const DensityOperator& r : {rho, rho.swapped()}) {
    const Solve hm = solve_loose(HermitianOperator::identity(r.dims().a), r, cfg);
    best = std::max(best, safe_log2(hm.lower));
    const HermitianOperator ra = r.marginal(Subsystem::A).op();
    const double lmin = lambda_min(ra);
    if (lmin > 0.0) {
      const Solve i2 = solve_loose(ra, r, cfg);
      best = std::max(best, safe_log2(i2.lower) + std::log2(lmin));
    }
  }
  return best;
}

struct Alternation {
  double upper = kInf;
  double dual_lower = -kInf;
  HermitianOperator sigma_a;
  HermitianOperator sigma_b;
  int rounds = 0;
  std::optional<CertifiedValue> last;
};

Alternation alternate(const DensityOperator& rho, HermitianOperator start, bool start_on_b, const Imax3Config& cfg) {
  const DensityOperator swapped = rho.swapped();
  Alternation out;
  HermitianOperator sa = start_on_b ? HermitianOperator() : start;
  HermitianOperator sb = start_on_b ? start : HermitianOperator();
  double previous = kInf;
  // Returns false when the subproblem cannot be solved even at a loose
  // tolerance; the alternation then keeps its last pair.
  const auto step = [&](bool fix_a) {
    SolverConfig sc = cfg.solver;
    std::optional<CertifiedValue> cv;
    for (int attempt = 0; attempt < 2 && !cv; ++attempt) {
      try {
        cv = fix_a ? min_trace_dominating(sa, rho, sc) : min_trace_dominating(sb, swapped, sc);
      } catch (const SolverBudgetExhausted&) {
        sc.tol = std::max(sc.tol * 100.0, 1e-6);
      }
    }
    if (!cv) return false;
    const double v = std::log2(cv->upper);
    const double allowance = 1e-6 + 4.0 * sc.tol;
    if (std::isfinite(previous) && v > previous + allowance) {
      std::ostringstream os;
      os << "alternating step increased the objective from " << previous << " to " << v;
      throw InternalError(os.str());
    }
    const HermitianOperator x = cv->primal_witness * (1.0 / cv->primal_witness.trace());
    if (fix_a) {
      sb = x;
      out.dual_lower = safe_log2(cv->lower);
      out.last = std::move(cv);
    } else {
      sa = x;
    }
    previous = std::min(previous, v);
    return true;
  };
  bool ok = !start_on_b || step(false);
  double before = kInf;
  for (int round = 0; ok && round < cfg.max_rounds; ++round) {
    ok = step(true) && step(false);
    out.rounds = round + 1;
    if (ok && std::abs(before - previous) < cfg.tol) break;
    before = previous;
  }
  if (ok) step(true);
  if (sa.dim() == 0 || sb.dim() == 0) return out;
  out.sigma_a = sa;
  out.sigma_b = sb;
  out.upper = dmax(rho.op(), tensor(sa, sb)).value;
  return out;
}

}  // namespace

namespace bounds {

double f(double eps, double eps_prime) {
  return std::log2(1.0 / cut_budget(eps) + 1.0 / (1.0 - eps_prime));
}

double g(double eps) {
  const double a = 1.0 - eps;
  return std::log2((2.0 * a + 3.0) / (a * cut_budget(eps)));
}

double c(double eps, double trace) { return std::log2(1.0 / cut_budget(eps) + 1.0 / trace); }

double l(double eps) { return 2.0 * std::log2(eps * eps / 24.0); }

}  // namespace bounds

EntropyValue imax1(const DensityOperator& rho) {
  const HermitianOperator prod = tensor(rho.marginal(Subsystem::A).op(), rho.marginal(Subsystem::B).op());
  return dmax(rho.op(), prod);
}

EntropyValue imax2(const DensityOperator& rho, const SolverConfig& cfg) {
  return bits_of(min_trace_dominating(rho.marginal(Subsystem::A).op(), rho, cfg));
}

DensityOperator imax2_optimizer(const EntropyValue& v) {
  if (!v.certified) throw ParameterError("value carries no primal witness");
  return normalized_single(v.certified->primal_witness);
}

double imax3_certified_lower(const DensityOperator& rho, double upper_hint, const Imax3Config& cfg,
                             std::string* method) {
  const DimPair d = rho.dims();
  const auto set = [&](const char* m) {
    if (method) *method = m;
  };
  if (d.a == 1 || d.b == 1) {
    const DensityOperator r = d.a == 1 ? rho : rho.swapped();
    set("exact");
    return safe_log2(solve_loose(HermitianOperator::identity(1), r, cfg.solver).lower);
  }
  const double crude = marginal_lower(rho, cfg.solver);
  if (d.a == 2 || d.b == 2) {
    set("bloch-branch-and-bound");
    const DensityOperator r = d.a == 2 ? rho : rho.swapped();
    if (crude >= upper_hint - cfg.bnb_target) return crude;
    return std::max(crude, bloch_lower(r, upper_hint, crude, cfg));
  }
  set("marginal-bound");
  return crude;
}

Imax3Result imax3_detailed(const DensityOperator& rho, const Imax3Config& cfg) {
  const DimPair d = rho.dims();
  const Rng base(cfg.seed);
  std::optional<Alternation> best;
  double worst = -kInf;
  double heuristic = -kInf;
  int rounds = 0;
  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    const bool on_b = (r % 2) == 1;
    HermitianOperator start;
    if (r == 0) {
      start = rho.marginal(Subsystem::A).normalize().op();
    } else if (r == 1) {
      start = rho.marginal(Subsystem::B).normalize().op();
    } else {
      Rng rng = base.derive(static_cast<std::uint64_t>(r));
      start = random_density(DimPair{on_b ? d.b : d.a, 1}, rng, StateKind::GinibreMixed).op();
    }
    Alternation a = alternate(rho, start, on_b, cfg);
    rounds += a.rounds;
    worst = std::max(worst, a.upper);
    heuristic = std::max(heuristic, a.dual_lower);
    if (!best || a.upper < best->upper) best = std::move(a);
  }
  if (!best || !std::isfinite(best->upper)) throw InternalError("every alternating restart failed");
  std::string method;
  const double lower = std::min(best->upper, imax3_certified_lower(rho, best->upper, cfg, &method));

  EntropyValue v;
  v.value = v.upper = best->upper;
  v.lower = lower;
  v.certified = best->last;
  Imax3Result out{v, DensityOperator(best->sigma_a), DensityOperator(best->sigma_b)};
  out.heuristic_lower = std::min(heuristic, best->upper);
  out.restart_spread = worst - best->upper;
  out.rounds = rounds;
  out.lower_method = method;
  return out;
}

EntropyValue imax3(const DensityOperator& rho, const Imax3Config& cfg) { return imax3_detailed(rho, cfg).value; }

HermitianOperator dual_projector(const Purification& phi, const HermitianOperator& pi_a) {
  if (pi_a.dim() != phi.system_dim) {
    throw DimensionMismatch("projector dimension " + std::to_string(pi_a.dim()) + " does not match system dimension " +
                            std::to_string(phi.system_dim));
  }
  if (idempotency_defect(pi_a) > 1e-9) throw ParameterError("Pi_A is not a projector");
  const ComplexMatrix& l = phi.schmidt.left;
  const ComplexMatrix& r = phi.schmidt.right;
  const ComplexMatrix support = l * l.adjoint();
  const double leak = operator_norm(ComplexMatrix(pi_a.matrix() - support * pi_a.matrix() * support));
  if (leak > 1e-9) throw SupportViolation("Pi_A reaches outside the support of rho_A");
  const ComplexMatrix t = (l.adjoint() * pi_a.matrix() * l).transpose();
  HermitianOperator pi_b(ComplexMatrix(r * t * r.adjoint()));

  // (Pi_A (x) rho_B^{-1/2}) phi against (rho_A^{-1/2} (x) Pi_B) phi.
  const ComplexMatrix m = as_matrix(phi.vector, phi.system_dim, phi.ancilla_dim);
  const HermitianOperator wa = inv_sqrt(phi.reduced_system());
  const HermitianOperator wb = inv_sqrt(phi.reduced_ancilla());
  const ComplexMatrix lhs = pi_a.matrix() * m * wb.matrix().transpose();
  const ComplexMatrix rhs = wa.matrix() * m * pi_b.matrix().transpose();
  const double residual = (lhs - rhs).norm();
  if (residual > 1e-7 * std::max(1.0, lhs.norm())) {
    std::ostringstream os;
    os << "dual projector identity residual " << residual;
    throw InternalError(os.str());
  }
  return pi_b;
}

const char* to_string(ConstructionVariant v) {
  switch (v) {
    case ConstructionVariant::ClaimBcCut: return "claim_BC_cut";
    case ConstructionVariant::ClaimBarDelta: return "claim_barDelta";
    case ConstructionVariant::ClaimAcCut: return "claim_AC_cut";
    case ConstructionVariant::ClaimHat: return "claim_hat";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

void require_theorem_input(const DensityOperator& rho, double eps) {
  if (rho.trace_class() != TraceClass::Normalized) throw ParameterError("the smoothing construction needs a normalized state");
  if (!(eps >= 0.0 && eps < 1.0)) throw SmoothingParameterError("eps must lie in [0, 1)");
}

// Cuts the purification of rho on the cut|rest split, with the cut system moved
// to the front by `perm`; returns the cut vector in A, B, C order.
struct CutResult {
  CutChoice choice;
  HermitianOperator dual;
  ComplexVector kept;  // (I (x) Pi_rest) phi in A, B, C order
  double overlap = 0.0;
};

CutResult cut_purification(const DensityOperator& rho, const HermitianOperator& sigma_cut, double eps, bool cut_a) {
  const DimPair d = rho.dims();
  const Purification phi = purify(rho);
  const int dc = phi.ancilla_dim;
  const std::vector<int> dims{d.a, d.b, dc};
  const std::vector<int> swap_ab{1, 0, 2};
  const ComplexVector ordered = cut_a ? phi.vector : permute_subsystems(phi.vector, dims, swap_ab);
  const int dcut = cut_a ? d.a : d.b;
  const int drest = cut_a ? d.b * dc : d.a * dc;
  const Purification split = schmidt_decompose(ordered, dcut, drest);

  CutResult out;
  const HermitianOperator rho_cut = split.reduced_system();
  out.choice = choose_cut(rho_cut, sigma_cut, eps);
  out.dual = dual_projector(split, out.choice.projector);
  const ComplexMatrix m = as_matrix(ordered, dcut, drest) * out.dual.matrix().transpose();
  ComplexVector v = as_vector(m);
  out.overlap = v.squaredNorm();
  if (!cut_a) {
    const std::vector<int> back_dims{d.b, d.a, dc};
    v = permute_subsystems(v, back_dims, swap_ab);
  }
  out.kept = std::move(v);
  return out;
}

HermitianOperator trace_out_ancilla(const ComplexVector& v, int system_dim) {
  const int anc = static_cast<int>(v.size()) / system_dim;
  const ComplexMatrix m = as_matrix(v, system_dim, anc);
  return HermitianOperator(ComplexMatrix(m * m.adjoint()));
}

}  // namespace

SmoothingConstruction smooth_state_thm1(const DensityOperator& rho, double eps, const DensityOperator& sigma_a,
                                        const DensityOperator& sigma_b) {
  require_theorem_input(rho, eps);
  const DimPair d = rho.dims();
  if (sigma_a.dim() != d.a || sigma_b.dim() != d.b) throw DimensionMismatch("optimizer dimensions do not match rho");
  const CutResult cut = cut_purification(rho, sigma_a.op(), eps, true);

  SmoothingConstruction s;
  s.variant = ConstructionVariant::ClaimBarDelta;
  s.eps = eps;
  s.dims = d;
  s.gamma = cut.choice.gamma;
  s.cut = cut.choice.projector;
  s.dual_cut = cut.dual;
  s.cut_weight = cut.choice.weight;
  s.cut_gamma_norm = cut.choice.gamma_norm;
  s.purified_cut_distance = std::sqrt(std::max(0.0, 1.0 - cut.overlap * cut.overlap));
  s.tilde = trace_out_ancilla(cut.kept, d.total());
  const HermitianOperator rho_a = rho.marginal(Subsystem::A).op();
  s.delta_a = rho_a - partial_trace(s.tilde, d, Subsystem::B);
  const JordanParts j = jordan_decomposition(s.delta_a);
  s.delta_plus = j.plus;
  s.delta_minus = j.minus;
  s.delta_b = HermitianOperator::zero(d.b);
  // Delta_A is PSD here; clip rounding noise before tensoring.
  s.output = s.tilde + tensor(j.plus, sigma_b.op());
  return s;
}

SmoothingConstruction smooth_state_thm2(const DensityOperator& rho, double eps, const DensityOperator& sigma_b) {
  require_theorem_input(rho, eps);
  const DimPair d = rho.dims();
  if (sigma_b.dim() != d.b) throw DimensionMismatch("optimizer dimension does not match rho_B");
  const CutResult cut = cut_purification(rho, sigma_b.op(), eps, false);

  SmoothingConstruction s;
  s.variant = ConstructionVariant::ClaimHat;
  s.eps = eps;
  s.dims = d;
  s.gamma = cut.choice.gamma;
  s.cut = cut.choice.projector;
  s.dual_cut = cut.dual;
  s.cut_weight = cut.choice.weight;
  s.cut_gamma_norm = cut.choice.gamma_norm;
  s.purified_cut_distance = std::sqrt(std::max(0.0, 1.0 - cut.overlap * cut.overlap));
  s.tilde = trace_out_ancilla(cut.kept, d.total());
  const HermitianOperator rho_a = rho.marginal(Subsystem::A).op();
  const HermitianOperator rho_b = rho.marginal(Subsystem::B).op();
  s.delta_a = rho_a - partial_trace(s.tilde, d, Subsystem::B);
  s.delta_b = rho_b - partial_trace(s.tilde, d, Subsystem::A);
  const JordanParts j = jordan_decomposition(s.delta_a);
  s.delta_plus = j.plus;
  s.delta_minus = j.minus;
  const double trace_delta = std::max(0.0, 1.0 - cut.overlap);
  s.k = 1.0 / (1.0 + trace_delta);
  s.n = 1.0 / (1.0 + s.k * j.minus.trace());
  const HermitianOperator db = spectral_map(s.delta_b, [](double v) { return std::max(0.0, v); });
  s.output = (s.tilde + tensor(rho_a, db) + tensor(j.plus, rho_b)) * (s.n * s.k);
  return s;
}

Verdict classify(const Interval& left, const Interval& right, const std::vector<Postcondition>& post) {
  for (const Postcondition& p : post) {
    if (!p.ok) return Verdict::Violated;
  }
  const double slack = right.lower - left.upper;
  if (slack >= -kVerdictSlack) return Verdict::Holds;
  if (left.lower - right.upper > kVerdictSlack) return Verdict::Violated;
  return Verdict::Inconclusive;
}

StateAnalysis::StateAnalysis(DensityOperator rho, Imax3Config cfg) : rho_(std::move(rho)), cfg_(cfg) {}

const EntropyValue& StateAnalysis::i1() {
  if (!i1_) i1_ = imax1(rho_);
  return *i1_;
}

const EntropyValue& StateAnalysis::i2() {
  if (!i2_) i2_ = imax2(rho_, cfg_.solver);
  return *i2_;
}

const EntropyValue& StateAnalysis::i2_swapped() {
  if (!i2s_) i2s_ = imax2(rho_.swapped(), cfg_.solver);
  return *i2s_;
}

const Imax3Result& StateAnalysis::i3() {
  if (!i3_) i3_ = imax3_detailed(rho_, cfg_);
  return *i3_;
}

const EntropyValue& StateAnalysis::hmin_a_given_b() {
  if (!hcond_) hcond_ = hmin_cond(rho_, cfg_.solver);
  return *hcond_;
}

namespace {

Postcondition post_le(const std::string& name, double value, double bound) {
  return {name, value, bound, value <= bound};
}

void finish(InequalityReport& r) {
  r.slack = r.right.lower - r.left.upper;
  r.verdict = classify(r.left, r.right, r.postconditions);
}

Interval interval_of(const EntropyValue& v) { return {v.lower, v.upper}; }

Interval shifted(Interval i, double s) { return {i.lower + s, i.upper + s}; }

// Smooth Hmin(A|B) is at most -log2(tr(Z rho) - 2 delta ||Z||) for any dual
// witness Z of the unsmoothed problem: every state in the ball is within trace
// distance delta of rho.
double smooth_hmin_cond_upper(const EntropyValue& hcond, const DensityOperator& rho, double delta) {
  if (!hcond.certified) return kInf;
  const HermitianOperator& z = hcond.certified->dual_witness;
  const double value = (z.matrix() * rho.matrix()).trace().real() - 2.0 * delta * operator_norm(z);
  return value > 0.0 ? -std::log2(value) : kInf;
}

void add_thm1_posts(InequalityReport& r, const SmoothingConstruction& s, const DensityOperator& rho, double eps,
                    const std::string& prefix) {
  const DensityOperator bar = s.output_state();
  r.postconditions.push_back(post_le(prefix + "projector_idempotent", idempotency_defect(s.cut), 1e-9));
  r.postconditions.push_back(post_le(prefix + "dual_idempotent", idempotency_defect(s.dual_cut), 1e-9));
  r.postconditions.push_back(post_le(prefix + "cut_weight", s.cut_weight, cut_budget(eps) + 1e-12));
  r.postconditions.push_back(post_le(prefix + "delta_a_negative_part", s.delta_minus.trace(), 1e-9));
  const double marg =
      operator_norm(ComplexMatrix(bar.marginal(Subsystem::A).matrix() - rho.marginal(Subsystem::A).matrix()));
  r.postconditions.push_back(post_le(prefix + "marginal_a_preserved", marg, 1e-8));
  r.postconditions.push_back(post_le(prefix + "membership", purified_distance(bar, rho), eps + 1e-7));
  if (eps > 0.0) {
    r.postconditions.push_back(post_le(prefix + "gamma_cut_norm", s.cut_gamma_norm, 1.0 / cut_budget(eps) + 1e-7));
  }
}

void add_thm2_posts(InequalityReport& r, const SmoothingConstruction& s, const DensityOperator& rho, double eps,
                    const std::string& prefix) {
  const DensityOperator hat = s.output_state();
  r.postconditions.push_back(post_le(prefix + "projector_idempotent", idempotency_defect(s.cut), 1e-9));
  r.postconditions.push_back(post_le(prefix + "dual_idempotent", idempotency_defect(s.dual_cut), 1e-9));
  r.postconditions.push_back(post_le(prefix + "cut_weight", s.cut_weight, cut_budget(eps) + 1e-12));
  r.postconditions.push_back(post_le(prefix + "delta_minus_trace", s.delta_minus.trace(), 2.0 * eps + 1e-7));
  const double jordan = operator_norm(ComplexMatrix(s.delta_a.matrix() - s.delta_plus.matrix() + s.delta_minus.matrix()));
  r.postconditions.push_back(post_le(prefix + "jordan_residual", jordan, 1e-9));
  r.postconditions.push_back(post_le(prefix + "k_at_most_one", s.k, 1.0 + 1e-12));
  r.postconditions.push_back(post_le(prefix + "n_at_most_one", s.n, 1.0 + 1e-12));
  const double marg =
      operator_norm(ComplexMatrix(hat.marginal(Subsystem::B).matrix() - rho.marginal(Subsystem::B).matrix()));
  r.postconditions.push_back(post_le(prefix + "marginal_b_preserved", marg, 1e-8));
  r.postconditions.push_back(post_le(prefix + "trace", std::abs(hat.trace() - 1.0), 1e-9));
  r.postconditions.push_back(
      post_le(prefix + "membership", purified_distance(hat, rho), eps + 2.0 * std::sqrt(eps) + 1e-7));
}

// Constructed states can be badly conditioned; a looser gap still gives a
// certified interval and a usable optimizer.
EntropyValue imax2_tolerant(const DensityOperator& state, const SolverConfig& cfg) {
  try {
    return imax2(state, cfg);
  } catch (const SolverBudgetExhausted&) {
    SolverConfig loose = cfg;
    loose.tol = std::max(cfg.tol * 100.0, 1e-6);
    loose.max_iters = cfg.max_iters * 2;
    return imax2(state, loose);
  }
}

// Second variant of an arbitrary state as an upper bound: the conic value and,
// when supports allow, Dmax against the given sigma_B.
double imax2_upper_with(const DensityOperator& state, const DensityOperator& sigma_b, const SolverConfig& cfg,
                        EntropyValue* full) {
  EntropyValue v = imax2_tolerant(state, cfg);
  double up = v.upper;
  try {
    up = std::min(up, dmax(state.op(), tensor(state.marginal(Subsystem::A).op(), sigma_b.op())).value);
  } catch (const SupportViolation&) {
  }
  if (full) *full = v;
  return up;
}

void check_thm1(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps, ep = r.eps_prime;
  const Imax3Result& i3 = st.i3();
  const SmoothingConstruction s = smooth_state_thm1(rho, eps, i3.sigma_a, i3.sigma_b);
  const DensityOperator bar = s.output_state();
  EntropyValue i2bar;
  const double lhs_up = imax2_upper_with(bar, i3.sigma_b, st.config().solver, &i2bar);
  add_thm1_posts(r, s, rho, eps, "");
  r.postconditions.push_back(post_le("claim_bound", i2bar.lower, i3.value.upper + bounds::c(eps, rho.trace()) + 1e-7));
  r.left = {0.0, lhs_up};
  if (ep == 0.0) {
    r.right = shifted(interval_of(i3.value), bounds::f(eps, 0.0));
  } else {
    r.right = {safe_log2(1.0 - ep * ep) + bounds::f(eps, ep), i3.value.upper + bounds::f(eps, ep)};
    r.note = "one-sided: the smoothed right side is bounded below by log2(1 - eps'^2)";
  }
  if (eps + ep >= 1.0) r.note += (r.note.empty() ? "" : "; ") + std::string("smoothing radius eps + eps' >= 1");
  r.quantities["imax3_lower"] = i3.value.lower;
  r.quantities["imax3_upper"] = i3.value.upper;
  r.quantities["imax2_bar_upper"] = lhs_up;
  r.quantities["purified_distance"] = purified_distance(bar, rho);
  r.quantities["f"] = bounds::f(eps, ep);
  r.quantities["cut_rank"] = rank(s.cut, 1e-6);
}

void check_thm2(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps, ep = r.eps_prime;
  const EntropyValue& i2 = st.i2();
  const SmoothingConstruction s = smooth_state_thm2(rho, eps, imax2_optimizer(i2));
  const DensityOperator hat = s.output_state();
  const double lhs = imax1(hat).value;
  add_thm2_posts(r, s, rho, eps, "");
  r.postconditions.push_back(post_le("claim_bound", lhs, i2.upper + bounds::g(eps) + 1e-7));
  r.left = {0.0, lhs};
  if (ep == 0.0) {
    r.right = shifted(interval_of(i2), bounds::g(eps));
  } else {
    r.right = {bounds::g(eps), i2.upper + bounds::g(eps)};
    r.note = "one-sided: the smoothed right side is bounded below by 0";
  }
  if (eps + 2.0 * std::sqrt(eps) + ep >= 1.0) {
    r.note += (r.note.empty() ? "" : "; ") + std::string("smoothing radius eps + 2 sqrt(eps) + eps' >= 1; only the constructive bound is meaningful");
  }
  r.quantities["imax1_hat"] = lhs;
  r.quantities["imax2_lower"] = i2.lower;
  r.quantities["imax2_upper"] = i2.upper;
  r.quantities["delta_minus_trace"] = s.delta_minus.trace();
  r.quantities["purified_distance"] = purified_distance(hat, rho);
  r.quantities["k"] = s.k;
  r.quantities["n"] = s.n;
  r.quantities["g"] = bounds::g(eps);
}

void check_cor3(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps;
  // The first theorem runs at radius eps' (eps when none is given) and the
  // second at eps on its output; eps'' = 0.
  const double e1 = r.eps_prime > 0.0 ? r.eps_prime : eps;
  const Imax3Result& i3 = st.i3();
  const SmoothingConstruction s1 = smooth_state_thm1(rho, e1, i3.sigma_a, i3.sigma_b);
  const DensityOperator bar = s1.output_state();
  const EntropyValue i2bar = imax2_tolerant(bar, st.config().solver);
  const SmoothingConstruction s2 = smooth_state_thm2(bar, eps, imax2_optimizer(i2bar));
  const DensityOperator hat = s2.output_state();
  const double lhs = imax1(hat).value;
  add_thm1_posts(r, s1, rho, e1, "thm1.");
  add_thm2_posts(r, s2, bar, eps, "thm2.");
  const double radius = eps + 2.0 * std::sqrt(eps) + e1;
  r.postconditions.push_back(post_le("membership", purified_distance(hat, rho), radius + 1e-7));
  r.left = {0.0, lhs};
  r.right = shifted(interval_of(i3.value), bounds::f(e1, 0.0) + bounds::g(eps));
  if (radius >= 1.0) r.note = "smoothing radius >= 1; only the constructive bound is meaningful";
  r.quantities["imax1_hat"] = lhs;
  r.quantities["imax2_bar_upper"] = i2bar.upper;
  r.quantities["imax3_lower"] = i3.value.lower;
  r.quantities["imax3_upper"] = i3.value.upper;
  r.quantities["eps_thm1"] = e1;
}

void check_cor4(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps, ep = r.eps_prime;
  const Imax3Result& i3 = st.i3();
  const SmoothingConstruction s = smooth_state_thm1(rho, eps, i3.sigma_a, i3.sigma_b);
  const DensityOperator bar = s.output_state();
  const double lhs_up = imax2_upper_with(bar, i3.sigma_b, st.config().solver, nullptr);
  add_thm1_posts(r, s, rho, eps, "");
  const double shift = bounds::f(eps, eps + ep) + bounds::f(eps, ep);
  const EntropyValue& i2s = st.i2_swapped();
  r.left = {0.0, lhs_up};
  if (ep == 0.0) {
    r.right = shifted(interval_of(i2s), shift);
  } else {
    r.right = {shift, i2s.upper + shift};
    r.note = "one-sided: the smoothed right side is bounded below by 0";
  }
  r.quantities["imax2_ba_lower"] = i2s.lower;
  r.quantities["imax2_ba_upper"] = i2s.upper;
  r.quantities["imax2_bar_upper"] = lhs_up;
}

void check_chain_upper(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps;
  if (!(eps > 0.0 && eps < 1.0)) throw SmoothingParameterError("chain_upper needs eps in (0, 1)");
  const double delta = eps * eps / 48.0;
  const DensityOperator rho_a = rho.marginal(Subsystem::A);
  const int da = rho_a.dim();
  const double q = delta + purified_distance(rho_a.normalize(), maximally_mixed(da));
  const double hmax_lower = q < 1.0 ? std::log2(da) + std::log2(1.0 - q * q) : -kInf;
  const EntropyValue& hc = st.hmin_a_given_b();
  const double hcond_upper = smooth_hmin_cond_upper(hc, rho, delta);
  const double l = bounds::l(eps);
  r.left = {0.0, st.i2().upper};
  r.right = {hmax_lower - hcond_upper - l, hmax(rho_a).value - hc.lower - l};
  r.note = "one-sided";
  r.quantities["hmax_smooth_lower"] = hmax_lower;
  r.quantities["hmin_cond_smooth_upper"] = hcond_upper;
  r.quantities["l"] = l;
}

void check_chain_lower(InequalityReport& r, StateAnalysis& st) {
  const DensityOperator& rho = st.rho();
  const double eps = r.eps;
  const EntropyValue& hc = st.hmin_a_given_b();
  const EntropyValue& i2 = st.i2();
  const DensityOperator rho_a = rho.marginal(Subsystem::A);
  if (eps == 0.0) {
    const double ha = hmin(rho_a).value;
    r.left = {ha - hc.upper, ha - hc.lower};
    r.right = interval_of(i2);
    return;
  }
  const CertifiedValue sa = smooth_hmin(rho_a, eps);
  const double delta = 4.0 * std::sqrt(2.0 * eps);
  double cond_lower = -kInf;
  double cond_upper = kInf;
  if (delta < 1.0) {
    cond_lower = hc.lower - std::log2(1.0 - delta * delta);
    cond_upper = smooth_hmin_cond_upper(hc, rho, delta);
    r.note = "one-sided";
  } else {
    r.note = "one-sided; conditional smoothing radius 4 sqrt(2 eps) >= 1 leaves that term unbounded";
  }
  r.left = {sa.lower - cond_upper, sa.upper - cond_lower};
  r.right = {0.0, i2.upper};
  r.quantities["smooth_hmin_a_lower"] = sa.lower;
  r.quantities["smooth_hmin_a_upper"] = sa.upper;
  r.quantities["delta"] = delta;
}

void check_lemma_b13(InequalityReport& r, StateAnalysis& st) {
  const double ha = hmin(st.rho().marginal(Subsystem::A)).value;
  const EntropyValue& i2 = st.i2();
  r.left = {ha - i2.upper, ha - i2.lower};
  r.right = interval_of(st.hmin_a_given_b());
  r.quantities["hmin_a"] = ha;
}

void check_dataproc(InequalityReport& r, StateAnalysis& st, std::uint64_t seed) {
  const DensityOperator& rho = st.rho();
  const DimPair d = rho.dims();
  Rng rng(seed);
  const KrausChannel ea = KrausChannel::random_cptp(d.a, d.a, 2, rng);
  const KrausChannel eb = KrausChannel::random_cptp(d.b, d.b, 2, rng);
  const DensityOperator out(apply_channel(product_channel(ea, eb), rho.op()), d);
  StateAnalysis processed(out, st.config());

  const Interval l1{processed.i1().value, processed.i1().value};
  const Interval r1{st.i1().value, st.i1().value};
  const Interval l3 = interval_of(processed.i3().value);
  const Interval r3 = interval_of(st.i3().value);
  r.left = interval_of(processed.i2());
  r.right = interval_of(st.i2());
  const Verdict v1 = classify(l1, r1, {});
  const Verdict v3 = classify(l3, r3, {});
  r.quantities["imax1_slack"] = r1.lower - l1.upper;
  r.quantities["imax3_slack"] = r3.lower - l3.upper;
  r.quantities["imax1_verdict"] = static_cast<double>(v1);
  r.quantities["imax3_verdict"] = static_cast<double>(v3);
  finish(r);
  const auto worse = [](Verdict a, Verdict b) {
    if (a == Verdict::Violated || b == Verdict::Violated) return Verdict::Violated;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Holds;
  };
  r.verdict = worse(r.verdict, worse(v1, v3));
}

void check_symmetry(InequalityReport& r, StateAnalysis& st) {
  StateAnalysis swapped(st.rho().swapped(), st.config());
  r.left = interval_of(st.i3().value);
  r.right = interval_of(swapped.i3().value);
  r.slack = std::min(r.right.upper - r.left.lower, r.left.upper - r.right.lower);
  r.verdict = r.slack >= -kVerdictSlack ? Verdict::Holds : Verdict::Violated;
  r.note = "equality: holds when the certified intervals overlap";
}

void check_dim_bound(InequalityReport& r, StateAnalysis& st) {
  const DimPair d = st.rho().dims();
  const double bound = 2.0 * std::log2(std::min(d.a, d.b));
  r.left = {st.i3().value.lower, std::max(st.i2().upper, st.i3().value.upper)};
  r.right = {bound, bound};
}

}  // namespace

InequalityReport check_theorem(const std::string& name, StateAnalysis& state, double eps, double eps_prime,
                               std::uint64_t seed) {
  if (!(eps >= 0.0 && eps < 1.0)) throw SmoothingParameterError("eps must lie in [0, 1)");
  if (!(eps_prime >= 0.0 && eps_prime < 1.0)) throw SmoothingParameterError("eps' must lie in [0, 1)");
  InequalityReport r;
  r.name = name;
  r.dims = state.rho().dims();
  r.seed = seed;
  r.eps = eps;
  r.eps_prime = eps_prime;
  if (name == "thm1") {
    check_thm1(r, state);
  } else if (name == "thm2") {
    check_thm2(r, state);
  } else if (name == "cor3") {
    check_cor3(r, state);
  } else if (name == "cor4") {
    check_cor4(r, state);
  } else if (name == "chain_upper") {
    check_chain_upper(r, state);
  } else if (name == "chain_lower") {
    check_chain_lower(r, state);
  } else if (name == "lemma_b13") {
    check_lemma_b13(r, state);
  } else if (name == "dataproc_imax") {
    check_dataproc(r, state, seed);
    return r;
  } else if (name == "symmetry_i3") {
    check_symmetry(r, state);
    return r;
  } else if (name == "dim_bound") {
    check_dim_bound(r, state);
  } else {
    throw ParameterError("unknown inequality '" + name + "'");
  }
  finish(r);
  return r;
}

InequalityReport check_theorem(const std::string& name, const DensityOperator& rho, double eps, double eps_prime,
                               std::uint64_t seed) {
  StateAnalysis st(rho);
  return check_theorem(name, st, eps, eps_prime, seed);
}

double von_neumann(const HermitianOperator& rho) {
  const EigenDecomposition e = eig_hermitian(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double p = e.values(i);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

std::vector<IidRow> iid_scan(const DensityOperator& rho, int n_max, const SolverConfig& cfg) {
  if (n_max < 1) throw ParameterError("n_max must be at least 1");
  const double mi = mutual_information(rho);
  std::vector<IidRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const DensityOperator p = iid_power(rho, n);
    IidRow row;
    row.n = n;
    row.imax1_rate = imax1(p).value / n;
    const EntropyValue i2 = imax2(p, cfg);
    row.imax2_rate = {i2.lower / n, i2.upper / n};
    row.mutual_information = mi;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace oneshot
