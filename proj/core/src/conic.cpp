#include "oneshot/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

// Problem after restricting A to supp(C) and whitening C away:
//   minimize tr X  s.t.  I_r (x) X >= y,   y normalized to lambda_max(y) = 1.
struct Whitened {
  ComplexMatrix y;
  ComplexMatrix w;  // (dA dB) x (r dB); y = w^dagger rho w / scale
  int r = 0;
  int db = 0;
  double scale = 1.0;
};

struct Iterate {
  ComplexMatrix x;
  ComplexMatrix z;  // dual candidate, feasible after scaling
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
};

ComplexMatrix slack(const ComplexMatrix& x, const ComplexMatrix& y, int r, int db) {
  ComplexMatrix s = -y;
  for (int a = 0; a < r; ++a) s.block(a * db, a * db, db, db) += x;
  return s;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m, int r, int db) {
  ComplexMatrix t = ComplexMatrix::Zero(db, db);
  for (int a = 0; a < r; ++a) t += m.block(a * db, a * db, db, db);
  return t;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double hermitian_lambda_min(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double hermitian_lambda_max(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

// Barrier value tr X - mu logdet(S); +inf outside the cone.
double barrier_value(const ComplexMatrix& x, const Whitened& p, double mu) {
  Eigen::LLT<ComplexMatrix> llt(slack(x, p.y, p.r, p.db));
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const ComplexMatrix& l = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
    logdet += 2.0 * std::log(d);
  }
  return x.trace().real() - mu * logdet;
}

// Certified interval at x: upper = tr X after repairing any rounding-level
// infeasibility, lower from the barrier multiplier mu S^{-1} scaled into the
// dual cone.
void certify(Iterate& it, const Whitened& p, double mu) {
  const int n = p.r * p.db;
  ComplexMatrix x = it.x;
  const double lmin = hermitian_lambda_min(slack(x, p.y, p.r, p.db));
  if (lmin < 0.0) x += ComplexMatrix::Identity(p.db, p.db) * (-2.0 * lmin);
  const double upper = x.trace().real();

  Eigen::LLT<ComplexMatrix> llt(slack(x, p.y, p.r, p.db));
  double lower = -std::numeric_limits<double>::infinity();
  ComplexMatrix z;
  if (llt.info() == Eigen::Success) {
    z = hermitian_part(mu * llt.solve(ComplexMatrix::Identity(n, n)));
    const double zmin = hermitian_lambda_min(z);
    if (zmin < 0.0) z += ComplexMatrix::Identity(n, n) * (-zmin);
    // Congruence by I (x) T^{-1/2} with T = tr_A Z makes tr_A Z = I exactly,
    // so off-centre iterates still give a feasible dual point.
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> te(hermitian_part(trace_out_first(z, p.r, p.db)));
    if (te.eigenvalues()(0) > 0.0) {
      const ComplexMatrix tis = te.eigenvectors() * te.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                                te.eigenvectors().adjoint();
      ComplexMatrix k = ComplexMatrix::Zero(n, n);
      for (int a = 0; a < p.r; ++a) k.block(a * p.db, a * p.db, p.db, p.db) = tis;
      z = hermitian_part(k * z * k);
      const double t = hermitian_lambda_max(trace_out_first(z, p.r, p.db));
      if (t > 1.0) z /= t;
      lower = (z * p.y).trace().real();
    }
  }
  if (upper < it.upper) {
    it.upper = upper;
    it.x = x;
  }
  if (lower > it.lower) {
    it.lower = lower;
    it.z = z;
  }
}

Whitened whiten(const HermitianOperator& c, const DensityOperator& rho) {
  const DimPair dims = rho.dims();
  if (c.dim() != dims.a) {
    throw DimensionMismatch("C has dimension " + std::to_string(c.dim()) + " but the first factor has dimension " +
                            std::to_string(dims.a));
  }
  require_psd(c, kDefaultRankTol, "C");
  const EigenDecomposition e = eig_hermitian(c);
  const double cut = kDefaultRankTol * std::max(e.values(e.values.size() - 1), 0.0);
  std::vector<int> keep;
  for (int i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cut && e.values(i) > 0.0) keep.push_back(i);
  }
  if (keep.empty()) throw Infeasible("C is the zero operator");
  const int r = static_cast<int>(keep.size());
  ComplexMatrix v(dims.a, r);
  ComplexMatrix vw(dims.a, r);
  for (int k = 0; k < r; ++k) {
    v.col(k) = e.vectors.col(keep[k]);
    vw.col(k) = e.vectors.col(keep[k]) / std::sqrt(e.values(keep[k]));
  }

  const ComplexMatrix rho_a = partial_trace(rho.matrix(), dims, Subsystem::B);
  const double inside = (v.adjoint() * rho_a * v).trace().real();
  const double leak = rho.trace() - inside;
  if (leak > 1e-9 * rho.trace()) {
    std::ostringstream os;
    os << "supp(rho_A) is not contained in supp(C): weight " << leak << " lies outside";
    throw Infeasible(os.str());
  }

  Whitened p;
  p.r = r;
  p.db = dims.b;
  p.w = tensor(vw, ComplexMatrix(ComplexMatrix::Identity(dims.b, dims.b)));
  ComplexMatrix y = hermitian_part(p.w.adjoint() * rho.matrix() * p.w);
  p.scale = hermitian_lambda_max(y);
  if (!(p.scale > 0.0)) throw Infeasible("rho vanishes on supp(C)");
  p.y = y / p.scale;
  return p;
}

}  // namespace

CertifiedValue min_trace_dominating(const HermitianOperator& c, const DensityOperator& rho, const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ParameterError("solver tolerance must be positive");
  if (cfg.max_iters < 1) throw ParameterError("solver iteration budget must be positive");
  const Whitened p = whiten(c, rho);
  const int r = p.r;
  const int db = p.db;
  const int n = r * db;
  const ComplexMatrix id_b = ComplexMatrix::Identity(db, db);

  // Start from the cheaper of two feasible points: a multiple of I, or the
  // marginal bound y <= r I (x) tr_A y.
  Iterate it;
  const ComplexMatrix flat = 1.01 * id_b;
  const ComplexMatrix marg = 1.01 * r * hermitian_part(trace_out_first(p.y, r, db)) + 0.01 * id_b;
  it.x = marg.trace().real() < flat.trace().real() ? marg : flat;
  ComplexMatrix x = it.x;

  double mu = x.trace().real() / n;
  int iters = 0;
  int stalls = 0;
  bool done = false;
  const auto rescaled_gap_ok = [&](double factor) {
    const double up = p.scale * it.upper;
    return p.scale * (it.upper - it.lower) <= factor * cfg.tol * std::max(1.0, up);
  };

  while (!done && iters < cfg.max_iters) {
    bool stalled = false;
    for (int inner = 0; inner < 60 && iters < cfg.max_iters; ++inner) {
      Eigen::LLT<ComplexMatrix> llt(slack(x, p.y, r, db));
      if (llt.info() != Eigen::Success) throw InternalError("barrier iterate left the cone");
      const ComplexMatrix g = hermitian_part(llt.solve(ComplexMatrix::Identity(n, n)));
      const ComplexMatrix grad = id_b - mu * hermitian_part(trace_out_first(g, r, db));

      // Hessian of -mu logdet(I (x) X - y) in row-major vec coordinates.
      ComplexMatrix h = ComplexMatrix::Zero(db * db, db * db);
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          const ComplexMatrix gab = g.block(a * db, b * db, db, db);
          const ComplexMatrix gba_t = g.block(b * db, a * db, db, db).transpose();
          for (int i = 0; i < db; ++i) {
            for (int j = 0; j < db; ++j) {
              const Complex s = gab(i, j);
              if (s != Complex(0.0, 0.0)) h.block(i * db, j * db, db, db) += s * gba_t;
            }
          }
        }
      }
      h *= mu;
      ComplexVector rhs(db * db);
      for (int i = 0; i < db; ++i) {
        for (int j = 0; j < db; ++j) rhs(i * db + j) = -grad(i, j);
      }
      Eigen::LLT<ComplexMatrix> hl(hermitian_part(h));
      ComplexVector d;
      if (hl.info() == Eigen::Success) {
        d = hl.solve(rhs);
      } else {
        d = hermitian_part(h).ldlt().solve(rhs);
      }
      ComplexMatrix delta(db, db);
      for (int i = 0; i < db; ++i) {
        for (int j = 0; j < db; ++j) delta(i, j) = d(i * db + j);
      }
      delta = hermitian_part(delta);
      const double dec = -(grad.adjoint() * delta).trace().real();
      if (!(dec > 1e-12)) break;

      const double f0 = barrier_value(x, p, mu);
      double t = 1.0;
      bool accepted = false;
      while (t > 1e-14) {
        const ComplexMatrix xn = x + t * delta;
        const double fn = barrier_value(xn, p, mu);
        if (fn <= f0 - 0.25 * t * dec) {
          x = xn;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      ++iters;
      if (!accepted) {
        stalled = true;
        break;
      }
      if (dec < 1e-3 * mu) break;
    }
    Iterate probe;
    probe.x = x;
    certify(probe, p, mu);
    if (probe.upper < it.upper) {
      it.upper = probe.upper;
      it.x = probe.x;
    }
    if (probe.lower > it.lower) {
      it.lower = probe.lower;
      it.z = probe.z;
    }
    if (rescaled_gap_ok(0.01)) done = true;
    if (stalled && ++stalls >= 3) break;
    mu *= stalled ? 0.5 : 0.1;
  }

  CertifiedValue out;
  out.iterations = iters;
  out.upper = p.scale * it.upper;
  out.lower = std::min(p.scale * it.lower, out.upper);
  if (!rescaled_gap_ok(1.0)) {
    std::ostringstream os;
    os << "conic solver stopped after " << iters << " Newton steps with interval [" << out.lower << ", "
       << out.upper << "]";
    throw SolverBudgetExhausted(os.str(), out.lower, out.upper);
  }
  out.primal_witness = HermitianOperator(ComplexMatrix(p.scale * it.x));
  out.dual_witness = HermitianOperator(ComplexMatrix(p.w * it.z * p.w.adjoint()));
  return out;
}

CertifiedValue min_trace_dominating(const DensityOperator& rho, const SolverConfig& cfg) {
  return min_trace_dominating(HermitianOperator::identity(rho.dims().a), rho, cfg);
}

double dual_lower_bound(const HermitianOperator& c, const DensityOperator& rho, const HermitianOperator& y,
                        double slack_tol) {
  const DimPair dims = rho.dims();
  if (c.dim() != dims.a || y.dim() != dims.total()) throw DimensionMismatch("dual witness dimension mismatch");
  const double ymin = lambda_min(y);
  if (ymin < -slack_tol) {
    std::ostringstream os;
    os << "dual witness violates Y >= 0: smallest eigenvalue " << ymin;
    throw ParameterError(os.str());
  }
  const HermitianOperator root = matrix_sqrt(c);
  const ComplexMatrix k = tensor(root.matrix(), ComplexMatrix(ComplexMatrix::Identity(dims.b, dims.b)));
  const HermitianOperator marg(partial_trace(ComplexMatrix(k * y.matrix() * k.adjoint()), dims, Subsystem::A));
  const double excess = lambda_max(marg) - 1.0;
  if (excess > slack_tol) {
    std::ostringstream os;
    os << "dual witness violates tr_A((C x I) Y) <= I: excess eigenvalue " << excess;
    throw ParameterError(os.str());
  }
  return (y.matrix() * rho.matrix()).trace().real();
}

double primal_defect(const HermitianOperator& c, const DensityOperator& rho, const HermitianOperator& x) {
  if (c.dim() != rho.dims().a || x.dim() != rho.dims().b) throw DimensionMismatch("primal witness dimension mismatch");
  return lambda_min(HermitianOperator(ComplexMatrix(tensor(c.matrix(), x.matrix()) - rho.matrix())));
}

}  // namespace oneshot
