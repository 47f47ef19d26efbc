#include "oneshot/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "oneshot/distance.hpp"
#include "oneshot/error.hpp"

namespace oneshot {

namespace {

constexpr double kSupportLeak = 1e-9;

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("operators have dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
  }
}

EntropyValue bits_from_interval(double lo, double hi, double value, CertifiedValue cv) {
  EntropyValue e;
  e.lower = lo;
  e.upper = hi;
  e.value = value;
  e.certified = std::move(cv);
  return e;
}

// Spectrum of a PSD operator, descending, with its eigenvectors.
struct Spectrum {
  std::vector<double> p;
  ComplexMatrix vectors;
};

Spectrum descending_spectrum(const HermitianOperator& m) {
  const EigenDecomposition e = eig_hermitian(m);
  const int d = m.dim();
  Spectrum s;
  s.vectors.resize(d, d);
  for (int k = 0; k < d; ++k) {
    s.p.push_back(std::max(0.0, e.values(d - 1 - k)));
    s.vectors.col(k) = e.vectors.col(d - 1 - k);
  }
  return s;
}

// max sum_i sqrt(p_i q_i) over 0 <= q_i <= lambda, sum q = mass, with p
// descending. Returns the optimal q through `q`.
double water_fill(const std::vector<double>& p, double lambda, double mass, std::vector<double>& q) {
  const int d = static_cast<int>(p.size());
  q.assign(d, 0.0);
  std::vector<double> tail(d + 1, 0.0);
  for (int i = d - 1; i >= 0; --i) tail[i] = tail[i + 1] + p[i];
  for (int k = 0; k <= d; ++k) {
    // First k entries sit at the cap, the rest are proportional to p.
    if (tail[k] <= 0.0) {
      if (k * lambda + 1e-300 < mass && k < d) continue;
      for (int i = 0; i < k; ++i) q[i] = lambda;
      break;
    }
    double kappa = (mass - k * lambda) / tail[k];
    if (kappa < 0.0) continue;
    if (k < d && kappa * p[k] > lambda * (1.0 + 1e-12)) continue;
    if (k > 0 && kappa * p[k - 1] < lambda * (1.0 - 1e-12)) continue;
    if (kappa * p[k < d ? k : d - 1] > lambda) kappa = lambda / p[k < d ? k : d - 1];
    for (int i = 0; i < d; ++i) q[i] = i < k ? lambda : kappa * p[i];
    break;
  }
  double f = 0.0;
  for (int i = 0; i < d; ++i) f += std::sqrt(p[i] * q[i]);
  return f;
}

struct CapLevel {
  double fidelity = 0.0;
  std::vector<double> q;
};

// Largest generalized fidelity between p and any diagonal q with max q <= lambda.
CapLevel best_fidelity_at(const std::vector<double>& p, double trace, double lambda, bool normalized) {
  int support = 0;
  for (double x : p) {
    if (x > 0.0) ++support;
  }
  const double smax = std::min(1.0, support * lambda);
  CapLevel out;
  std::vector<double> q;
  const auto value = [&](double s) {
    const double w = water_fill(p, lambda, s, q);
    return normalized ? w : w + std::sqrt(std::max(0.0, 1.0 - trace) * std::max(0.0, 1.0 - s));
  };
  double best_s = smax;
  if (!normalized) {
    // The objective is concave in the mass s.
    double a = 0.0, b = smax;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = value(c), fd = value(d);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      if (fc < fd) {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = value(d);
      } else {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = value(c);
      }
    }
    best_s = 0.5 * (a + b);
    if (value(smax) >= value(best_s)) best_s = smax;
  }
  out.fidelity = std::min(1.0, value(best_s));
  out.q = q;
  return out;
}

HermitianOperator diagonal_in(const ComplexMatrix& vectors, const std::vector<double>& q) {
  RealVector v(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) v(static_cast<Eigen::Index>(i)) = q[i];
  return HermitianOperator(ComplexMatrix(vectors * v.cast<Complex>().asDiagonal() * vectors.adjoint()));
}

struct SmoothingSearch {
  double feasible = 0.0;
  double infeasible = 0.0;
  std::vector<double> q;
  Spectrum spectrum;
};

SmoothingSearch cap_search(const DensityOperator& rho, double eps) {
  SmoothingSearch s;
  s.spectrum = descending_spectrum(rho.op());
  const auto& p = s.spectrum.p;
  const double t = rho.trace();
  const bool normalized = rho.trace_class() == TraceClass::Normalized;
  const double target = std::sqrt(std::max(0.0, 1.0 - eps * eps));
  double hi = p.front();
  double lo = 0.0;
  s.q = p;
  for (int it = 0; it < 300 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    CapLevel c = best_fidelity_at(p, t, mid, normalized);
    if (c.fidelity >= target) {
      hi = mid;
      s.q = std::move(c.q);
    } else {
      lo = mid;
    }
  }
  s.feasible = hi;
  s.infeasible = lo;
  return s;
}

}  // namespace

EntropyValue dmax(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_dim(rho, sigma);
  require_psd(rho, kDefaultRankTol, "rho");
  require_psd(sigma, kDefaultRankTol, "sigma");
  const HermitianOperator proj = support_projector(sigma);
  const double outside = rho.trace() - (proj.matrix() * rho.matrix()).trace().real();
  if (outside > kSupportLeak * std::max(rho.trace(), 1e-300)) {
    std::ostringstream os;
    os << "Dmax needs supp rho inside supp sigma; weight " << outside << " lies outside";
    throw SupportViolation(os.str());
  }
  const HermitianOperator w = inv_sqrt(sigma);
  const double top = lambda_max(conjugate(w.matrix(), rho));
  if (!(top > 0.0)) throw MalformedInput("Dmax of the zero operator");
  return EntropyValue::exact(std::log2(top));
}

EntropyValue dmax(const DensityOperator& rho, const DensityOperator& sigma) { return dmax(rho.op(), sigma.op()); }

EntropyValue dmin(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_dim(rho, sigma);
  const double overlap = root_overlap(rho, sigma);
  const double scale = std::sqrt(std::max(rho.trace(), 0.0) * std::max(sigma.trace(), 0.0));
  if (!(overlap > 1e-12 * scale)) return EntropyValue::plus_infinity();
  return EntropyValue::exact(-2.0 * std::log2(overlap));
}

EntropyValue dmin(const DensityOperator& rho, const DensityOperator& sigma) { return dmin(rho.op(), sigma.op()); }

EntropyValue hmin(const DensityOperator& rho) { return EntropyValue::exact(-std::log2(lambda_max(rho.op()))); }

EntropyValue hmax(const DensityOperator& rho) {
  const EigenDecomposition e = eig_hermitian(rho.op());
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) s += std::sqrt(std::max(0.0, e.values(i)));
  return EntropyValue::exact(2.0 * std::log2(s));
}

EntropyValue hmin_cond(const DensityOperator& rho_ab, const SolverConfig& cfg) {
  CertifiedValue cv = min_trace_dominating(rho_ab, cfg);
  const double lo = -std::log2(cv.upper);
  const double hi = cv.lower > 0.0 ? -std::log2(cv.lower) : std::numeric_limits<double>::infinity();
  return bits_from_interval(lo, hi, lo, std::move(cv));
}

DensityOperator complementary_state(const DensityOperator& rho_ab) {
  const DimPair d = rho_ab.dims();
  const Purification phi = purify(rho_ab);
  const int dc = phi.ancilla_dim;
  const std::vector<int> dims{d.a, d.b, dc};
  const std::vector<int> perm{0, 2, 1};
  const ComplexVector v = permute_subsystems(phi.vector, dims, perm);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const ComplexMatrix m = Eigen::Map<const RowMajor>(v.data(), d.a * dc, d.b);
  return DensityOperator(HermitianOperator(ComplexMatrix(m * m.adjoint())), DimPair{d.a, dc});
}

EntropyValue hmax_cond(const DensityOperator& rho_ab, const SolverConfig& cfg) {
  CertifiedValue cv = min_trace_dominating(complementary_state(rho_ab), cfg);
  const double hi = std::log2(cv.upper);
  const double lo = cv.lower > 0.0 ? std::log2(cv.lower) : -std::numeric_limits<double>::infinity();
  return bits_from_interval(lo, hi, hi, std::move(cv));
}

CertifiedValue smooth_hmin(const DensityOperator& rho, double eps) {
  require_smoothing_radius(eps, rho.trace());
  CertifiedValue out;
  if (eps == 0.0) {
    const double top = lambda_max(rho.op());
    out.lower = out.upper = -std::log2(top);
    out.primal_witness = rho.op();
    out.dual_witness = HermitianOperator::identity(rho.dim()) * top;
    return out;
  }
  const SmoothingSearch s = cap_search(rho, eps);
  const HermitianOperator state = diagonal_in(s.spectrum.vectors, s.q);
  const DensityOperator witness(state, rho.dims());
  if (!in_ball(witness, rho, eps)) {
    throw InternalError("eigenvalue-cap smoothing state left the ball");
  }
  out.lower = -std::log2(lambda_max(state));
  out.upper = s.infeasible > 0.0 ? -std::log2(s.infeasible) : std::numeric_limits<double>::infinity();
  out.lower = std::min(out.lower, out.upper);
  out.primal_witness = state;
  out.dual_witness = HermitianOperator::identity(rho.dim()) * s.infeasible;
  return out;
}

CapResult cap_operator(const DensityOperator& rho, double eps) {
  require_smoothing_radius(eps, rho.trace());
  const Spectrum spec = descending_spectrum(rho.op());
  double level = spec.p.front();
  if (eps > 0.0) level = cap_search(rho, eps * eps / 16.0).feasible;
  std::vector<double> diag(spec.p.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    diag[i] = spec.p[i] > level ? std::sqrt(level / spec.p[i]) : 1.0;
  }
  const HermitianOperator pi = diagonal_in(spec.vectors, diag);
  DensityOperator state(conjugate(pi.matrix(), rho.op()), rho.dims());
  return {pi, std::move(state), level};
}

}  // namespace oneshot
