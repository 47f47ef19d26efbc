#include "oneshot/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_same_dim(int a, int b) {
  if (a != b) {
    throw DimensionMismatch("operators have dimensions " + std::to_string(a) + " and " + std::to_string(b));
  }
}

// Fidelity within a few ulps of one is rounding noise; without the snap the
// square root turns it into a distance near 1e-8.
double distance_from_fidelity(double f) {
  if (f > 1.0 - 64.0 * std::numeric_limits<double>::epsilon()) return 0.0;
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

// A trace within a few ulps of one counts as one: the root makes a deficit
// of 1e-16 worth 1e-8.
double deficit(double t) {
  const double d = 1.0 - t;
  return d > 16.0 * std::numeric_limits<double>::epsilon() ? d : 0.0;
}

double sqrt_deficit(double ta, double tb) { return std::sqrt(deficit(ta) * deficit(tb)); }

// Square root with negatives and the rounding band near zero clipped. The band
// is a few ulps of the top eigenvalue: rounding noise of 1e-17 in a kernel
// direction would otherwise turn into 3e-9 after the root.
ComplexMatrix clipped_sqrt(const HermitianOperator& m) {
  const EigenDecomposition e = eig_hermitian(m);
  const double top = std::max(0.0, e.values.maxCoeff());
  const double band = 4.0 * m.dim() * std::numeric_limits<double>::epsilon() * top;
  const RealVector r = e.values.unaryExpr([band](double v) { return v > band ? std::sqrt(v) : 0.0; });
  return e.vectors * r.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

// Lexicographic order on entries; evaluating in a fixed order makes the
// overlap exactly symmetric in floating point.
bool precedes(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex x = a.data()[i], y = b.data()[i];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

double root_overlap(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim());
  const bool flip = precedes(b.matrix(), a.matrix());
  const HermitianOperator& first = flip ? b : a;
  const HermitianOperator& second = flip ? a : b;
  return trace_norm(ComplexMatrix(clipped_sqrt(first) * clipped_sqrt(second)));
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  const double overlap = root_overlap(rho.op(), sigma.op());
  return clamp01(overlap + sqrt_deficit(rho.trace(), sigma.trace()));
}

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  // P is ill-conditioned at zero (an error d in F becomes sqrt(2d)), so
  // identical inputs are answered exactly.
  if (rho.matrix() == sigma.matrix()) return 0.0;
  return distance_from_fidelity(fidelity(rho, sigma));
}

double fidelity(const Purification& phi, const Purification& theta) {
  if (phi.vector.size() != theta.vector.size()) throw DimensionMismatch("purifications live on different spaces");
  const double overlap = std::abs(phi.vector.dot(theta.vector));
  return clamp01(overlap + sqrt_deficit(phi.norm2(), theta.norm2()));
}

double purified_distance(const Purification& phi, const Purification& theta) {
  return distance_from_fidelity(fidelity(phi, theta));
}

double trace_distance_generalized(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  return 0.5 * trace_norm(rho.op() - sigma.op()) + 0.5 * std::abs(rho.trace() - sigma.trace());
}

bool in_ball(const DensityOperator& candidate, const DensityOperator& rho, double eps) {
  return purified_distance(candidate, rho) <= eps + kBallSlack;
}

void require_smoothing_radius(double eps, double trace) {
  if (!(eps >= 0.0) || !(eps < std::sqrt(trace)) || !(eps < 1.0)) {
    throw SmoothingParameterError("smoothing parameter " + std::to_string(eps) + " must lie in [0, sqrt(tr rho)) = [0, " +
                                  std::to_string(std::sqrt(trace)) + ")");
  }
}

Purification uhlmann_partner(const Purification& phi, const DensityOperator& sigma) {
  const int d = phi.system_dim;
  const int da = phi.ancilla_dim;
  require_same_dim(d, sigma.dim());
  const ComplexMatrix support = support_basis(sigma.op());
  const int rs = static_cast<int>(support.cols());
  if (da < rs) {
    throw ParameterError("ancilla of dimension " + std::to_string(da) + " is too small: the partner needs at least " +
                         std::to_string(rs) + " (rank of sigma)");
  }

  const ComplexMatrix root = clipped_sqrt(sigma.op());
  const ComplexMatrix big_phi = Eigen::Map<const RowMajorMatrix>(phi.vector.data(), d, da);
  const ComplexMatrix m = root * big_phi;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double cut = 1e-9 * (s.size() > 0 ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut && r < rs) ++r;

  // V maps the ancilla onto supp(sigma): aligned pairs first, then the rest of
  // the support paired with unused right singular vectors.
  ComplexMatrix v = ComplexMatrix::Zero(d, da);
  const ComplexMatrix ur = svd.matrixU().leftCols(r);
  const ComplexMatrix& q = svd.matrixV();
  v += ur * q.leftCols(r).adjoint();
  if (rs > r) {
    const ComplexMatrix rest = support * support.adjoint() - ur * ur.adjoint();
    const EigenDecomposition e = eig_hermitian(HermitianOperator(rest));
    const ComplexMatrix w = e.vectors.rightCols(rs - r);
    v += w * q.middleCols(r, rs - r).adjoint();
  }

  const RowMajorMatrix theta = root * v;
  const ComplexVector vec = Eigen::Map<const ComplexVector>(theta.data(), theta.size());
  return schmidt_decompose(vec, d, da);
}

DensityOperator extension_partner(const DensityOperator& rho_ext, const DensityOperator& sigma) {
  const DimPair dims = rho_ext.dims();
  require_same_dim(dims.a, sigma.dim());
  // Pad the purifying system so that H' (x) H'' can host any support of sigma.
  const int pad = (dims.a + dims.b - 1) / dims.b;
  const Purification full = purify(rho_ext, pad);
  const int anc = dims.b * full.ancilla_dim;
  const Purification phi = schmidt_decompose(full.vector, dims.a, anc);
  const Purification theta = uhlmann_partner(phi, sigma);
  const ComplexMatrix t = Eigen::Map<const RowMajorMatrix>(theta.vector.data(), dims.total(), full.ancilla_dim);
  return DensityOperator(HermitianOperator(t * t.adjoint()), dims);
}

}  // namespace oneshot
