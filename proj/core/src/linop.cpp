#include "oneshot/linop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

void fix_phase(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0) {
      const Complex phase = std::conj(vectors(best, c)) / best_abs;
      vectors.col(c) *= phase;
      vectors(best, c) = Complex(std::abs(vectors(best, c)), 0.0);
    }
  }
}

double spectral_scale(const RealVector& values) {
  if (values.size() == 0) return 0.0;
  return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

HermitianOperator from_eigen(const EigenDecomposition& e, const RealVector& mapped) {
  const ComplexMatrix& v = e.vectors;
  return HermitianOperator(v * mapped.cast<Complex>().asDiagonal() * v.adjoint());
}

void require_psd_values(const RealVector& values, double tol, const char* what) {
  const double scale = spectral_scale(values);
  if (values.size() > 0 && values(0) < -tol * std::max(scale, kTiny)) {
    std::ostringstream os;
    os << what << " is not positive semi-definite: smallest eigenvalue " << values(0)
       << " below tolerance " << -tol * scale;
    throw NotPsd(os.str());
  }
}

}  // namespace

void require_finite(const ComplexMatrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        std::ostringstream os;
        os << what << " has a non-finite entry at (" << i << ", " << j << ")";
        throw MalformedInput(os.str());
      }
    }
  }
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "Hermitian operator must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw MalformedInput(os.str());
  }
  require_finite(m, "Hermitian operator");
  const ComplexMatrix asym = m - m.adjoint();
  const double n = static_cast<double>(m.rows());
  // Frobenius bounds the operator norm from above, so this test is sufficient;
  // the exact norms are only computed when it fails.
  const double asym_f = asym.norm();
  if (asym_f > kHermiticityTol * std::max(1.0, m.norm() / std::sqrt(n))) {
    const ComplexMatrix herm = Complex(0.0, 1.0) * asym;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    const double asym_op = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const double norm_op = svd.singularValues()(0);
    if (asym_op > kHermiticityTol * std::max(1.0, norm_op)) {
      std::ostringstream os;
      os << "matrix is not Hermitian: ||M - M^dagger|| = " << asym_op;
      throw MalformedInput(os.str());
    }
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                                        static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::outer(const ComplexVector& v) {
  return HermitianOperator(v * v.adjoint());
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw MalformedInput("projector onto the zero vector");
  return HermitianOperator(v * v.adjoint() / n2);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch("operator sum with mismatched dimensions");
  return HermitianOperator(m_ + o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch("operator difference with mismatched dimensions");
  return HermitianOperator(m_ - o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Trusted{});
}

EigenDecomposition eig_hermitian(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix());
  if (es.info() != Eigen::Success) throw InternalError("Hermitian eigensolver did not converge");
  EigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
  fix_phase(out.vectors);
  return out;
}

double lambda_max(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.dim() - 1);
}

double lambda_min(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double operator_norm(const ComplexMatrix& m) {
  require_finite(m);
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return spectral_scale(es.eigenvalues());
}

double trace_norm(const ComplexMatrix& m) {
  require_finite(m);
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double trace_norm(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

bool is_psd(const HermitianOperator& m, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  const RealVector& v = es.eigenvalues();
  return v(0) >= -tol * std::max(spectral_scale(v), kTiny);
}

void require_psd(const HermitianOperator& m, double tol, const char* what) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  require_psd_values(es.eigenvalues(), tol, what);
}

HermitianOperator spectral_map(const HermitianOperator& m, const std::function<double(double)>& f) {
  const EigenDecomposition e = eig_hermitian(m);
  RealVector mapped = e.values.unaryExpr(f);
  return from_eigen(e, mapped);
}

namespace {

// Shared body of the PSD functional calculus: kernel eigenvalues map to zero.
HermitianOperator psd_map(const HermitianOperator& m, double rank_tol, const char* what,
                          double (*f)(double)) {
  const EigenDecomposition e = eig_hermitian(m);
  require_psd_values(e.values, rank_tol, what);
  const double cut = rank_tol * std::max(e.values(e.values.size() - 1), 0.0);
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double v = e.values(i);
    mapped(i) = (v > cut && v > 0.0) ? f(v) : 0.0;
  }
  return from_eigen(e, mapped);
}

}  // namespace

HermitianOperator generalized_inverse(const HermitianOperator& m, double rank_tol) {
  return psd_map(m, rank_tol, "generalized_inverse argument", [](double v) { return 1.0 / v; });
}

HermitianOperator matrix_sqrt(const HermitianOperator& m, double rank_tol) {
  return psd_map(m, rank_tol, "matrix_sqrt argument", [](double v) { return std::sqrt(v); });
}

HermitianOperator inv_sqrt(const HermitianOperator& m, double rank_tol) {
  return psd_map(m, rank_tol, "inv_sqrt argument", [](double v) { return 1.0 / std::sqrt(v); });
}

HermitianOperator support_projector(const HermitianOperator& m, double rank_tol) {
  const EigenDecomposition e = eig_hermitian(m);
  const double cut = rank_tol * std::max(e.values(e.values.size() - 1), 0.0);
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = e.values(i) > cut && e.values(i) > 0.0 ? 1.0 : 0.0;
  return from_eigen(e, mapped);
}

int rank(const HermitianOperator& m, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  const RealVector& v = es.eigenvalues();
  const double cut = rank_tol * std::max(v(v.size() - 1), 0.0);
  return static_cast<int>((v.array() > cut && v.array() > 0.0).count());
}

ComplexMatrix support_basis(const HermitianOperator& m, double rank_tol) {
  const EigenDecomposition e = eig_hermitian(m);
  const double cut = rank_tol * std::max(e.values(e.values.size() - 1), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cut && e.values(i) > 0.0) keep.push_back(i);
  }
  ComplexMatrix basis(m.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = e.vectors.col(keep[k]);
  return basis;
}

JordanParts jordan_decomposition(const HermitianOperator& m, double rank_tol) {
  const EigenDecomposition e = eig_hermitian(m);
  const double band = rank_tol * spectral_scale(e.values);
  RealVector pos(e.values.size());
  RealVector neg(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double v = e.values(i);
    if (v >= -band) {
      pos(i) = v;
      neg(i) = 0.0;
    } else {
      pos(i) = 0.0;
      neg(i) = -v;
    }
  }
  return {from_eigen(e, pos), from_eigen(e, neg)};
}

HermitianOperator conjugate(const ComplexMatrix& x, const HermitianOperator& m) {
  if (x.cols() != m.dim()) throw DimensionMismatch("conjugation dimension mismatch");
  return HermitianOperator(x * m.matrix() * x.adjoint());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, DimPair dims, Subsystem traced) {
  const int n = dims.total();
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "partial trace: operator is " << m.rows() << "x" << m.cols() << " but dims " << dims.a << "x"
       << dims.b << " require " << n << "x" << n;
    throw DimensionMismatch(os.str());
  }
  if (traced == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(dims.a, dims.a);
    for (int i = 0; i < dims.a; ++i) {
      for (int j = 0; j < dims.a; ++j) {
        out(i, j) = m.block(i * dims.b, j * dims.b, dims.b, dims.b).trace();
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dims.b, dims.b);
  for (int a = 0; a < dims.a; ++a) out += m.block(a * dims.b, a * dims.b, dims.b, dims.b);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& m, DimPair dims, Subsystem traced) {
  return HermitianOperator(partial_trace(m.matrix(), dims, traced));
}

namespace {

// Maps each input multi-index to its position after permutation.
std::vector<Eigen::Index> permutation_map(std::span<const int> dims, std::span<const int> perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) throw DimensionMismatch("permutation length does not match number of subsystems");
  std::vector<bool> seen(k, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= k || seen[p]) throw ParameterError("invalid subsystem permutation");
    seen[p] = true;
  }
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  std::vector<int> out_dims(k);
  for (std::size_t j = 0; j < k; ++j) out_dims[j] = dims[perm[j]];

  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<int> digits(k, 0);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (std::size_t j = k; j-- > 0;) {
      digits[j] = static_cast<int>(rem % dims[j]);
      rem /= dims[j];
    }
    Eigen::Index out = 0;
    for (std::size_t j = 0; j < k; ++j) out = out * out_dims[j] + digits[perm[j]];
    map[static_cast<std::size_t>(idx)] = out;
  }
  return map;
}

}  // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch("permute_subsystems: operator size mismatch");
  ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(map[i], map[j]) = m(i, j);
  }
  return out;
}

ComplexVector permute_subsystems(const ComplexVector& v, std::span<const int> dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  if (v.size() != static_cast<Eigen::Index>(map.size())) {
    throw DimensionMismatch("permute_subsystems: vector size mismatch");
  }
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

HermitianOperator swap_subsystems(const HermitianOperator& m, DimPair dims) {
  const int d[2] = {dims.a, dims.b};
  const int p[2] = {1, 0};
  return HermitianOperator(permute_subsystems(m.matrix(), d, p));
}

}  // namespace oneshot
