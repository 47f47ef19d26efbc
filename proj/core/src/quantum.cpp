#include "oneshot/quantum.hpp"

#include <cmath>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorMatrix> as_matrix(const ComplexVector& v, int rows, int cols) {
  return Eigen::Map<const RowMajorMatrix>(v.data(), rows, cols);
}

}  // namespace

DensityOperator::DensityOperator(HermitianOperator op, DimPair dims) : op_(std::move(op)), dims_(dims) {
  if (dims_.a < 1 || dims_.b < 1) throw DimensionMismatch("dimensions must be positive");
  if (dims_.total() != op_.dim()) {
    throw DimensionMismatch("dims " + std::to_string(dims_.a) + "x" + std::to_string(dims_.b) +
                            " do not match operator dimension " + std::to_string(op_.dim()));
  }
  require_psd(op_, kDefaultRankTol, "density operator");
  const double t = op_.trace();
  if (!(t > 0.0)) throw MalformedInput("density operator has zero trace");
  if (t > 1.0 + kTraceTol) throw MalformedInput("density operator trace " + std::to_string(t) + " exceeds 1");
  class_ = std::abs(t - 1.0) <= kTraceTol ? TraceClass::Normalized : TraceClass::Subnormalized;
}

DensityOperator::DensityOperator(HermitianOperator op) : DensityOperator(op, DimPair{op.dim(), 1}) {}

DensityOperator DensityOperator::normalized(HermitianOperator op, DimPair dims) {
  DensityOperator rho(std::move(op), dims);
  if (rho.trace_class() != TraceClass::Normalized) {
    throw ParameterError("expected a normalized state, trace is " + std::to_string(rho.trace()));
  }
  return rho;
}

DensityOperator DensityOperator::marginal(Subsystem keep) const {
  const Subsystem traced = keep == Subsystem::A ? Subsystem::B : Subsystem::A;
  const int d = keep == Subsystem::A ? dims_.a : dims_.b;
  return DensityOperator(partial_trace(op_, dims_, traced), DimPair{d, 1});
}

DensityOperator DensityOperator::normalize() const { return DensityOperator(op_ * (1.0 / trace()), dims_); }

DensityOperator DensityOperator::scaled(double k) const {
  if (!(k > 0.0)) throw ParameterError("scale factor must be positive");
  return DensityOperator(op_ * k, dims_);
}

DensityOperator DensityOperator::swapped() const {
  return DensityOperator(swap_subsystems(op_, dims_), dims_.swapped());
}

HermitianOperator Purification::projector() const { return HermitianOperator::outer(vector); }

HermitianOperator Purification::reduced_system() const {
  const auto phi = as_matrix(vector, system_dim, ancilla_dim);
  return HermitianOperator(phi * phi.adjoint());
}

HermitianOperator Purification::reduced_ancilla() const {
  const auto phi = as_matrix(vector, system_dim, ancilla_dim);
  return HermitianOperator(phi.transpose() * phi.conjugate());
}

Purification schmidt_decompose(const ComplexVector& v, int left_dim, int right_dim, double rank_tol) {
  if (v.size() != static_cast<Eigen::Index>(left_dim) * right_dim) {
    throw DimensionMismatch("vector length does not match " + std::to_string(left_dim) + "x" +
                            std::to_string(right_dim));
  }
  const ComplexMatrix phi = as_matrix(v, left_dim, right_dim);
  Eigen::JacobiSVD<ComplexMatrix> svd(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) throw MalformedInput("cannot decompose the zero vector");
  const double cut = rank_tol * s(0) * s(0);
  int r = 0;
  while (r < s.size() && s(r) * s(r) > cut) ++r;

  Purification p;
  p.vector = v;
  p.system_dim = left_dim;
  p.ancilla_dim = right_dim;
  p.schmidt.coefficients = s.head(r).array().square();
  p.schmidt.left = svd.matrixU().leftCols(r);
  p.schmidt.right = svd.matrixV().leftCols(r).conjugate();
  return p;
}

Purification purify(const DensityOperator& rho, int min_ancilla) {
  const EigenDecomposition e = eig_hermitian(rho.op());
  const int d = rho.dim();
  const double cut = kDefaultRankTol * std::max(e.values(d - 1), 0.0);
  int r = 0;
  for (int i = 0; i < d; ++i) {
    if (e.values(i) > cut) ++r;
  }
  if (r == 0) throw MalformedInput("cannot purify the zero operator");
  const int anc = std::max(r, min_ancilla);

  Purification p;
  p.system_dim = d;
  p.ancilla_dim = anc;
  p.vector = ComplexVector::Zero(static_cast<Eigen::Index>(d) * anc);
  p.schmidt.coefficients.resize(r);
  p.schmidt.left.resize(d, r);
  p.schmidt.right = ComplexMatrix::Zero(anc, r);
  for (int k = 0; k < r; ++k) {
    const int i = d - 1 - k;  // descending
    const double pk = e.values(i);
    p.schmidt.coefficients(k) = pk;
    p.schmidt.left.col(k) = e.vectors.col(i);
    p.schmidt.right(k, k) = 1.0;
    const double amp = std::sqrt(pk);
    for (int s = 0; s < d; ++s) p.vector(static_cast<Eigen::Index>(s) * anc + k) += amp * e.vectors(s, i);
  }
  return p;
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, DimPair in_dims, DimPair out_dims, ChannelMode mode)
    : kraus_(std::move(kraus)), in_dims_(in_dims), out_dims_(out_dims), mode_(mode) {
  if (kraus_.empty()) throw ParameterError("channel needs at least one Kraus operator");
  const int din = in_dims_.total();
  const int dout = out_dims_.total();
  ComplexMatrix s = ComplexMatrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) {
      throw DimensionMismatch("Kraus operator is " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                              ", expected " + std::to_string(dout) + "x" + std::to_string(din));
    }
    require_finite(k, "Kraus operator");
    s += k.adjoint() * k;
  }
  const HermitianOperator gram(s);
  defect_ = operator_norm(gram - HermitianOperator::identity(din));
  if (mode_ == ChannelMode::Cptp && defect_ > 1e-9) {
    throw ParameterError("Kraus set is not trace preserving, defect " + std::to_string(defect_));
  }
  if (mode_ == ChannelMode::TraceNonIncreasing && lambda_max(gram) > 1.0 + 1e-9) {
    throw ParameterError("Kraus set increases trace");
  }
}

KrausChannel KrausChannel::identity(DimPair dims) {
  return KrausChannel({ComplexMatrix::Identity(dims.total(), dims.total())}, dims, dims);
}

KrausChannel KrausChannel::full_dephasing(int dim) {
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
    k(i, i) = 1.0;
    ks.push_back(std::move(k));
  }
  return KrausChannel(std::move(ks), DimPair{dim, 1}, DimPair{dim, 1});
}

KrausChannel KrausChannel::partial_trace(DimPair dims, Subsystem traced) {
  std::vector<ComplexMatrix> ks;
  const int kept = traced == Subsystem::B ? dims.a : dims.b;
  const int gone = traced == Subsystem::B ? dims.b : dims.a;
  for (int j = 0; j < gone; ++j) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, gone);
    bra(0, j) = 1.0;
    const ComplexMatrix id = ComplexMatrix::Identity(kept, kept);
    ks.push_back(traced == Subsystem::B ? tensor(id, bra) : tensor(bra, id));
  }
  return KrausChannel(std::move(ks), dims, DimPair{kept, 1});
}

KrausChannel KrausChannel::conjugation(const ComplexMatrix& k, DimPair dims) {
  return KrausChannel({k}, dims, dims, ChannelMode::TraceNonIncreasing);
}

KrausChannel KrausChannel::random_cptp(int in_dim, int out_dim, int num_kraus, Rng& rng) {
  if (num_kraus < 1 || out_dim * num_kraus < in_dim) {
    throw ParameterError("random channel needs out_dim * num_kraus >= in_dim");
  }
  // Kraus operators are the blocks of a random isometry in -> out (x) env.
  const ComplexMatrix u = random_unitary(out_dim * num_kraus, rng);
  std::vector<ComplexMatrix> ks;
  for (int j = 0; j < num_kraus; ++j) {
    ComplexMatrix k(out_dim, in_dim);
    for (int o = 0; o < out_dim; ++o) {
      for (int i = 0; i < in_dim; ++i) k(o, i) = u(o * num_kraus + j, i);
    }
    ks.push_back(std::move(k));
  }
  return KrausChannel(std::move(ks), DimPair{in_dim, 1}, DimPair{out_dim, 1});
}

HermitianOperator apply_channel(const KrausChannel& e, const HermitianOperator& x) {
  if (x.dim() != e.in_dims().total()) throw DimensionMismatch("channel input dimension mismatch");
  const int dout = e.out_dims().total();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (const auto& k : e.kraus_ops()) out += k * x.matrix() * k.adjoint();
  return HermitianOperator(out);
}

DensityOperator apply_channel(const KrausChannel& e, const DensityOperator& rho) {
  return DensityOperator(apply_channel(e, rho.op()), e.out_dims());
}

KrausChannel product_channel(const KrausChannel& ea, const KrausChannel& eb) {
  std::vector<ComplexMatrix> ks;
  ks.reserve(ea.kraus_ops().size() * eb.kraus_ops().size());
  for (const auto& ka : ea.kraus_ops()) {
    for (const auto& kb : eb.kraus_ops()) ks.push_back(tensor(ka, kb));
  }
  const ChannelMode mode = ea.mode() == ChannelMode::Cptp && eb.mode() == ChannelMode::Cptp
                               ? ChannelMode::Cptp
                               : ChannelMode::TraceNonIncreasing;
  return KrausChannel(std::move(ks), DimPair{ea.in_dims().total(), eb.in_dims().total()},
                      DimPair{ea.out_dims().total(), eb.out_dims().total()}, mode);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  const double s = std::sqrt(0.5);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      g(i, j) = Complex(s * re, s * im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  // Fixing the phases of R's diagonal makes the law Haar.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

DensityOperator random_density(DimPair dims, Rng& rng, StateKind kind, int k) {
  const int d = dims.total();
  if (d < 1) throw ParameterError("dimension must be positive");
  ComplexMatrix g;
  switch (kind) {
    case StateKind::GinibreMixed:
      g = ginibre(d, d, rng);
      break;
    case StateKind::HaarPure:
      g = ginibre(d, 1, rng);
      break;
    case StateKind::RankK:
      if (k < 1 || k > d) {
        throw ParameterError("rank " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
      }
      g = ginibre(d, k, rng);
      break;
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(HermitianOperator(m), dims);
}

DensityOperator random_density(DimPair dims, std::uint64_t seed, StateKind kind, int k) {
  Rng rng(seed);
  return random_density(dims, rng, kind, k);
}

DensityOperator iid_power(const DensityOperator& rho, int n) {
  if (n < 1) throw ParameterError("number of copies must be positive");
  const DimPair d = rho.dims();
  if (n * std::log2(static_cast<double>(d.total())) > 9.0 + 1e-12) {
    throw ParameterError("i.i.d. power guard: n * log2(dim) = " +
                         std::to_string(n * std::log2(static_cast<double>(d.total()))) + " exceeds 9");
  }
  if (n == 1) return rho;
  ComplexMatrix m = rho.matrix();
  for (int i = 1; i < n; ++i) m = tensor(m, rho.matrix());
  std::vector<int> dims;
  std::vector<int> perm;
  for (int i = 0; i < n; ++i) {
    dims.push_back(d.a);
    dims.push_back(d.b);
  }
  for (int i = 0; i < n; ++i) perm.push_back(2 * i);
  for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);
  int an = 1, bn = 1;
  for (int i = 0; i < n; ++i) {
    an *= d.a;
    bn *= d.b;
  }
  return DensityOperator(HermitianOperator(permute_subsystems(m, dims, perm)), DimPair{an, bn});
}

DensityOperator maximally_entangled(int d) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i) * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return DensityOperator(HermitianOperator::outer(v), DimPair{d, d});
}

DensityOperator maximally_mixed(int d) {
  return DensityOperator(HermitianOperator::identity(d) * (1.0 / d), DimPair{d, 1});
}

}  // namespace oneshot
