#pragma once

// Dense complex linear algebra used throughout the toolkit: Hermitian
// eigenstructure, functional calculus, norms, Kronecker products and partial
// traces. Operators are small (dimension <= ~256) and dense.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oneshot {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Eigenvalues below rank_tol * lambda_max count as kernel.
inline constexpr double kDefaultRankTol = 1e-10;
// Relative asymmetry accepted (and symmetrized away) at construction.
inline constexpr double kHermiticityTol = 1e-10;

struct DimPair {
  int a = 1;
  int b = 1;

  int total() const { return a * b; }
  DimPair swapped() const { return {b, a}; }
  friend bool operator==(const DimPair&, const DimPair&) = default;
};

enum class Subsystem { A, B };

// Throws MalformedInput on NaN/Inf.
void require_finite(const ComplexMatrix& m, const char* what = "matrix");

// A square matrix that is Hermitian up to kHermiticityTol * max(1, ||M||_inf).
// The stored form is exactly (M + M^dagger) / 2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(std::span<const double> entries);
  static HermitianOperator projector(const ComplexVector& v);  // |v><v| / <v|v>
  static HermitianOperator outer(const ComplexVector& v);      // |v><v|

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

 private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns; largest-magnitude entry real positive
};

EigenDecomposition eig_hermitian(const HermitianOperator& m);

double lambda_max(const HermitianOperator& m);
double lambda_min(const HermitianOperator& m);

// Largest singular value.
double operator_norm(const ComplexMatrix& m);
// max |eigenvalue|.
double operator_norm(const HermitianOperator& m);
// Sum of singular values.
double trace_norm(const ComplexMatrix& m);
double trace_norm(const HermitianOperator& m);

// True when every eigenvalue is >= -tol * max(||M||_inf, tiny).
bool is_psd(const HermitianOperator& m, double tol = kDefaultRankTol);
// Throws NotPsd naming the offending eigenvalue.
void require_psd(const HermitianOperator& m, double tol = kDefaultRankTol, const char* what = "operator");

// Applies f to the eigenvalues.
HermitianOperator spectral_map(const HermitianOperator& m, const std::function<double(double)>& f);

// Moore-Penrose inverse of a PSD operator; eigenvalues below rank_tol*lambda_max
// are treated as kernel.
HermitianOperator generalized_inverse(const HermitianOperator& m, double rank_tol = kDefaultRankTol);
HermitianOperator matrix_sqrt(const HermitianOperator& m, double rank_tol = kDefaultRankTol);
// Generalized inverse of the square root.
HermitianOperator inv_sqrt(const HermitianOperator& m, double rank_tol = kDefaultRankTol);
HermitianOperator support_projector(const HermitianOperator& m, double rank_tol = kDefaultRankTol);
int rank(const HermitianOperator& m, double rank_tol = kDefaultRankTol);
// Orthonormal basis (columns) of the support, ordered by ascending eigenvalue.
ComplexMatrix support_basis(const HermitianOperator& m, double rank_tol = kDefaultRankTol);

// Jordan decomposition M = plus - minus with orthogonal supports. Eigenvalues in
// the band |lambda| <= rank_tol * ||M||_inf go to `plus`.
struct JordanParts {
  HermitianOperator plus;
  HermitianOperator minus;
};
JordanParts jordan_decomposition(const HermitianOperator& m, double rank_tol = kDefaultRankTol);

// X M X^dagger.
HermitianOperator conjugate(const ComplexMatrix& x, const HermitianOperator& m);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

// Traces out `traced` from an operator on H_A (x) H_B.
ComplexMatrix partial_trace(const ComplexMatrix& m, DimPair dims, Subsystem traced);
HermitianOperator partial_trace(const HermitianOperator& m, DimPair dims, Subsystem traced);

// Reorders tensor factors: output factor k is input factor perm[k].
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims, std::span<const int> perm);
ComplexVector permute_subsystems(const ComplexVector& v, std::span<const int> dims, std::span<const int> perm);
HermitianOperator swap_subsystems(const HermitianOperator& m, DimPair dims);

}  // namespace oneshot
