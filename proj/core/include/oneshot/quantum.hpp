#pragma once

#include <cstdint>
#include <vector>

#include "oneshot/linop.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

inline constexpr double kTraceTol = 1e-10;

enum class TraceClass { Normalized, Subnormalized };

// A positive semi-definite operator with 0 < tr <= 1, labelled with its
// bipartite structure (b == 1 for a single system).
class DensityOperator {
 public:
  // Classifies the trace; throws NotPsd / MalformedInput / DimensionMismatch.
  DensityOperator(HermitianOperator op, DimPair dims);
  explicit DensityOperator(HermitianOperator op);

  static DensityOperator normalized(HermitianOperator op, DimPair dims);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  DimPair dims() const { return dims_; }
  int dim() const { return op_.dim(); }
  TraceClass trace_class() const { return class_; }
  double trace() const { return op_.trace(); }

  // rho_A (keep A) or rho_B (keep B), each with dims {d, 1}.
  DensityOperator marginal(Subsystem keep) const;
  DensityOperator normalize() const;
  DensityOperator scaled(double k) const;
  // The same operator on H_B (x) H_A.
  DensityOperator swapped() const;
  // Forgets the bipartite structure.
  DensityOperator flattened() const { return DensityOperator(op_, DimPair{dim(), 1}); }

 private:
  HermitianOperator op_;
  DimPair dims_;
  TraceClass class_;
};

struct SchmidtData {
  RealVector coefficients;  // p_i = squared Schmidt coefficients, descending
  ComplexMatrix left;       // columns |a_i> on the system
  ComplexMatrix right;      // columns |b_i> on the ancilla
};

// |phi> on H_system (x) H_ancilla, stored row-major: index = s * ancilla_dim + r.
struct Purification {
  ComplexVector vector;
  int system_dim = 0;
  int ancilla_dim = 0;
  SchmidtData schmidt;

  double norm2() const { return vector.squaredNorm(); }
  HermitianOperator projector() const;
  HermitianOperator reduced_system() const;
  HermitianOperator reduced_ancilla() const;
};

// Schmidt decomposition of an arbitrary vector on H_left (x) H_right.
Purification schmidt_decompose(const ComplexVector& v, int left_dim, int right_dim,
                               double rank_tol = kDefaultRankTol);

// Canonical purification sum_i sqrt(p_i) |v_i>|i>; the ancilla dimension is
// max(rank(rho), min_ancilla) with unused ancilla levels left empty.
Purification purify(const DensityOperator& rho, int min_ancilla = 0);

enum class ChannelMode { Cptp, TraceNonIncreasing };

class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> kraus, DimPair in_dims, DimPair out_dims,
               ChannelMode mode = ChannelMode::Cptp);

  static KrausChannel identity(DimPair dims);
  // Measures in the computational basis and forgets the outcome.
  static KrausChannel full_dephasing(int dim);
  static KrausChannel partial_trace(DimPair dims, Subsystem traced);
  // Single-Kraus map X -> K X K^dagger; requires K^dagger K <= I.
  static KrausChannel conjugation(const ComplexMatrix& k, DimPair dims);
  static KrausChannel random_cptp(int in_dim, int out_dim, int num_kraus, Rng& rng);

  const std::vector<ComplexMatrix>& kraus_ops() const { return kraus_; }
  DimPair in_dims() const { return in_dims_; }
  DimPair out_dims() const { return out_dims_; }
  ChannelMode mode() const { return mode_; }
  // || sum K^dagger K - I ||_inf
  double completeness_defect() const { return defect_; }

 private:
  std::vector<ComplexMatrix> kraus_;
  DimPair in_dims_;
  DimPair out_dims_;
  ChannelMode mode_;
  double defect_ = 0.0;
};

HermitianOperator apply_channel(const KrausChannel& e, const HermitianOperator& x);
DensityOperator apply_channel(const KrausChannel& e, const DensityOperator& rho);
// E_A (x) E_B; in/out dims become (E_A total, E_B total).
KrausChannel product_channel(const KrausChannel& ea, const KrausChannel& eb);

enum class StateKind { GinibreMixed, HaarPure, RankK };

DensityOperator random_density(DimPair dims, Rng& rng, StateKind kind, int k = 0);
DensityOperator random_density(DimPair dims, std::uint64_t seed, StateKind kind, int k = 0);
ComplexMatrix random_unitary(int dim, Rng& rng);
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

// rho^{(x)n} reordered to A_1..A_n | B_1..B_n. Requires n * log2(dA*dB) <= 9.
DensityOperator iid_power(const DensityOperator& rho, int n);

// (|00> + |11> + ...)/sqrt(d) as a state on d x d.
DensityOperator maximally_entangled(int d);
DensityOperator maximally_mixed(int d);

}  // namespace oneshot
