#pragma once

// Max-information in its three variants, the smoothing states used to relate
// them, and checkers that evaluate each inequality on one instance with
// certified intervals.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/conic.hpp"
#include "oneshot/entropy.hpp"
#include "oneshot/quantum.hpp"

namespace oneshot {

// Correction terms, in bits.
namespace bounds {
double f(double eps, double eps_prime);
double g(double eps);
double c(double eps, double trace);
double l(double eps);
}  // namespace bounds

EntropyValue imax1(const DensityOperator& rho);
// log2 of min{tr X : rho_A (x) X >= rho}; value is the upper end.
EntropyValue imax2(const DensityOperator& rho, const SolverConfig& cfg = {});
// sigma_B = X / tr X from the primal witness of imax2.
DensityOperator imax2_optimizer(const EntropyValue& v);

struct Imax3Config {
  int restarts = 8;
  double tol = 1e-8;  // change of the objective (bits) that ends alternation
  int max_rounds = 200;
  std::uint64_t seed = 0x243F6A8885A308D3ULL;
  double bnb_target = 0.05;  // bits between certified lower and upper
  int bnb_budget = 400;      // conic solves spent on the certified lower bound
  SolverConfig solver;
};

struct Imax3Result {
  // value = upper = Dmax(rho || sigma_a (x) sigma_b) of the best pair;
  // lower is certified.
  EntropyValue value;
  DensityOperator sigma_a;
  DensityOperator sigma_b;
  double heuristic_lower = 0.0;
  double restart_spread = 0.0;
  int rounds = 0;
  std::string lower_method;
};

Imax3Result imax3_detailed(const DensityOperator& rho, const Imax3Config& cfg = {});
EntropyValue imax3(const DensityOperator& rho, const Imax3Config& cfg = {});

// Certified lower bound on the third variant without running alternation;
// `upper_hint` (bits) prunes the search.
double imax3_certified_lower(const DensityOperator& rho, double upper_hint, const Imax3Config& cfg,
                             std::string* method = nullptr);

// Pi_B on the ancilla of phi with (Pi_A (x) rho_B^{-1/2})|phi> = (rho_A^{-1/2} (x) Pi_B)|phi>:
// the transpose of Pi_A in the Schmidt bases.
HermitianOperator dual_projector(const Purification& phi, const HermitianOperator& pi_a);

enum class ConstructionVariant { ClaimBcCut, ClaimBarDelta, ClaimAcCut, ClaimHat };
const char* to_string(ConstructionVariant v);

struct SmoothingConstruction {
  ConstructionVariant variant = ConstructionVariant::ClaimBarDelta;
  double eps = 0.0;
  DimPair dims;
  HermitianOperator gamma;          // Gamma on the cut system
  HermitianOperator cut;            // Pi_A (first theorem) or Pi_B (second)
  HermitianOperator dual_cut;       // Pi_BC or Pi_AC
  double cut_weight = 0.0;          // tr(Pi^perp rho) on the cut system
  double cut_gamma_norm = 0.0;      // || Pi Gamma Pi ||_inf
  double purified_cut_distance = 0.0;  // P(rho_ABC, tilde rho_ABC)
  HermitianOperator tilde;          // tilde rho_AB
  HermitianOperator delta_a;
  HermitianOperator delta_b;
  HermitianOperator delta_plus;
  HermitianOperator delta_minus;
  double k = 1.0;
  double n = 1.0;
  HermitianOperator output;         // bar rho (first theorem) or hat rho (second)

  DensityOperator output_state() const { return DensityOperator(output, dims); }
};

// bar rho = tilde rho_AB + Delta_A (x) sigma_B with tilde rho from the cut on
// the smallest eigenvalues of Gamma_A = rho_A^{-1/2} sigma_A rho_A^{-1/2}.
SmoothingConstruction smooth_state_thm1(const DensityOperator& rho, double eps, const DensityOperator& sigma_a,
                                        const DensityOperator& sigma_b);
// hat rho = n k (tilde rho_AB + rho_A (x) Delta_B + Delta_A^+ (x) rho_B).
SmoothingConstruction smooth_state_thm2(const DensityOperator& rho, double eps, const DensityOperator& sigma_b);

enum class Verdict { Holds, Violated, Inconclusive };
const char* to_string(Verdict v);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Postcondition {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool ok = true;
};

// "left <= right" evaluated on one instance.
struct InequalityReport {
  std::string name;
  DimPair dims;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double eps_prime = 0.0;
  Interval left;
  Interval right;
  double slack = 0.0;  // right.lower - left.upper
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Postcondition> postconditions;
  std::map<std::string, double> quantities;
  std::string note;
};

// Holds iff slack >= -1e-7; violated only when left.lower > right.upper + 1e-7
// or a postcondition of an exact construction fails.
Verdict classify(const Interval& left, const Interval& right, const std::vector<Postcondition>& post);

inline const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names{"thm1",      "thm2",          "cor3",         "cor4",
                                              "chain_upper", "chain_lower", "lemma_b13",    "dataproc_imax",
                                              "symmetry_i3", "dim_bound"};
  return names;
}

// Caches the expensive per-state quantities so several checks on one state
// share them.
class StateAnalysis {
 public:
  explicit StateAnalysis(DensityOperator rho, Imax3Config cfg = {});

  const DensityOperator& rho() const { return rho_; }
  const Imax3Config& config() const { return cfg_; }
  const EntropyValue& i1();
  const EntropyValue& i2();
  const EntropyValue& i2_swapped();
  const Imax3Result& i3();
  const EntropyValue& hmin_a_given_b();

 private:
  DensityOperator rho_;
  Imax3Config cfg_;
  std::optional<EntropyValue> i1_, i2_, i2s_, hcond_;
  std::optional<Imax3Result> i3_;
};

// seed feeds the random product channel of dataproc_imax.
InequalityReport check_theorem(const std::string& name, StateAnalysis& state, double eps, double eps_prime,
                               std::uint64_t seed = 0);
InequalityReport check_theorem(const std::string& name, const DensityOperator& rho, double eps, double eps_prime,
                               std::uint64_t seed = 0);

struct IidRow {
  int n = 0;
  double imax1_rate = 0.0;
  Interval imax2_rate;
  double mutual_information = 0.0;  // von Neumann, per copy
};

std::vector<IidRow> iid_scan(const DensityOperator& rho, int n_max, const SolverConfig& cfg = {});

// Von Neumann entropy in bits.
double von_neumann(const HermitianOperator& rho);

}  // namespace oneshot
