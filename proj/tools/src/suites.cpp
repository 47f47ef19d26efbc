#include "oneshot_tools/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "oneshot/distance.hpp"
#include "oneshot/entropy.hpp"
#include "oneshot/error.hpp"
#include "oneshot_tools/state_io.hpp"

namespace oneshot::tools {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// One assertion "value <= bound" with its own tolerance.
struct Bound {
  double value;
  double bound;
  double tol;
};

struct Outcome {
  Verdict verdict = Verdict::Holds;
  double slack = kInf;
  nlohmann::json instance = nlohmann::json::object();
  nlohmann::json detail = nlohmann::json::object();
};

Outcome from_bounds(std::initializer_list<Bound> bounds) {
  Outcome o;
  for (const Bound& b : bounds) {
    const double s = b.bound - b.value;
    o.slack = std::min(o.slack, s);
    if (!(s >= -b.tol)) o.verdict = Verdict::Violated;
  }
  return o;
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

// ----- random objects -----------------------------------------------------

DensityOperator random_state(Rng& rng, int d, bool allow_subnormalized) {
  DensityOperator rho = random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed);
  if (allow_subnormalized && rng.uniform() < 0.5) rho = rho.scaled(0.3 + 0.7 * rng.uniform());
  return rho;
}

HermitianOperator random_projector(Rng& rng, const ComplexMatrix& basis, int min_rank) {
  const int r = static_cast<int>(basis.cols());
  const int k = min_rank + static_cast<int>(rng.below(static_cast<std::uint64_t>(r - min_rank + 1)));
  const ComplexMatrix u = random_unitary(r, rng);
  const ComplexMatrix cols = basis * u.leftCols(k);
  return HermitianOperator(ComplexMatrix(cols * cols.adjoint()));
}

HermitianOperator random_projector(Rng& rng, int d) {
  return random_projector(rng, ComplexMatrix(ComplexMatrix::Identity(d, d)), 1);
}

// 0 <= Pi <= I with eigenvalues uniform in (0, 1].
HermitianOperator random_contraction(Rng& rng, int d) {
  const ComplexMatrix u = random_unitary(d, rng);
  RealVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform_open_zero();
  return HermitianOperator(ComplexMatrix(u * v.cast<Complex>().asDiagonal() * u.adjoint()));
}

HermitianOperator random_psd(Rng& rng, int d, int rank) {
  const ComplexMatrix g = ginibre(d, rank, rng);
  return HermitianOperator(ComplexMatrix(g * g.adjoint()));
}

// Output dimension 2..4 with enough Kraus operators for an isometry.
KrausChannel random_channel(Rng& rng, int d) {
  const int dout = 2 + static_cast<int>(rng.below(3));
  const int nk = (d + dout - 1) / dout + static_cast<int>(rng.below(2));
  return KrausChannel::random_cptp(d, dout, nk, rng);
}

DensityOperator conjugated(const HermitianOperator& pi, const DensityOperator& rho) {
  return DensityOperator(conjugate(pi.matrix(), rho.op()), rho.dims());
}

nlohmann::json op_json(const HermitianOperator& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.matrix().rows(); ++r) {
    for (Eigen::Index c = 0; c < m.matrix().cols(); ++c) a.push_back({m.matrix()(r, c).real(), m.matrix()(r, c).imag()});
  }
  return a;
}

// ----- invariants on single systems --------------------------------------

using SingleFn = std::function<Outcome(Rng&, int)>;

Outcome metric_axioms(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true), b = random_state(rng, d, true), c = random_state(rng, d, true);
  const double ab = purified_distance(a, b), ba = purified_distance(b, a);
  const double bc = purified_distance(b, c), ac = purified_distance(a, c);
  Outcome o = from_bounds({{std::abs(ab - ba), 0.0, 0.0}, {ac, ab + bc, 1e-9}, {purified_distance(a, a), 0.0, 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}, {"tau", state_to_json(c)}};
  return o;
}

Outcome sandwich(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true), b = random_state(rng, d, true);
  const double dist = trace_distance_generalized(a, b), p = purified_distance(a, b);
  Outcome o = from_bounds({{dist, p, 1e-9}, {p, std::sqrt(2.0 * dist), 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}};
  return o;
}

Outcome monotonicity(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true), b = random_state(rng, d, true);
  const double before = purified_distance(a, b);
  double after = 0.0;
  const bool channel = rng.uniform() < 0.5;
  nlohmann::json map;
  if (channel) {
    const KrausChannel e = random_channel(rng, d);
    after = purified_distance(apply_channel(e, a), apply_channel(e, b));
  } else {
    const HermitianOperator pi = random_projector(rng, d);
    after = purified_distance(conjugated(pi, a), conjugated(pi, b));
    map = op_json(pi);
  }
  Outcome o = from_bounds({{after, before, 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}};
  if (!channel) o.instance["pi"] = map;
  o.detail = {{"map", channel ? "channel" : "projector"}, {"before", before}, {"after", after}};
  return o;
}

Outcome projector_cut(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true);
  const HermitianOperator pi = random_projector(rng, d);
  const double t = a.trace() - (pi.matrix() * a.matrix()).trace().real();
  const double p = purified_distance(a, conjugated(pi, a));
  Outcome o = from_bounds({{p, std::sqrt(std::max(0.0, 2.0 * t - t * t)), 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"pi", op_json(pi)}};
  return o;
}

Outcome contraction(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true);
  const HermitianOperator pi = random_contraction(rng, d);
  const double t = a.trace();
  const double t2 = (pi.matrix() * pi.matrix() * a.matrix()).trace().real();
  const double p = purified_distance(a, conjugated(pi, a));
  Outcome o = from_bounds({{p, std::sqrt(std::max(0.0, t * t - t2 * t2)) / std::sqrt(t), 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"pi", op_json(pi)}};
  return o;
}

Outcome scaling(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true);
  Outcome o;
  for (int i = 1; i <= 10; ++i) {
    const double k = 0.1 * i;
    const Outcome part = from_bounds({{purified_distance(a, a.scaled(k)), std::sqrt(std::max(0.0, 1.0 - k * k)), 1e-9}});
    o.slack = std::min(o.slack, part.slack);
    if (part.verdict == Verdict::Violated) o.verdict = Verdict::Violated;
  }
  o.instance = {{"rho", state_to_json(a)}};
  return o;
}

Outcome fidelity_growth(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true), b = random_state(rng, d, true);
  const HermitianOperator omega = a.op() + random_psd(rng, d, 1 + static_cast<int>(rng.below(d))) * (0.5 * rng.uniform());
  Outcome o = from_bounds({{root_overlap(a.op(), b.op()), root_overlap(omega, b.op()), 1e-9}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}, {"omega", op_json(omega)}};
  return o;
}

Outcome projector_fidelity(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, true), b = random_state(rng, d, true);
  const HermitianOperator pi = random_projector(rng, d);
  const HermitianOperator pa = conjugate(pi.matrix(), a.op()), pb = conjugate(pi.matrix(), b.op());
  const double x = root_overlap(pa, b.op()), y = root_overlap(a.op(), pb), z = root_overlap(pa, pb);
  Outcome o = from_bounds({{std::abs(x - y), 0.0, 1e-8}, {std::abs(y - z), 0.0, 1e-8}, {std::abs(x - z), 0.0, 1e-8}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}, {"pi", op_json(pi)}};
  return o;
}

Outcome renormalization(Rng& rng, int d) {
  const DensityOperator sub = random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed).scaled(0.3 + 0.7 * rng.uniform());
  const DensityOperator a = random_state(rng, d, false);
  Outcome o = from_bounds({{purified_distance(sub.normalize(), a), purified_distance(sub, a), 1e-9}});
  o.instance = {{"rho_prime", state_to_json(sub)}, {"rho", state_to_json(a)}};
  return o;
}

Outcome opnorm_domination(Rng& rng, int d) {
  const int k = 1 + static_cast<int>(rng.below(d));
  const HermitianOperator b = random_psd(rng, d, k);
  const ComplexMatrix v = support_basis(b);
  const HermitianOperator m = random_psd(rng, static_cast<int>(v.cols()), 1 + static_cast<int>(rng.below(v.cols())));
  const HermitianOperator a = conjugate(v, m);
  const HermitianOperator c = b + random_psd(rng, d, 1 + static_cast<int>(rng.below(d)));
  const double lhs = lambda_max(conjugate(inv_sqrt(c).matrix(), a));
  const double rhs = lambda_max(conjugate(inv_sqrt(b).matrix(), a));
  Outcome o = from_bounds({{lhs, rhs, 1e-8 * std::max(1.0, rhs)}});
  o.instance = {{"a", op_json(a)}, {"b", op_json(b)}, {"c", op_json(c)}};
  return o;
}

Outcome dual_projector_identity(Rng& rng, int d) {
  const int r = 1 + static_cast<int>(rng.below(d));
  const DensityOperator rho = r == d ? random_density(DimPair{d, 1}, rng, StateKind::GinibreMixed)
                                     : random_density(DimPair{d, 1}, rng, StateKind::RankK, r);
  const Purification phi = purify(rho, 2 + static_cast<int>(rng.below(d)));
  const HermitianOperator pi_a = random_projector(rng, phi.schmidt.left, 1);
  const HermitianOperator pi_b = dual_projector(phi, pi_a);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const ComplexMatrix m = Eigen::Map<const RowMajor>(phi.vector.data(), phi.system_dim, phi.ancilla_dim);
  const ComplexMatrix lhs = pi_a.matrix() * m * inv_sqrt(phi.reduced_ancilla()).matrix().transpose();
  const ComplexMatrix rhs = inv_sqrt(phi.reduced_system()).matrix() * m * pi_b.matrix().transpose();
  const double residual = (lhs - rhs).norm();
  const double idem = operator_norm(ComplexMatrix(pi_b.matrix() * pi_b.matrix() - pi_b.matrix()));
  Outcome o = from_bounds({{residual, 0.0, 1e-7}, {idem, 0.0, 1e-9}});
  o.instance = {{"rho", state_to_json(rho)}, {"pi_a", op_json(pi_a)}};
  o.detail = {{"residual", residual}};
  return o;
}

Outcome dmax_data_processing(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, false), b = random_state(rng, d, false);
  const KrausChannel e = random_channel(rng, d);
  const double before = dmax(a, b).value;
  const double after = dmax(apply_channel(e, a.op()), apply_channel(e, b.op())).value;
  Outcome o = from_bounds({{after, before, 1e-8}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}};
  return o;
}

Outcome dmax_contraction(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, false), b = random_state(rng, d, false);
  const HermitianOperator pi = random_contraction(rng, d);
  const double before = dmax(a, b).value;
  const double after = dmax(conjugate(pi.matrix(), a.op()), conjugate(pi.matrix(), b.op())).value;
  Outcome o = from_bounds({{after, before, 1e-8}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}, {"pi", op_json(pi)}};
  return o;
}

Outcome dmin_below_dmax(Rng& rng, int d) {
  const DensityOperator a = random_state(rng, d, false), b = random_state(rng, d, false);
  Outcome o = from_bounds({{dmin(a, b).value, dmax(a, b).value, 1e-8}});
  o.instance = {{"rho", state_to_json(a)}, {"sigma", state_to_json(b)}};
  return o;
}

// ----- invariants on bipartite states ------------------------------------

// A cached analysis per (dims, trial) slot so suites run together share the
// expensive optimizations.
class StatePool {
 public:
  StatePool(std::uint64_t seed, const Imax3Config& cfg) : seed_(seed), cfg_(cfg) {}

  StateAnalysis& get(DimPair d, int trial) {
    const auto key = std::make_tuple(d.a, d.b, trial);
    auto it = pool_.find(key);
    if (it == pool_.end()) {
      Rng rng = Rng(seed_).derive(fnv1a("state " + dims_to_string(d))).derive(static_cast<std::uint64_t>(trial));
      // Every fifth state is rank two so rank-deficient inputs get exercised.
      const DensityOperator rho = trial % 5 == 4 ? random_density(d, rng, StateKind::RankK, 2)
                                                 : random_density(d, rng, StateKind::GinibreMixed);
      it = pool_.emplace(key, std::make_unique<StateAnalysis>(rho, cfg_)).first;
    }
    return *it->second;
  }

 private:
  std::uint64_t seed_;
  Imax3Config cfg_;
  std::map<std::tuple<int, int, int>, std::unique_ptr<StateAnalysis>> pool_;
};

using StateFn = std::function<Outcome(StateAnalysis&, double eps, double eps_prime, std::uint64_t seed)>;

Outcome duality(StateAnalysis& st, double, double, std::uint64_t) {
  const EntropyValue& hmin = st.hmin_a_given_b();
  const EntropyValue hmax = hmax_cond(complementary_state(st.rho()), st.config().solver);
  // Hmin(A|B) and -Hmax(A|C) must have overlapping certified intervals.
  Outcome o = from_bounds({{hmin.lower, -hmax.lower, 1e-6}, {-hmax.upper, hmin.upper, 1e-6}});
  o.detail = {{"hmin_cond", {hmin.lower, hmin.upper}}, {"minus_hmax_cond", {-hmax.upper, -hmax.lower}}};
  return o;
}

Outcome optimizer_normalization(StateAnalysis& st, double, double, std::uint64_t) {
  const EntropyValue& i2 = st.i2();
  const HermitianOperator& x = i2.certified->primal_witness;
  const DensityOperator sigma = imax2_optimizer(i2);
  const double d = dmax(st.rho().op(), tensor(st.rho().marginal(Subsystem::A).op(), sigma.op())).value;
  Outcome o = from_bounds({{std::abs(d - std::log2(x.trace())), 0.0, 1e-7}});
  o.detail = {{"dmax", d}, {"log2_trace", std::log2(x.trace())}};
  return o;
}

Outcome from_report(const InequalityReport& r) {
  Outcome o;
  o.verdict = r.verdict;
  o.slack = r.slack;
  o.detail = report_to_json(r);
  return o;
}

Outcome imax_ordering(StateAnalysis& st, double, double, std::uint64_t) {
  const Interval i1{st.i1().value, st.i1().value};
  const Interval i2{st.i2().lower, st.i2().upper};
  const Interval i3{st.i3().value.lower, st.i3().value.upper};
  const Verdict v32 = classify(i3, i2, {});
  const Verdict v21 = classify(i2, i1, {});
  Outcome o;
  o.slack = std::min(i2.lower - i3.upper, i1.lower - i2.upper);
  if (v32 == Verdict::Violated || v21 == Verdict::Violated) {
    o.verdict = Verdict::Violated;
  } else if (v32 == Verdict::Inconclusive || v21 == Verdict::Inconclusive) {
    o.verdict = Verdict::Inconclusive;
  }
  o.detail = {{"imax1", st.i1().value}, {"imax2", {i2.lower, i2.upper}}, {"imax3", {i3.lower, i3.upper}}};
  return o;
}

StateFn theorem(const std::string& name, bool with_eps) {
  return [name, with_eps](StateAnalysis& st, double eps, double eps_prime, std::uint64_t seed) {
    return from_report(check_theorem(name, st, with_eps ? eps : 0.0, with_eps ? eps_prime : 0.0, seed));
  };
}

// ----- suite layout ------------------------------------------------------

struct Task {
  std::string name;
  SingleFn single;   // set for single-system invariants
  StateFn on_state;  // set for bipartite invariants
  bool per_eps = false;
};

std::vector<Task> tasks_for(const std::string& suite) {
  const std::vector<Task> metric{{"metric_axioms", metric_axioms, {}, false}, {"trace_purified_sandwich", sandwich, {}, false}};
  std::vector<Task> appendix_a = metric;
  appendix_a.insert(appendix_a.end(), {{"monotonicity", monotonicity, {}, false},
                                       {"projector_cut", projector_cut, {}, false},
                                       {"contraction_bound", contraction, {}, false},
                                       {"scaling", scaling, {}, false},
                                       {"fidelity_growth", fidelity_growth, {}, false},
                                       {"projector_fidelity_identity", projector_fidelity, {}, false},
                                       {"renormalization", renormalization, {}, false}});
  const std::vector<Task> appendix_b{{"operator_norm_domination", opnorm_domination, {}, false},
                                     {"dual_projector_identity", dual_projector_identity, {}, false},
                                     {"dmax_data_processing", dmax_data_processing, {}, false},
                                     {"dmax_contraction", dmax_contraction, {}, false},
                                     {"dmin_below_dmax", dmin_below_dmax, {}, false},
                                     {"hmin_hmax_duality", {}, duality, false}};
  const std::vector<Task> normalization{{"optimizer_normalization", {}, optimizer_normalization, false},
                                        {"imax_ordering", {}, imax_ordering, false},
                                        {"dim_bound", {}, theorem("dim_bound", false), false}};
  const auto one = [](const std::string& task, bool per_eps) {
    return std::vector<Task>{{task, {}, theorem(task, per_eps), per_eps}};
  };
  if (suite == "metric") return metric;
  if (suite == "lemmas-appendix-a") return appendix_a;
  if (suite == "lemmas-appendix-b") return appendix_b;
  if (suite == "normalization") return normalization;
  if (suite == "thm1") return one("thm1", true);
  if (suite == "thm2") return one("thm2", true);
  if (suite == "cor3") return one("cor3", true);
  if (suite == "cor4") return one("cor4", true);
  if (suite == "chain-upper") return one("chain_upper", true);
  if (suite == "chain-lower") {
    std::vector<Task> t = one("lemma_b13", false);
    t.push_back({"chain_lower", {}, theorem("chain_lower", true), true});
    return t;
  }
  if (suite == "dataproc") {
    std::vector<Task> t = one("dataproc_imax", false);
    t.push_back({"symmetry_i3", {}, theorem("symmetry_i3", false), false});
    return t;
  }
  throw ParameterError("unknown suite '" + suite + "'");
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void record(Tally& t, const Outcome& o) {
  switch (o.verdict) {
    case Verdict::Holds: ++t.holds; break;
    case Verdict::Violated: ++t.violated; break;
    case Verdict::Inconclusive: ++t.inconclusive; break;
  }
  if (!std::isnan(o.slack)) {
    t.min_slack = t.any_slack ? std::min(t.min_slack, o.slack) : o.slack;
    t.any_slack = true;
  }
}

void record_error(Tally& t, const std::exception& e) {
  ++t.errors;
  if (t.error_samples.size() < 3) t.error_samples.push_back(e.what());
}

class Runner {
 public:
  explicit Runner(const SuiteOptions& opt) : opt_(opt), pool_(opt.seed, opt.imax3) {
    if (opt.trials < 1) throw ParameterError("--trials must be at least 1");
    eps_ = opt.eps.empty() ? std::vector<double>{0.1, 0.3} : opt.eps;
    bipartite_ = opt.dims.empty() ? std::vector<DimPair>{{2, 2}, {3, 2}, {3, 3}} : opt.dims;
  }

  SuiteResult run(const std::vector<std::string>& suites) {
    for (const std::string& s : suites) {
      for (const Task& t : tasks_for(s)) {
        if (t.single) {
          run_single(t);
        } else {
          run_bipartite(t);
        }
        if (result_.counterexample) return finish();
      }
    }
    return finish();
  }

 private:
  SuiteResult finish() {
    for (const Tally& t : result_.tallies) {
      result_.holds += t.holds;
      result_.violated += t.violated;
      result_.inconclusive += t.inconclusive;
      result_.errors += t.errors;
    }
    return std::move(result_);
  }

  void run_single(const Task& task) {
    Tally tally;
    tally.invariant = task.name;
    const bool fixed = !opt_.dims.empty();
    tally.dims = fixed ? dims_to_string(opt_.dims.front()) : "random 2..6";
    const auto t0 = std::chrono::steady_clock::now();
    const Rng base = Rng(opt_.seed).derive(fnv1a(task.name));
    for (int trial = 0; trial < opt_.trials; ++trial) {
      Rng rng = base.derive(static_cast<std::uint64_t>(trial));
      const int d = fixed ? opt_.dims.front().total() : 2 + static_cast<int>(rng.below(5));
      ++tally.trials;
      try {
        const Outcome o = task.single(rng, d);
        record(tally, o);
        if (o.verdict == Verdict::Violated) {
          counterexample(task.name, trial, o, nlohmann::json{{"dim", d}});
          break;
        }
      } catch (const std::exception& e) {
        record_error(tally, e);
      }
    }
    tally.seconds = elapsed_since(t0);
    result_.tallies.push_back(std::move(tally));
  }

  void run_bipartite(const Task& task) {
    const std::vector<double> eps_list = task.per_eps ? eps_ : std::vector<double>{0.0};
    for (const DimPair d : bipartite_) {
      std::vector<Tally> tallies(eps_list.size());
      for (std::size_t k = 0; k < eps_list.size(); ++k) {
        tallies[k].invariant = task.name;
        tallies[k].dims = dims_to_string(d);
        if (task.per_eps) {
          tallies[k].eps = eps_list[k];
          tallies[k].eps_prime = opt_.eps_prime;
        }
      }
      const Rng base = Rng(opt_.seed).derive(fnv1a(task.name + " " + dims_to_string(d)));
      for (int trial = 0; trial < opt_.trials && !result_.counterexample; ++trial) {
        StateAnalysis* st = nullptr;
        for (std::size_t k = 0; k < eps_list.size(); ++k) {
          const auto t0 = std::chrono::steady_clock::now();
          ++tallies[k].trials;
          try {
            if (!st) st = &pool_.get(d, trial);
            const std::uint64_t trial_seed = base.derive(static_cast<std::uint64_t>(trial)).seed();
            const Outcome o = task.on_state(*st, eps_list[k], opt_.eps_prime, trial_seed);
            record(tallies[k], o);
            if (o.verdict == Verdict::Violated) {
              Outcome with_state = o;
              with_state.instance = {{"rho", state_to_json(st->rho())}};
              counterexample(task.name, trial, with_state,
                             nlohmann::json{{"dims", dims_to_string(d)}, {"eps", eps_list[k]}, {"eps_prime", opt_.eps_prime},
                                            {"channel_seed", trial_seed}});
              tallies[k].seconds += elapsed_since(t0);
              break;
            }
          } catch (const std::exception& e) {
            record_error(tallies[k], e);
          }
          tallies[k].seconds += elapsed_since(t0);
        }
      }
      for (Tally& t : tallies) result_.tallies.push_back(std::move(t));
      if (result_.counterexample) return;
    }
  }

  void counterexample(const std::string& name, int trial, const Outcome& o, nlohmann::json where) {
    nlohmann::json j;
    j["invariant"] = name;
    j["seed"] = opt_.seed;
    j["trial"] = trial;
    j["instance"] = where;
    j["states"] = o.instance;
    j["detail"] = o.detail;
    j["slack"] = finite_or_null(o.slack);
    result_.counterexample = j;
    if (!opt_.counterexample_dir.empty()) {
      const std::string path = opt_.counterexample_dir + "/counterexample-" + name + "-" + std::to_string(trial) + ".json";
      std::ofstream out(path);
      if (out) {
        out << j.dump(2) << '\n';
        result_.counterexample_path = path;
      }
    }
  }

  const SuiteOptions& opt_;
  StatePool pool_;
  std::vector<double> eps_;
  std::vector<DimPair> bipartite_;
  SuiteResult result_;
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"metric", "lemmas-appendix-a", "lemmas-appendix-b", "normalization",
                                              "thm1",   "thm2",              "cor3",              "cor4",
                                              "chain-upper", "chain-lower", "dataproc", "all"};
  return names;
}

SuiteResult run_suite(const SuiteOptions& opt) {
  std::vector<std::string> suites;
  if (opt.suite == "all") {
    // metric is a subset of lemmas-appendix-a.
    suites = {"lemmas-appendix-a", "lemmas-appendix-b", "normalization", "thm1",       "thm2",
              "cor3",              "cor4",              "chain-upper",   "chain-lower", "dataproc"};
  } else {
    std::stringstream ss(opt.suite);
    std::string name;
    while (std::getline(ss, name, ',')) {
      tasks_for(name);
      suites.push_back(name);
    }
  }
  Runner runner(opt);
  return runner.run(suites);
}

nlohmann::json tally_to_json(const Tally& t, bool timing) {
  nlohmann::json j;
  j["invariant"] = t.invariant;
  j["dims"] = t.dims;
  if (t.eps) j["eps"] = *t.eps;
  if (t.eps_prime) j["eps_prime"] = *t.eps_prime;
  j["trials"] = t.trials;
  j["holds"] = t.holds;
  j["violated"] = t.violated;
  j["inconclusive"] = t.inconclusive;
  j["errors"] = t.errors;
  j["min_slack"] = t.any_slack ? finite_or_null(t.min_slack) : nlohmann::json(nullptr);
  if (!t.error_samples.empty()) j["error_samples"] = t.error_samples;
  if (timing) j["seconds"] = t.seconds;
  return j;
}

nlohmann::json report_to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["dims"] = {r.dims.a, r.dims.b};
  j["seed"] = r.seed;
  j["eps"] = r.eps;
  j["eps_prime"] = r.eps_prime;
  j["left"] = {finite_or_null(r.left.lower), finite_or_null(r.left.upper)};
  j["right"] = {finite_or_null(r.right.lower), finite_or_null(r.right.upper)};
  j["slack"] = finite_or_null(r.slack);
  j["verdict"] = to_string(r.verdict);
  nlohmann::json post = nlohmann::json::array();
  for (const Postcondition& p : r.postconditions) {
    post.push_back({{"name", p.name}, {"value", finite_or_null(p.value)}, {"bound", finite_or_null(p.bound)}, {"ok", p.ok}});
  }
  j["postconditions"] = post;
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [k, v] : r.quantities) q[k] = finite_or_null(v);
  j["quantities"] = q;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::vector<DimPair> parse_dims(const std::string& text) {
  std::vector<DimPair> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw ParameterError("dims '" + item + "' must look like 2x3");
    try {
      std::size_t used_a = 0, used_b = 0;
      const int a = std::stoi(item.substr(0, x), &used_a);
      const int b = std::stoi(item.substr(x + 1), &used_b);
      if (used_a != x || used_b != item.size() - x - 1 || a < 1 || b < 1 || a > 64 || b > 64) throw std::invalid_argument(item);
      out.push_back({a, b});
    } catch (const std::logic_error&) {
      throw ParameterError("dims '" + item + "' must look like 2x3 with factors in 1..64");
    }
  }
  if (out.empty()) throw ParameterError("empty --dims");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError("'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ParameterError("empty number list");
  return out;
}

std::string dims_to_string(DimPair d) { return std::to_string(d.a) + "x" + std::to_string(d.b); }

}  // namespace oneshot::tools
