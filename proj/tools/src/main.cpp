// oneshot: compute one-shot entropies and max-information of state files, and
// run the randomized verification suites.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oneshot/distance.hpp"
#include "oneshot/entropy.hpp"
#include "oneshot/error.hpp"
#include "oneshot/maxinfo.hpp"
#include "oneshot_tools/state_io.hpp"
#include "oneshot_tools/suites.hpp"

using nlohmann::json;
using namespace oneshot;
using namespace oneshot::tools;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 1, kViolation = 2, kInternal = 3 };

struct Context {
  std::vector<std::string> argv;
  bool no_timestamp = false;
  std::string out;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

json report_header(const Context& ctx) {
  json r;
  r["tool"] = "oneshot";
  r["version"] = kVersion;
  r["command"] = ctx.argv;
  if (!ctx.no_timestamp) r["timestamp"] = utc_now();
  return r;
}

void emit(const Context& ctx, const std::string& text) {
  if (ctx.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(ctx.out);
  if (!f) throw ParameterError("cannot write report to '" + ctx.out + "'");
  f << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ----- compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string quantity;
  std::string state;
  std::string second;
  double eps = 0.0;
  double eps_prime = 0.0;
  double tol = 1e-7;
  std::string format = "json";
};

const std::vector<std::string>& quantities() {
  static const std::vector<std::string> q{"dmax", "dmin",  "hmin",  "hmax",        "hmin-cond",         "hmax-cond",
                                          "imax1", "imax2", "imax3", "smooth-hmin", "purified-distance", "fidelity"};
  return q;
}

bool needs_second(const std::string& q) {
  return q == "dmax" || q == "dmin" || q == "purified-distance" || q == "fidelity";
}

json value_item(const std::string& quantity, const EntropyValue& v) {
  json j;
  j["quantity"] = quantity;
  if (v.infinite) {
    j["value"] = "inf";
    j["lower"] = "inf";
    j["upper"] = "inf";
  } else {
    j["value"] = number(v.value);
    j["lower"] = number(v.lower);
    j["upper"] = number(v.upper);
  }
  if (v.certified) j["certificate"] = {{"gap", number(v.certified->gap())}, {"iterations", v.certified->iterations}};
  return j;
}

json compute_item(const ComputeArgs& a) {
  const DensityOperator rho = read_state(a.state).state;
  const bool smoothable = a.quantity == "imax1" || a.quantity == "imax2" || a.quantity == "imax3" || a.quantity == "smooth-hmin";
  if (a.eps != 0.0 && !smoothable) throw ParameterError("--eps does not apply to " + a.quantity);
  if (a.eps_prime != 0.0) throw ParameterError("--eps-prime applies to verify only");
  if (needs_second(a.quantity) && a.second.empty()) throw ParameterError(a.quantity + " needs a second state file");
  if (!needs_second(a.quantity) && !a.second.empty()) throw ParameterError(a.quantity + " takes a single state file");
  if (a.eps != 0.0) require_smoothing_radius(a.eps, rho.trace());

  SolverConfig cfg;
  cfg.tol = a.tol;
  const std::string& q = a.quantity;
  json item;
  if (needs_second(q)) {
    const DensityOperator sigma = read_state(a.second).state;
    if (q == "dmax") return value_item(q, dmax(rho, sigma));
    if (q == "dmin") return value_item(q, dmin(rho, sigma));
    const double v = q == "fidelity" ? fidelity(rho, sigma) : purified_distance(rho, sigma);
    return value_item(q, EntropyValue::exact(v));
  }
  if (q == "hmin") return value_item(q, hmin(rho));
  if (q == "hmax") return value_item(q, hmax(rho));
  if (q == "hmin-cond") return value_item(q, hmin_cond(rho, cfg));
  if (q == "hmax-cond") return value_item(q, hmax_cond(rho, cfg));
  if (q == "smooth-hmin") {
    const CertifiedValue c = smooth_hmin(rho, a.eps);
    // The feasible end is attained by a state in the ball.
    item = value_item(q, EntropyValue{c.lower, c.lower, c.upper, false, std::nullopt});
    item["eps"] = a.eps;
    return item;
  }
  if (q == "imax3") {
    Imax3Config c3;
    c3.solver = cfg;
    const Imax3Result r = imax3_detailed(rho, c3);
    item = value_item(q, r.value);
    item["restart_spread"] = number(r.restart_spread);
    item["lower_method"] = r.lower_method;
    if (a.eps > 0.0) {
      item["eps"] = a.eps;
      item["lower"] = number(std::log2(1.0 - a.eps * a.eps));
      item["note"] = "smoothed value bracketed by the unsmoothed upper end and log2(1 - eps^2)";
    }
    return item;
  }
  item = value_item(q, q == "imax1" ? imax1(rho) : imax2(rho, cfg));
  if (a.eps > 0.0) {
    item["eps"] = a.eps;
    item["lower"] = 0.0;
    item["note"] = "smoothed value bracketed by the unsmoothed upper end and 0";
  }
  return item;
}

int run_compute(const Context& ctx, const ComputeArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  json item = compute_item(a);
  if (!ctx.no_timestamp) item["seconds"] = seconds_since(t0);
  if (a.format == "csv") {
    const auto cell = [](const json& v) { return v.is_null() ? std::string("nan") : v.is_string() ? v.get<std::string>() : v.dump(); };
    std::ostringstream s;
    s << "quantity,value,lower,upper\n"
      << a.quantity << ',' << cell(item["value"]) << ',' << cell(item["lower"]) << ',' << cell(item["upper"]) << '\n';
    emit(ctx, s.str());
    return kOk;
  }
  json r = report_header(ctx);
  r["items"] = json::array({item});
  r["counts"] = {{"holds", 0}, {"violated", 0}, {"inconclusive", 0}, {"errors", 0}};
  emit(ctx, r.dump(2) + "\n");
  return kOk;
}

// ----- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  int trials = 200;
  std::uint64_t seed = 42;
  std::string dims;
  std::string eps;
  double eps_prime = 0.0;
  double tol = 1e-7;
};

int run_verify(const Context& ctx, const VerifyArgs& a) {
  SuiteOptions opt;
  opt.suite = a.suite;
  opt.trials = a.trials;
  opt.seed = a.seed;
  if (!a.dims.empty()) opt.dims = parse_dims(a.dims);
  if (!a.eps.empty()) opt.eps = parse_doubles(a.eps);
  for (const double e : opt.eps) {
    if (!(e >= 0.0 && e < 1.0)) throw SmoothingParameterError("eps must lie in [0, 1)");
  }
  if (!(a.eps_prime >= 0.0 && a.eps_prime < 1.0)) throw SmoothingParameterError("eps-prime must lie in [0, 1)");
  opt.eps_prime = a.eps_prime;
  opt.tol = a.tol;
  opt.imax3.solver.tol = a.tol;
  opt.timing = !ctx.no_timestamp;

  const SuiteResult res = run_suite(opt);
  json r = report_header(ctx);
  json items = json::array();
  for (const Tally& t : res.tallies) items.push_back(tally_to_json(t, opt.timing));
  r["items"] = items;
  r["counts"] = {{"holds", res.holds}, {"violated", res.violated}, {"inconclusive", res.inconclusive}, {"errors", res.errors}};
  if (res.counterexample) {
    r["counterexample"] = res.counterexample_path.empty() ? *res.counterexample : json(res.counterexample_path);
  }
  emit(ctx, r.dump(2) + "\n");
  if (res.violated > 0) return kViolation;
  if (res.errors > 0) return kInternal;
  return kOk;
}

// ----- random ----------------------------------------------------------------

struct RandomArgs {
  std::string kind;
  std::string dims = "2x2";
  std::uint64_t seed = 0;
  std::string path;
  int rank = 0;
};

int run_random(const Context& ctx, const RandomArgs& a) {
  const std::vector<DimPair> dims = parse_dims(a.dims);
  if (dims.size() != 1) throw ParameterError("random takes a single --dims pair");
  StateKind kind;
  if (a.kind == "ginibre") {
    kind = StateKind::GinibreMixed;
  } else if (a.kind == "haar_pure") {
    kind = StateKind::HaarPure;
  } else {
    kind = StateKind::RankK;
    if (a.rank == 0) throw ParameterError("rank_k needs --rank");
  }
  if (kind != StateKind::RankK && a.rank != 0) throw ParameterError("--rank applies to rank_k only");
  const DensityOperator rho = random_density(dims.front(), a.seed, kind, a.rank);
  json meta = {{"seed", a.seed}, {"kind", a.kind}};
  if (kind == StateKind::RankK) meta["rank"] = a.rank;
  write_state(a.path, rho, meta);

  json r = report_header(ctx);
  r["items"] = json::array({{{"kind", a.kind}, {"dims", a.dims}, {"seed", a.seed}, {"path", a.path}}});
  r["counts"] = {{"holds", 0}, {"violated", 0}, {"inconclusive", 0}, {"errors", 0}};
  emit(ctx, r.dump(2) + "\n");
  return kOk;
}

// ----- scan-iid --------------------------------------------------------------

int run_scan(const Context& ctx, const std::string& path, int max_copies, double tol) {
  const DensityOperator rho = read_state(path).state;
  SolverConfig cfg;
  cfg.tol = tol;
  json items = json::array();
  for (const IidRow& row : iid_scan(rho, max_copies, cfg)) {
    items.push_back({{"n", row.n},
                     {"imax1_rate", number(row.imax1_rate)},
                     {"imax2_rate", {number(row.imax2_rate.lower), number(row.imax2_rate.upper)}},
                     {"mutual_information", number(row.mutual_information)}});
  }
  json r = report_header(ctx);
  r["items"] = items;
  r["counts"] = {{"holds", 0}, {"violated", 0}, {"inconclusive", 0}, {"errors", 0}};
  emit(ctx, r.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.argv.assign(argv + 1, argv + argc);

  CLI::App app{"One-shot entropies, max-information and their inequalities"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_flag("--no-timestamp", ctx.no_timestamp, "Omit the timestamp and wall-clock fields");
  app.add_option("--out", ctx.out, "Write the report here instead of stdout");

  ComputeArgs ca;
  CLI::App* compute = app.add_subcommand("compute", "Evaluate one quantity on a state file");
  compute->add_option("quantity", ca.quantity)->required()->check(CLI::IsMember(quantities()));
  compute->add_option("state", ca.state)->required();
  compute->add_option("second-state", ca.second, "Second state for dmax, dmin, purified-distance, fidelity");
  compute->add_option("--eps", ca.eps, "Smoothing radius");
  compute->add_option("--eps-prime", ca.eps_prime);
  compute->add_option("--tol", ca.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  compute->add_option("--format", ca.format)->check(CLI::IsMember({"json", "csv"}));

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  verify->add_option("suite", va.suite)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", va.trials)->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed);
  verify->add_option("--dims", va.dims, "dAxdB, comma separated");
  verify->add_option("--eps", va.eps, "Comma-separated radii");
  verify->add_option("--eps-prime", va.eps_prime);
  verify->add_option("--tol", va.tol)->check(CLI::PositiveNumber);

  RandomArgs ra;
  CLI::App* random = app.add_subcommand("random", "Write a seeded random state file");
  random->add_option("kind", ra.kind)->required()->check(CLI::IsMember({"ginibre", "haar_pure", "rank_k"}));
  random->add_option("--dims", ra.dims);
  random->add_option("--seed", ra.seed);
  random->add_option("--out", ra.path)->required();
  random->add_option("--rank", ra.rank, "Rank for rank_k");

  std::string scan_path;
  int max_copies = 3;
  double scan_tol = 1e-7;
  CLI::App* scan = app.add_subcommand("scan-iid", "Per-copy rates of max-information on tensor powers");
  scan->add_option("state", scan_path)->required();
  scan->add_option("--max-copies", max_copies)->check(CLI::PositiveNumber);
  scan->add_option("--tol", scan_tol)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compute) return run_compute(ctx, ca);
    if (*verify) return run_verify(ctx, va);
    if (*random) return run_random(ctx, ra);
    return run_scan(ctx, scan_path, max_copies, scan_tol);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const SolverBudgetExhausted& e) {
    std::cerr << "solver budget exhausted: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
