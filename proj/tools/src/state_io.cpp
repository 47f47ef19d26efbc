#include "oneshot_tools/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "oneshot/error.hpp"

namespace oneshot::tools {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw MalformedInput(where + ": " + what); }

int read_dim(const nlohmann::json& dims, int i) {
  const std::string where = "dims[" + std::to_string(i) + "]";
  const nlohmann::json& v = dims[static_cast<std::size_t>(i)];
  if (!v.is_number_integer()) bad(where, "expected a positive integer");
  const long long d = v.get<long long>();
  if (d < 1 || d > 64) bad(where, "dimension " + std::to_string(d) + " outside 1..64");
  return static_cast<int>(d);
}

double read_part(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(where, "non-finite value");
  return x;
}

}  // namespace

StateFile parse_state(const nlohmann::json& j) {
  if (!j.is_object()) bad("state", "expected a JSON object");
  if (!j.contains("dims")) bad("dims", "missing field");
  const nlohmann::json& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2) bad("dims", "expected [dA, dB]");
  const DimPair d{read_dim(dims, 0), read_dim(dims, 1)};
  const int n = d.total();

  if (!j.contains("matrix")) bad("matrix", "missing field");
  const nlohmann::json& m = j.at("matrix");
  if (!m.is_array()) bad("matrix", "expected an array of [re, im] pairs");
  const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (m.size() != expected) {
    bad("matrix", "expected " + std::to_string(expected) + " entries for dims " + std::to_string(d.a) + "x" +
                      std::to_string(d.b) + ", found " + std::to_string(m.size()));
  }
  ComplexMatrix mat(n, n);
  for (std::size_t k = 0; k < expected; ++k) {
    const std::string where = "matrix[" + std::to_string(k) + "]";
    const nlohmann::json& e = m[k];
    if (!e.is_array() || e.size() != 2) bad(where, "expected [re, im]");
    mat(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
        Complex(read_part(e[0], where + "[0]"), read_part(e[1], where + "[1]"));
  }

  StateFile out{DensityOperator(HermitianOperator(mat), d)};
  if (j.contains("metadata")) {
    if (!j.at("metadata").is_object()) bad("metadata", "expected an object");
    out.metadata = j.at("metadata");
  }
  return out;
}

StateFile read_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open state file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(path + ": " + e.what());
  }
  try {
    return parse_state(j);
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

nlohmann::json state_to_json(const DensityOperator& rho, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["dims"] = {rho.dims().a, rho.dims().b};
  nlohmann::json m = nlohmann::json::array();
  const ComplexMatrix& mat = rho.matrix();
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) m.push_back({mat(r, c).real(), mat(r, c).imag()});
  }
  j["matrix"] = std::move(m);
  if (!metadata.empty()) j["metadata"] = metadata;
  return j;
}

void write_state(const std::string& path, const DensityOperator& rho, const nlohmann::json& metadata) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << state_to_json(rho, metadata).dump(2) << '\n';
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

}  // namespace oneshot::tools
