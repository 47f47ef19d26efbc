#pragma once

// JSON state files: {"dims": [dA, dB], "matrix": [[re, im], ...]} with the
// matrix row-major, plus an optional "metadata" object.

#include <string>

#include "json.hpp"

#include "oneshot/quantum.hpp"

namespace oneshot::tools {

struct StateFile {
  DensityOperator state;
  nlohmann::json metadata = nlohmann::json::object();
};

// Errors name the offending field and index; all are MalformedInput except
// the core's own checks (NotPsd, DimensionMismatch) which pass through.
StateFile parse_state(const nlohmann::json& j);
StateFile read_state(const std::string& path);

nlohmann::json state_to_json(const DensityOperator& rho, const nlohmann::json& metadata = nlohmann::json::object());
// Throws ParameterError when the file cannot be written.
void write_state(const std::string& path, const DensityOperator& rho,
                 const nlohmann::json& metadata = nlohmann::json::object());

}  // namespace oneshot::tools
