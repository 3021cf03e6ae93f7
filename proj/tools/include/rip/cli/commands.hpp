#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rip/cli/model_config.hpp"

namespace rip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

struct RunOptions {
  std::optional<int> t1;
  std::optional<std::string> atom;  ///< restrict to the level set of this label
  std::optional<NumericMode> mode;  ///< overrides the model file
  bool timings = false;             ///< wall-clock section (breaks byte stability)
};

struct Report {
  nlohmann::ordered_json body;
  int exit_code = kExitOk;
};

const std::vector<std::string>& command_names();

/// Throws rip::Error subclasses on invalid requests.
Report run(const std::string& command, const ModelConfig& config, const RunOptions& options = {});

/// Structured error document.
nlohmann::ordered_json error_report(const std::string& command, const std::string& kind,
                                    const std::vector<std::string>& messages);

}  // namespace rip::cli
