#pragma once

// Model files: one JSON document describing the path space, the option
// books, the information structure and the claims. Rationals are written as
// strings ("1/3", "0.25") or as JSON integers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rip/information.hpp"
#include "rip/lp.hpp"
#include "rip/model.hpp"
#include "rip/payoff.hpp"

namespace rip::cli {

/// Arrival-time comparison on i.i.d. lattices. Claims and the variable are
/// written on the `tail_steps`-step space.
struct TimingSpec {
  std::vector<Rational> ratios;
  int tail_steps = 0;
  std::vector<int> arrivals;
};

struct ModelConfig {
  PathSpace space;
  /// Initial price per underlying; paths are stored divided by it and
  /// payoff expressions are rewritten accordingly.
  std::vector<Rational> scale;
  StaticOptionBook book;
  InfoStructure info;
  std::optional<PayoffExpr> claim;
  std::vector<PayoffExpr> claims;
  bool auto_claims = false;
  NumericMode mode = NumericMode::kRational;
  lp::SolverOptions solver;
  std::optional<TimingSpec> timing;
};

struct ParsedModel {
  std::optional<ModelConfig> config;
  std::vector<std::string> errors;  ///< every problem found, in file order

  bool ok() const { return config.has_value(); }
};

ParsedModel parse_model_text(std::string_view text);
ParsedModel parse_model(const std::string& path);

/// Resolves a catalog name or a DSL expression.
InfoVariable info_variable_from_text(std::string_view text, std::optional<int> arrival = std::nullopt);

}  // namespace rip::cli
