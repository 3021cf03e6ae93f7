#include "rip/cli/model_config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rip/errors.hpp"

namespace rip::cli {

using Json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kKnownKeys = {
    "grid",    "underlyings",  "initial", "lattice",  "paths",       "dynamic_options",
    "interpolation", "static_options", "info", "claim", "claims", "auto_claims",
    "mode",    "solver",       "path_cap", "timing"};

class Collector {
 public:
  void add(const std::string& where, const std::string& what) { errors_.push_back(where + ": " + what); }

  // Runs `fn`, recording any failure under `where`. Returns false on failure.
  bool attempt(const std::string& where, const std::function<void()>& fn) {
    try {
      fn();
      return true;
    } catch (const Json::exception& e) {
      add(where, e.what());
    } catch (const std::exception& e) {
      add(where, e.what());
    }
    return false;
  }

  std::vector<std::string> take() { return std::move(errors_); }
  bool empty() const { return errors_.empty(); }

 private:
  std::vector<std::string> errors_;
};

// Payoffs are written in the file's price units; paths are stored divided
// by the initial prices.
PayoffExpr scaled(const PayoffExpr& expr, const std::vector<Rational>& scale) {
  const bool unit = std::all_of(scale.begin(), scale.end(), [](const Rational& s) { return s == 1 || s == 0; });
  return unit ? expr : rescale_prices(expr, scale);
}

Rational rational_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw DomainError("expected a number or a \"p/q\" string, got " + j.dump());
}

std::vector<Rational> rational_list(const Json& j) {
  if (!j.is_array()) throw DomainError("expected a list of numbers");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_of(x));
  return out;
}

int int_of(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw DomainError(what + " must be an integer");
  return j.get<int>();
}

InfoVariable catalog_variable(const Json& j, std::optional<int> arrival) {
  const std::string name = j.at("catalog").get<std::string>();
  if (j.contains("arrival")) arrival = int_of(j.at("arrival"), "variable arrival");
  auto need_arrival = [&] {
    if (!arrival) throw DomainError("catalog variable '" + name + "' needs an arrival index");
    return *arrival;
  };
  if (name == "max_abs_deviation") return InfoVariable::max_abs_deviation();
  if (name == "range_indicator") {
    return InfoVariable::range_indicator(rational_of(j.at("lower")), rational_of(j.at("upper")));
  }
  if (name == "tail_max_abs_deviation") return InfoVariable::tail_max_abs_deviation(need_arrival());
  if (name == "tail_range_indicator") {
    return InfoVariable::tail_range_indicator(rational_of(j.at("lower")), rational_of(j.at("upper")),
                                              need_arrival());
  }
  if (name == "constant") {
    return InfoVariable::constant(j.contains("value") ? rational_of(j.at("value")) : Rational(0));
  }
  throw DomainError("unknown catalog variable '" + name + "'");
}

Path path_of(const Json& j, int underlyings, std::vector<Rational>& scale, std::size_t index) {
  std::vector<std::vector<Rational>> per_asset;
  if (underlyings == 1 && j.is_array() && (j.empty() || !j.front().is_array())) {
    per_asset.push_back(rational_list(j));
  } else {
    if (!j.is_array() || static_cast<int>(j.size()) != underlyings) {
      throw DimensionError("path " + std::to_string(index) + " must list " + std::to_string(underlyings) +
                           " price sequences");
    }
    for (const auto& a : j) per_asset.push_back(rational_list(a));
  }
  const std::size_t len = per_asset.front().size();
  std::vector<Rational> values;
  for (int a = 0; a < underlyings; ++a) {
    auto& seq = per_asset[static_cast<std::size_t>(a)];
    if (seq.size() != len || len < 2) {
      throw DimensionError("path " + std::to_string(index) + " has sequences of unequal or short length");
    }
    if (sgn(seq.front()) <= 0) {
      throw DomainError("path " + std::to_string(index) + " has a nonpositive initial price");
    }
    auto& s = scale[static_cast<std::size_t>(a)];
    if (sgn(s) == 0) s = seq.front();
    if (seq.front() != s) {
      throw DomainError("path " + std::to_string(index) + " starts at " + to_string(seq.front()) +
                        " for asset " + std::to_string(a + 1) + ", other paths start at " + to_string(s));
    }
    for (auto& x : seq) values.push_back(x / s);
  }
  return Path(underlyings, static_cast<int>(len) - 1, std::move(values));
}

std::vector<PricedPayoff> priced_list(const Json& j, const std::string& where, Collector& errors,
                                      const std::vector<Rational>& scale) {
  std::vector<PricedPayoff> out;
  if (!j.is_array()) {
    errors.add(where, "expected a list of {payoff, price} objects");
    return out;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    errors.attempt(at, [&] {
      PayoffExpr payoff = scaled(parse_payoff(j[i].at("payoff").get<std::string>()), scale);
      out.push_back({std::move(payoff), rational_of(j[i].at("price"))});
    });
  }
  return out;
}

}  // namespace

InfoVariable info_variable_from_text(std::string_view text, std::optional<int> arrival) {
  const std::string s(text);
  if (s == "max_abs_deviation") return InfoVariable::max_abs_deviation();
  if (s == "tail_max_abs_deviation") {
    if (!arrival) throw DomainError("catalog variable 'tail_max_abs_deviation' needs an arrival index");
    return InfoVariable::tail_max_abs_deviation(*arrival);
  }
  return InfoVariable::expression(parse_payoff(s));
}

ParsedModel parse_model_text(std::string_view text) {
  ParsedModel result;
  Collector errors;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    result.errors.push_back(std::string("model: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back("model: top level must be an object");
    return result;
  }
  for (const auto& [key, _] : doc.items()) {
    if (!kKnownKeys.count(key)) errors.add(key, "unknown key");
  }
  for (const char* key : {"grid", "lattice", "info", "solver", "timing"}) {
    if (doc.contains(key) && !doc.at(key).is_object()) {
      errors.add(key, "must be an object");
      doc.erase(key);
    }
  }

  int underlyings = 1;
  errors.attempt("underlyings", [&] {
    if (doc.contains("underlyings")) underlyings = int_of(doc.at("underlyings"), "underlyings");
    if (underlyings < 1) throw DomainError("need at least one underlying");
  });
  underlyings = std::max(underlyings, 1);
  std::vector<Rational> scale(static_cast<std::size_t>(underlyings), Rational(0));

  std::size_t path_cap = kDefaultPathCap;
  errors.attempt("path_cap", [&] {
    if (doc.contains("path_cap")) path_cap = doc.at("path_cap").get<std::size_t>();
  });

  // Grid: explicit times, or steps with an optional horizon.
  std::optional<TimeGrid> grid;
  errors.attempt("grid", [&] {
    if (!doc.contains("grid")) return;
    const Json& g = doc.at("grid");
    if (g.contains("times")) {
      grid = TimeGrid(rational_list(g.at("times")));
    } else {
      const Rational horizon = g.contains("horizon") ? rational_of(g.at("horizon")) : Rational(1);
      grid = TimeGrid::uniform(int_of(g.at("steps"), "grid.steps"), horizon);
    }
  });

  // Base space from a lattice or an explicit path list.
  std::optional<PathSpace> base;
  const bool has_lattice = doc.contains("lattice");
  const bool has_paths = doc.contains("paths");
  if (has_lattice == has_paths) {
    errors.add("model", "exactly one of 'lattice' and 'paths' is required");
  } else if (has_lattice) {
    errors.attempt("lattice", [&] {
      if (!grid) throw DomainError("a lattice needs 'grid'");
      const Json& l = doc.at("lattice");
      RatioSets ratios;
      if (l.contains("ratios")) {
        ratios = iid_ratios(grid->steps(), underlyings, rational_list(l.at("ratios")));
      } else {
        const Json& steps = l.at("per_step");
        if (!steps.is_array() || static_cast<int>(steps.size()) != grid->steps()) {
          throw DimensionError("per_step must list one entry per grid step");
        }
        for (const auto& step : steps) {
          std::vector<std::vector<Rational>> per_asset;
          if (!step.empty() && step.front().is_array()) {
            for (const auto& a : step) per_asset.push_back(rational_list(a));
          } else {
            per_asset.assign(static_cast<std::size_t>(underlyings), rational_list(step));
          }
          ratios.push_back(std::move(per_asset));
        }
      }
      if (doc.contains("initial")) {
        scale = rational_list(doc.at("initial"));
        if (static_cast<int>(scale.size()) != underlyings) {
          throw DimensionError("'initial' must list one price per underlying");
        }
        for (const auto& s : scale) {
          if (sgn(s) <= 0) throw DomainError("initial prices must be positive");
        }
      } else {
        scale.assign(static_cast<std::size_t>(underlyings), Rational(1));
      }
      base = build_lattice(underlyings, *grid, ratios, path_cap);
    });
  } else {
    std::vector<Path> paths;
    bool paths_ok = true;
    const Json& list = doc.at("paths");
    if (!list.is_array() || list.empty()) {
      errors.add("paths", "expected a nonempty list of paths");
      paths_ok = false;
    } else {
      if (doc.contains("initial")) errors.add("initial", "only used with 'lattice'; paths carry their own start");
      for (std::size_t i = 0; i < list.size(); ++i) {
        paths_ok &= errors.attempt("paths[" + std::to_string(i) + "]",
                                   [&] { paths.push_back(path_of(list[i], underlyings, scale, i)); });
      }
      if (paths.size() > path_cap) {
        errors.add("paths", "path count exceeds path_cap");
        paths_ok = false;
      }
    }
    if (paths_ok) {
      errors.attempt("paths", [&] {
        const int steps = paths.front().steps();
        if (!grid) grid = TimeGrid::uniform(steps);
        if (grid->steps() != steps) throw DimensionError("paths do not match the grid step count");
        base = PathSpace(*grid, underlyings, {}, std::move(paths));
      });
    }
  }
  for (auto& s : scale) {
    if (sgn(s) == 0) s = 1;
  }

  // Dynamic options extend the base space by one coordinate each.
  std::vector<PricedPayoff> dynamic;
  if (doc.contains("dynamic_options")) {
    dynamic = priced_list(doc.at("dynamic_options"), "dynamic_options", errors, scale);
    for (std::size_t i = 0; i < dynamic.size(); ++i) {
      if (sgn(dynamic[i].price) <= 0) {
        errors.add("dynamic_options[" + std::to_string(i) + "]",
                   "price must be positive, got " + to_string(dynamic[i].price));
      }
    }
  }
  std::optional<PathSpace> space;
  if (base) {
    errors.attempt("dynamic_options", [&] {
      if (dynamic.empty()) {
        space = std::move(base);
        return;
      }
      for (const auto& d : dynamic) {
        if (sgn(d.price) <= 0) return;  // already reported
      }
      OptionInterpolation interpolation;
      if (doc.contains("interpolation")) {
        const Json& in = doc.at("interpolation");
        if (in.is_string() && in.get<std::string>() == "uniform") {
          interpolation.reference_weights = std::vector<Rational>(base->size(), Rational(1, base->size()));
        } else if (in.is_object() && in.contains("reference_weights")) {
          interpolation.reference_weights = rational_list(in.at("reference_weights"));
        } else if (!(in.is_string() && in.get<std::string>() == "linear")) {
          throw DomainError("interpolation must be \"linear\", \"uniform\" or {\"reference_weights\": [...]}");
        }
      }
      space = build_info_space(*base, dynamic, interpolation);
    });
  }

  StaticOptionBook book;
  if (doc.contains("static_options")) {
    const auto entries = priced_list(doc.at("static_options"), "static_options", errors, scale);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string at = "static_options[" + std::to_string(i) + "]";
      if (sgn(entries[i].price) < 0) {
        errors.add(at, "price must be nonnegative, got " + to_string(entries[i].price));
        continue;
      }
      book.add(entries[i].payoff, entries[i].price);
    }
    if (space) errors.attempt("static_options", [&] { book.validate(*space); });
  }

  InfoStructure info;
  errors.attempt("info", [&] {
    if (!doc.contains("info")) return;
    const Json& in = doc.at("info");
    const std::string variant = in.contains("variant") ? in.at("variant").get<std::string>() : "none";
    std::optional<int> arrival;
    if (in.contains("arrival")) arrival = int_of(in.at("arrival"), "info.arrival");
    std::optional<InfoVariable> z;
    if (in.contains("variable")) {
      const Json& v = in.at("variable");
      if (v.is_string()) {
        z = info_variable_from_text(v.get<std::string>(), arrival);
      } else if (v.contains("catalog")) {
        z = catalog_variable(v, arrival);
      } else {
        z = InfoVariable::expression(parse_payoff(v.at("expr").get<std::string>()),
                                     v.contains("name") ? v.at("name").get<std::string>() : "");
      }
      const bool catalog = v.is_object() ? v.contains("catalog")
                                         : (v.get<std::string>() == "max_abs_deviation" ||
                                            v.get<std::string>() == "tail_max_abs_deviation");
      if (!catalog) z->labeler = scaled(z->labeler, scale);
    }
    if (variant == "none") {
      info = InfoStructure::none();
      info.variable = z;
    } else if (variant == "plus" || variant == "minus") {
      if (!z) throw DomainError("variant '" + variant + "' needs a variable");
      info = variant == "plus" ? InfoStructure::plus(*z) : InfoStructure::minus(*z);
    } else if (variant == "dynamic") {
      if (!z) throw DomainError("variant 'dynamic' needs a variable");
      if (!arrival) throw DomainError("variant 'dynamic' needs an arrival index");
      info = InfoStructure::dynamic(*z, *arrival);
    } else {
      throw DomainError("unknown variant '" + variant + "' (none, plus, minus, dynamic)");
    }
    if (grid && info.variant == InfoVariant::kDynamic && (info.arrival <= 0 || info.arrival >= grid->steps())) {
      throw DomainError("arrival index " + std::to_string(info.arrival) + " must lie strictly inside (0, " +
                        std::to_string(grid->steps()) + ")");
    }
    if (space) {
      if (info.variant == InfoVariant::kNone) {
        if (info.variable) info.variable->labeler.validate(space->assets(), space->steps());
      } else {
        info.validate(*space);
      }
    }
  });

  std::optional<PayoffExpr> claim;
  errors.attempt("claim", [&] {
    if (!doc.contains("claim")) return;
    claim = scaled(parse_payoff(doc.at("claim").get<std::string>()), scale);
    if (space) claim->validate(space->assets(), space->steps());
  });
  std::vector<PayoffExpr> claims;
  if (doc.contains("claims")) {
    const Json& list = doc.at("claims");
    if (!list.is_array()) errors.add("claims", "expected a list of expressions");
    for (std::size_t i = 0; list.is_array() && i < list.size(); ++i) {
      errors.attempt("claims[" + std::to_string(i) + "]", [&] {
        PayoffExpr c = scaled(parse_payoff(list[i].get<std::string>()), scale);
        if (space) c.validate(space->assets(), space->steps());
        claims.push_back(std::move(c));
      });
    }
  }
  bool auto_claims = false;
  errors.attempt("auto_claims", [&] {
    if (doc.contains("auto_claims")) auto_claims = doc.at("auto_claims").get<bool>();
  });

  NumericMode mode = NumericMode::kRational;
  errors.attempt("mode", [&] {
    if (!doc.contains("mode")) return;
    const std::string m = doc.at("mode").get<std::string>();
    if (m == "float") {
      mode = NumericMode::kFloat;
    } else if (m != "rational") {
      throw DomainError("mode must be \"rational\" or \"float\"");
    }
  });

  lp::SolverOptions solver;
  errors.attempt("solver", [&] {
    if (!doc.contains("solver")) return;
    const Json& s = doc.at("solver");
    if (s.contains("tolerance")) solver.tolerance = s.at("tolerance").get<double>();
    if (s.contains("max_pivots")) solver.max_pivots = s.at("max_pivots").get<std::size_t>();
    if (!(solver.tolerance > 0)) throw DomainError("solver tolerance must be positive");
  });

  std::optional<TimingSpec> timing;
  errors.attempt("timing", [&] {
    if (!doc.contains("timing")) return;
    const Json& t = doc.at("timing");
    TimingSpec spec;
    spec.ratios = rational_list(t.at("ratios"));
    spec.tail_steps = int_of(t.at("tail_steps"), "timing.tail_steps");
    if (spec.tail_steps < 1) throw DomainError("timing.tail_steps must be positive");
    for (const auto& a : t.at("arrivals")) {
      const int k = int_of(a, "timing arrival");
      if (k < 0) throw DomainError("timing arrivals must be nonnegative");
      spec.arrivals.push_back(k);
    }
    if (underlyings != 1) throw DomainError("timing comparison needs a single underlying");
    timing = std::move(spec);
  });

  if (!errors.empty() || !space) {
    result.errors = errors.take();
    if (result.errors.empty()) result.errors.push_back("model: no path space could be built");
    return result;
  }
  result.config = ModelConfig{std::move(*space), std::move(scale), std::move(book),  std::move(info),
                              std::move(claim),  std::move(claims), auto_claims,     mode,
                              solver,            std::move(timing)};
  return result;
}

ParsedModel parse_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParsedModel r;
    r.errors.push_back(path + ": cannot open file");
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

}  // namespace rip::cli
