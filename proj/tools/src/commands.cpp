#include "rip/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rip/errors.hpp"
#include "rip/hedging.hpp"
#include "rip/pricing.hpp"
#include "rip/valuation.hpp"

namespace rip::cli {

using Json = nlohmann::ordered_json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"price", "hedge", "duality", "dpp", "info-value", "chain"};
  return names;
}

Json error_report(const std::string& command, const std::string& kind,
                  const std::vector<std::string>& messages) {
  Json j;
  j["command"] = command;
  j["error"] = {{"kind", kind}, {"messages", messages}};
  return j;
}

namespace {

template <class T>
std::string num(const T& x) {
  return Arith<T>::str(x);
}

template <class T>
Json ext(const Extended<T>& x) {
  return x.str();
}

template <class T>
Json opt_num(const std::optional<T>& x) {
  return x ? Json(num(*x)) : Json(nullptr);
}

Json rational_list(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Json path_values(const Path& p) {
  if (p.assets() == 1) {
    Json out = Json::array();
    for (const auto& x : p.asset_values(0)) out.push_back(to_string(x));
    return out;
  }
  Json out = Json::array();
  for (int a = 0; a < p.assets(); ++a) {
    Json seq = Json::array();
    for (const auto& x : p.asset_values(a)) seq.push_back(to_string(x));
    out.push_back(std::move(seq));
  }
  return out;
}

class Context {
 public:
  Context(const ModelConfig& config, const RunOptions& options)
      : config_(config), options_(options), mode_(options.mode.value_or(config.mode)) {
    if (config.info.variable) z_labels_ = labels(config.space, *config.info.variable);
  }

  const PathSpace& space() const { return config_.space; }
  const ModelConfig& config() const { return config_; }
  NumericMode mode() const { return mode_; }
  ValuationOptions valuation() const { return {config_.solver}; }

  const PayoffExpr& claim() const {
    if (!config_.claim) throw DomainError("this command needs 'claim' in the model file");
    return *config_.claim;
  }

  const InfoVariable& variable() const {
    if (!config_.info.variable) throw DomainError("this command needs an information variable");
    return *config_.info.variable;
  }

  /// The whole space, or the level set named by --atom.
  PathSet target() const {
    if (!options_.atom) return space().all();
    if (!config_.info.variable) throw DomainError("--atom needs an information variable");
    const Rational wanted = parse_rational(*options_.atom);
    PathSet out;
    for (std::size_t i = 0; i < z_labels_.size(); ++i) {
      const bool same = mode_ == NumericMode::kRational
                            ? z_labels_[i] == wanted
                            : std::abs(Rational(z_labels_[i] - wanted).get_d()) <= kLabelTolerance;
      if (same) out.push_back(i);
    }
    if (out.empty()) {
      std::vector<Rational> distinct = z_labels_;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      std::string list;
      for (const auto& d : distinct) list += (list.empty() ? "" : ", ") + to_string(d);
      throw DomainError("no path has label " + *options_.atom + " (labels: " + list + ")");
    }
    return out;
  }

  std::optional<int> t1() const { return options_.t1; }
  bool restricted() const { return options_.atom.has_value(); }

  Json atom(const PathSet& paths) const {
    Json j;
    j["paths"] = paths;
    Json label = nullptr;
    if (!z_labels_.empty() && !paths.empty()) {
      const Rational& first = z_labels_[paths.front()];
      const bool uniform = std::all_of(paths.begin(), paths.end(),
                                       [&](std::size_t i) { return z_labels_[i] == first; });
      if (uniform) label = to_string(first);
    }
    j["label"] = label;
    return j;
  }

  Json model_echo() const {
    const auto& s = space();
    Json m;
    m["underlyings"] = s.underlyings();
    m["times"] = rational_list(s.grid().times());
    m["scale"] = rational_list(config_.scale);
    Json dyn = Json::array();
    for (const auto& d : s.dynamic_options()) dyn.push_back({{"payoff", d.payoff.str()}, {"price", to_string(d.price)}});
    m["dynamic_options"] = dyn;
    Json book = Json::array();
    for (std::size_t i = 1; i < config_.book.size(); ++i) {
      const auto& e = config_.book.entry(i);
      book.push_back({{"payoff", e.payoff.str()}, {"price", to_string(e.price)}});
    }
    m["static_options"] = book;
    Json info;
    info["variant"] = variant_name(config_.info.variant);
    info["variable"] = config_.info.variable ? Json(config_.info.variable->name) : Json(nullptr);
    info["arrival"] = config_.info.variant == InfoVariant::kDynamic ? Json(config_.info.arrival) : Json(nullptr);
    m["info"] = info;
    m["claim"] = config_.claim ? Json(config_.claim->str()) : Json(nullptr);
    Json paths = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
      Json p;
      p["index"] = i;
      p["values"] = path_values(s.path(i));
      if (!z_labels_.empty()) p["label"] = to_string(z_labels_[i]);
      paths.push_back(std::move(p));
    }
    m["paths"] = paths;
    return m;
  }

 private:
  const ModelConfig& config_;
  const RunOptions& options_;
  NumericMode mode_;
  std::vector<Rational> z_labels_;
};

template <class T>
Json strategy_json(const Strategy<T>& s, const StaticOptionBook& book) {
  Json j;
  j["cost"] = num(s.cost(book));
  Json stat = Json::array();
  for (std::size_t i = 0; i < s.static_position.size(); ++i) {
    stat.push_back({{"payoff", i == 0 ? std::string("1") : book.entry(i).payoff.str()},
                    {"quantity", num(s.static_position[i])}});
  }
  j["static"] = stat;
  Json steps = Json::array();
  for (std::size_t k = 0; k < s.holdings.size(); ++k) {
    Json atoms = Json::array();
    const auto& partition = s.schedule.partitions[k];
    for (std::size_t a = 0; a < s.holdings[k].size(); ++a) {
      Json pos = Json::array();
      for (const auto& x : s.holdings[k][a]) pos.push_back(num(x));
      atoms.push_back({{"paths", partition.atoms[a]}, {"position", pos}});
    }
    steps.push_back({{"step", s.schedule.first_step + static_cast<int>(k)}, {"atoms", atoms}});
  }
  j["holdings"] = steps;
  return j;
}

template <class T>
Json measure_json(const MartingaleMeasure<T>& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    if (Arith<T>::sign(m.weights[i], 0.0) != 0) out.push_back({{"path", i}, {"weight", num(m.weights[i])}});
  }
  return out;
}

template <class T>
Json vector_json(const std::vector<T>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(num(x));
  return out;
}

template <class T>
Json hedge_entry(const Context& ctx, const HedgeValue<T>& h) {
  Json j;
  j["atom"] = ctx.atom(h.target);
  j["value"] = ext(h.value);
  j["strategy"] = h.strategy ? strategy_json(*h.strategy, ctx.config().book) : Json(nullptr);
  j["arbitrage"] = h.arbitrage ? strategy_json(*h.arbitrage, ctx.config().book) : Json(nullptr);
  return j;
}

template <class T>
Json price_entry(const Context& ctx, const PriceValue<T>& p) {
  Json j;
  j["atom"] = ctx.atom(p.target);
  j["value"] = ext(p.value);
  j["measure"] = p.measure ? measure_json(*p.measure) : Json(nullptr);
  j["certificate"] = p.value.is_neg_inf() ? vector_json(p.farkas) : Json(nullptr);
  return j;
}

std::string atom_text(const Json& atom) {
  return atom["label"].is_null() ? "atom of " + std::to_string(atom["paths"].size()) + " paths"
                                 : "atom with label " + atom["label"].get<std::string>();
}

template <class T>
int cmd_price(const Context& ctx, Json& out) {
  const auto table = model_price<T>(ctx.space(), ctx.target(), ctx.config().info, ctx.claim(),
                                    ctx.config().book, PriceOptions{ctx.config().solver});
  Json atoms = Json::array();
  Json findings = Json::array();
  for (const auto& p : table) {
    atoms.push_back(price_entry(ctx, p));
    if (p.value.is_neg_inf()) findings.push_back(atom_text(atoms.back()["atom"]) + ": no calibrated martingale measure");
  }
  out["atoms"] = atoms;
  out["findings"] = findings;
  return findings.empty() ? kExitOk : kExitInfeasible;
}

template <class T>
int cmd_hedge(const Context& ctx, Json& out) {
  const auto table = superhedge<T>(ctx.space(), ctx.target(), ctx.config().info, ctx.claim(),
                                   ctx.config().book, HedgeOptions{ctx.config().solver});
  Json atoms = Json::array();
  Json findings = Json::array();
  for (const auto& h : table) {
    atoms.push_back(hedge_entry(ctx, h));
    if (h.value.is_neg_inf()) findings.push_back(atom_text(atoms.back()["atom"]) + ": arbitrage, cost is -inf");
  }
  out["atoms"] = atoms;
  out["findings"] = findings;
  return findings.empty() ? kExitOk : kExitInfeasible;
}

template <class T>
Json chain_json(const ChainQuantities<T>& c) {
  Json j;
  j["hedge_minus"] = ext(c.hedge_minus);
  j["max_hedge_plus"] = ext(c.max_hedge_plus);
  j["max_price_plus"] = ext(c.max_price_plus);
  j["max_single_level"] = ext(c.max_single_level);
  j["price_minus"] = ext(c.price_minus);
  j["agree"] = c.agree(Arith<T>::kExact ? 0.0 : kDualityTolerance);
  return j;
}

template <class T>
int cmd_duality(const Context& ctx, Json& out) {
  const auto& cfg = ctx.config();
  const DualityReport<T> r =
      ctx.restricted()
          ? duality_report<T>(ctx.space(), ctx.target(), ctx.claim(), cfg.info, cfg.book, ctx.valuation())
          : duality_report<T>(ctx.space(), ctx.claim(), cfg.info, cfg.book, ctx.valuation());
  const double tol = Arith<T>::kExact ? 0.0 : kDualityTolerance;
  Json atoms = Json::array();
  Json findings = Json::array();
  for (const auto& a : r.atoms) {
    Json j;
    j["atom"] = ctx.atom(a.atom);
    j["hedge"] = ext(a.hedge);
    j["price"] = ext(a.price);
    j["gap"] = opt_num(a.gap);
    j["holds"] = extended_equal(a.hedge, a.price, tol);
    j["strategy"] = a.strategy ? strategy_json(*a.strategy, cfg.book) : Json(nullptr);
    j["arbitrage"] = a.arbitrage ? strategy_json(*a.arbitrage, cfg.book) : Json(nullptr);
    j["measure"] = a.measure ? measure_json(*a.measure) : Json(nullptr);
    j["certificate"] = a.feasible ? Json(nullptr) : vector_json(a.farkas);
    if (!a.feasible) findings.push_back(atom_text(j["atom"]) + ": empty measure class, cost and price are -inf");
    atoms.push_back(std::move(j));
  }
  out["atoms"] = atoms;
  out["holds"] = r.holds(tol);
  out["chain"] = r.chain ? chain_json(*r.chain) : Json(nullptr);
  if (!r.holds(tol)) {
    findings.push_back("duality gap detected");
    out["findings"] = findings;
    return kExitError;
  }
  out["findings"] = findings;
  return findings.empty() ? kExitOk : kExitInfeasible;
}


int arrival_for(const Context& ctx, const char* command) {
  if (ctx.t1()) return *ctx.t1();
  if (ctx.config().info.variant == InfoVariant::kDynamic) return ctx.config().info.arrival;
  throw DomainError(std::string(command) + " needs --t1 or a dynamic arrival in the model file");
}

template <class T>
int cmd_dpp(const Context& ctx, Json& out) {
  const auto& cfg = ctx.config();
  const int arrival = arrival_for(ctx, "dpp");
  if (arrival <= 0 || arrival >= ctx.space().steps()) {
    throw DomainError("--t1 must lie strictly inside (0, " + std::to_string(ctx.space().steps()) + ")");
  }
  if (cfg.info.variant != InfoVariant::kNone && cfg.info.variant != InfoVariant::kDynamic) {
    throw PreconditionError("dpp needs info variant none or dynamic");
  }
  InfoStructure info = cfg.info;
  if (info.variant == InfoVariant::kNone) info.variable.reset();
  check_dpp_preconditions(ctx.space(), info, arrival, cfg.book);

  Json findings = Json::array();
  const DppResult<T> h = dpp_superhedge<T>(ctx.space(), ctx.claim(), arrival, info, HedgeOptions{cfg.solver});
  auto section = [&](const DppResult<T>& r) {
    Json j;
    j["direct"] = ext(r.direct);
    j["composed"] = ext(r.composed);
    j["equal"] = extended_equal(r.direct, r.composed, Arith<T>::kExact ? 0.0 : kDualityTolerance);
    Json inner = Json::array();
    for (const auto& e : r.inner) inner.push_back({{"atom", e.atom}, {"value", ext(e.value)}});
    j["inner"] = inner;
    return j;
  };
  out["arrival"] = arrival;
  out["hedge"] = section(h);
  if (h.direct.is_neg_inf()) findings.push_back("direct superhedging cost is -inf");
  for (const auto& e : h.inner) {
    if (e.value.is_neg_inf()) {
      findings.push_back("inner cost is -inf on the atom at index " + std::to_string(arrival) +
                         " containing path " + std::to_string(e.atom.front()));
    }
  }
  try {
    out["price"] = section(dpp_price<T>(ctx.space(), ctx.claim(), arrival, info, PriceOptions{cfg.solver}));
  } catch (const PreconditionError& e) {
    out["price"] = nullptr;
    findings.push_back(std::string("price composition skipped: ") + e.what());
  }
  out["findings"] = findings;
  const bool equal = out["hedge"]["equal"].get<bool>() && (out["price"].is_null() || out["price"]["equal"].get<bool>());
  if (!equal) return kExitError;
  return findings.empty() ? kExitOk : kExitInfeasible;
}

template <class T>
Json claim_value_json(const ClaimInfoValue<T>& c) {
  Json j;
  j["claim"] = c.claim.str();
  j["hedge_plain"] = ext(c.hedge_plain);
  j["hedge_informed"] = ext(c.hedge_informed);
  j["value"] = opt_num(c.value);
  if (c.arrival == 0) {
    Json table = Json::array();
    for (const auto& v : c.plus_table) table.push_back(ext(v));
    j["plus_table"] = table;
    j["plus_infimum"] = opt_num(c.plus_infimum);
  }
  j["flag"] = c.flag.empty() ? Json(nullptr) : Json(c.flag);
  return j;
}

template <class T>
Json info_report_json(const InfoValueReport<T>& r) {
  Json j;
  j["arrival"] = r.arrival;
  j["value"] = opt_num(r.value);
  j["best"] = r.best ? Json(r.claims[*r.best].claim.str()) : Json(nullptr);
  Json claims = Json::array();
  for (const auto& c : r.claims) claims.push_back(claim_value_json(c));
  j["claims"] = claims;
  return j;
}

std::vector<PayoffExpr> claim_family(const ModelConfig& cfg, const PathSpace& space) {
  std::vector<PayoffExpr> out = cfg.claims;
  if (cfg.claim) out.push_back(*cfg.claim);
  if (cfg.auto_claims || out.empty()) {
    for (auto& c : auto_claim_family(space)) out.push_back(std::move(c));
  }
  return out;
}

template <class T>
int cmd_info_value(const Context& ctx, Json& out) {
  const auto& cfg = ctx.config();
  if (!cfg.book.cash_only()) throw PreconditionError("info-value uses a cash-only book");
  const InfoVariable& z = ctx.variable();
  int arrival = 0;
  if (ctx.t1()) {
    arrival = *ctx.t1();
  } else if (cfg.info.variant == InfoVariant::kDynamic) {
    arrival = cfg.info.arrival;
  }
  Json findings = Json::array();
  const auto report = info_value<T>(ctx.space(), z, arrival, claim_family(cfg, ctx.space()), ctx.valuation());
  out["report"] = info_report_json(report);
  for (const auto& c : report.claims) {
    if (!c.flag.empty()) findings.push_back(c.claim.str() + ": " + c.flag);
  }

  if (cfg.timing) {
    const TimingSpec& t = *cfg.timing;
    const TimeGrid tail_grid = TimeGrid::uniform(t.tail_steps);
    const PathSpace tail = build_lattice(1, tail_grid, iid_ratios(t.tail_steps, 1, t.ratios));
    const auto rows = timing_comparison<T>(t.ratios, t.tail_steps, t.arrivals, z,
                                           claim_family(cfg, tail), ctx.valuation());
    Json table = Json::array();
    std::optional<T> at_zero;
    std::vector<std::optional<T>> interior;
    for (const auto& row : rows) {
      table.push_back({{"arrival", row.arrival}, {"steps", row.steps}, {"value", opt_num(row.report.value)},
                       {"best", row.report.best ? Json(row.report.claims[*row.report.best].claim.str()) : Json(nullptr)}});
      if (row.arrival == 0) {
        at_zero = row.report.value;
      } else {
        interior.push_back(row.report.value);
      }
    }
    const double tol = Arith<T>::kExact ? 0.0 : kDualityTolerance;
    Json checks;
    bool monotone = true;
    bool equal = true;
    for (const auto& v : interior) {
      if (!v) {
        findings.push_back("timing row without a finite value");
        continue;
      }
      if (at_zero && Arith<T>::sign(T(*at_zero - *v), tol) > 0) monotone = false;
      if (interior.front() && !approx_equal(*v, *interior.front(), tol)) equal = false;
    }
    checks["zero_below_interior"] = at_zero ? Json(monotone) : Json(nullptr);
    checks["interior_equal"] = equal;
    out["timing"] = {{"tail_steps", t.tail_steps}, {"ratios", rational_list(t.ratios)}, {"rows", table},
                     {"checks", checks}};
  }
  out["findings"] = findings;
  return findings.empty() ? kExitOk : kExitInfeasible;
}

template <class T>
int cmd_chain(const Context& ctx, Json& out) {
  if (!ctx.config().book.cash_only()) throw PreconditionError("chain uses a cash-only book");
  const auto c = chain_quantities<T>(ctx.space(), ctx.variable(), ctx.claim(), ctx.valuation());
  out["chain"] = chain_json(c);
  Json findings = Json::array();
  const char* names[] = {"hedge_minus", "max_hedge_plus", "max_price_plus", "max_single_level", "price_minus"};
  const auto values = c.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_neg_inf()) findings.push_back(std::string(names[i]) + " is -inf");
  }
  out["findings"] = findings;
  if (!out["chain"]["agree"].get<bool>()) return kExitError;
  return findings.empty() ? kExitOk : kExitInfeasible;
}

template <class T>
int dispatch(const std::string& command, const Context& ctx, Json& out) {
  if (command == "price") return cmd_price<T>(ctx, out);
  if (command == "hedge") return cmd_hedge<T>(ctx, out);
  if (command == "duality") return cmd_duality<T>(ctx, out);
  if (command == "dpp") return cmd_dpp<T>(ctx, out);
  if (command == "info-value") return cmd_info_value<T>(ctx, out);
  if (command == "chain") return cmd_chain<T>(ctx, out);
  throw DomainError("unknown command '" + command + "'");
}

}  // namespace

Report run(const std::string& command, const ModelConfig& config, const RunOptions& options) {
  const auto names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw DomainError("unknown command '" + command + "'");
  }
  const Context ctx(config, options);
  Report report;
  Json& out = report.body;
  out["command"] = command;
  out["mode"] = ctx.mode() == NumericMode::kRational ? "rational" : "float";
  Json request;
  request["t1"] = options.t1 ? Json(*options.t1) : Json(nullptr);
  request["atom"] = options.atom ? Json(*options.atom) : Json(nullptr);
  out["request"] = request;
  out["model"] = ctx.model_echo();
  Json result;
  const auto start = std::chrono::steady_clock::now();
  report.exit_code = ctx.mode() == NumericMode::kRational ? dispatch<Rational>(command, ctx, result)
                                                          : dispatch<double>(command, ctx, result);
  const auto stop = std::chrono::steady_clock::now();
  out["result"] = result;
  if (options.timings) {
    out["timings"] = {{"elapsed_ms", std::chrono::duration<double, std::milli>(stop - start).count()}};
  }
  return report;
}

}  // namespace rip::cli
