#include "rip/valuation.hpp"

#include <algorithm>
#include <set>

#include "rip/errors.hpp"

namespace rip {

template <class T>
bool ChainQuantities<T>::agree(double tol) const {
  const auto v = values();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!extended_equal(v[0], v[i], tol)) return false;
  }
  return true;
}

template <class T>
bool DualityReport<T>::holds(double tol) const {
  return std::all_of(atoms.begin(), atoms.end(),
                     [&](const AtomDuality<T>& a) { return extended_equal(a.hedge, a.price, tol); });
}

template <class T>
bool DualityReport<T>::any_infeasible() const {
  return std::any_of(atoms.begin(), atoms.end(), [](const AtomDuality<T>& a) { return !a.feasible; });
}

namespace {

template <class T>
Extended<T> max_of(const std::vector<Extended<T>>& xs) {
  Extended<T> best = Extended<T>::neg_infinity();
  for (const auto& x : xs) best = max(best, x);
  return best;
}

}  // namespace

template <class T>
DualityReport<T> duality_report(const PathSpace& space, const PathSet& target,
                                const PayoffExpr& claim, const InfoStructure& info,
                                const StaticOptionBook& book, const ValuationOptions& options) {
  const auto hedges = superhedge<T>(space, target, info, claim, book, HedgeOptions{options.solver});
  const auto prices = model_price<T>(space, target, info, claim, book, PriceOptions{options.solver});
  if (hedges.size() != prices.size()) throw InternalConsistencyError("atom tables differ in size");
  DualityReport<T> r;
  for (std::size_t k = 0; k < hedges.size(); ++k) {
    if (hedges[k].target != prices[k].target) throw InternalConsistencyError("atom tables differ");
    AtomDuality<T> a;
    a.atom = hedges[k].target;
    a.hedge = hedges[k].value;
    a.price = prices[k].value;
    a.feasible = prices[k].value.is_finite();
    if (a.hedge.is_finite() && a.price.is_finite()) a.gap = T(a.hedge.value() - a.price.value());
    a.strategy = hedges[k].strategy;
    a.arbitrage = hedges[k].arbitrage;
    a.measure = prices[k].measure;
    a.farkas = prices[k].farkas;
    r.atoms.push_back(std::move(a));
  }
  return r;
}

template <class T>
DualityReport<T> duality_report(const PathSpace& space, const PayoffExpr& claim,
                                const InfoStructure& info, const StaticOptionBook& book,
                                const ValuationOptions& options) {
  DualityReport<T> r = duality_report<T>(space, space.all(), claim, info, book, options);
  if (info.variant == InfoVariant::kMinus && book.cash_only()) {
    r.chain = chain_quantities<T>(space, *info.variable, claim, options);
  }
  return r;
}

template <class T>
ChainQuantities<T> chain_quantities(const PathSpace& space, const InfoVariable& z,
                                    const PayoffExpr& claim, const ValuationOptions& options) {
  const PathSet all = space.all();
  const StaticOptionBook cash;
  const HedgeOptions hopt{options.solver};
  const PriceOptions popt{options.solver};
  const InfoStructure minus = InfoStructure::minus(z);
  const InfoStructure plus = InfoStructure::plus(z);
  ChainQuantities<T> c;

  c.hedge_minus = superhedge<T>(space, all, minus, claim, cash, hopt).at(0).value;

  std::vector<Extended<T>> xs;
  for (const auto& hv : superhedge<T>(space, all, plus, claim, cash, hopt)) xs.push_back(hv.value);
  c.max_hedge_plus = max_of(xs);

  xs.clear();
  for (const auto& pv : model_price<T>(space, all, plus, claim, cash, popt)) xs.push_back(pv.value);
  c.max_price_plus = max_of(xs);

  // Measures over the whole space, forced onto one level set by a support
  // row rather than by restricting the variables.
  const Filtration filtration(space, minus, numeric_mode<T>());
  const TradingSchedule schedule = TradingSchedule::from(filtration, 0, space.steps());
  std::vector<Rational> objective;
  for (const auto& v : claim_table(space, claim, eval_options<T>())) objective.push_back(v.value());
  xs.clear();
  for (const auto& level : filtration.at(0).atoms) {
    const MeasureProblem problem{all, schedule, {}, level};
    xs.push_back(solve_measure_problem<T>(space, problem, cash, objective, popt).value);
  }
  c.max_single_level = max_of(xs);

  c.price_minus = model_price<T>(space, all, minus, claim, cash, popt).at(0).value;
  return c;
}

template <class T>
ClaimInfoValue<T> info_value_claim(const PathSpace& space, const InfoVariable& z, int arrival,
                                   const PayoffExpr& claim, const ValuationOptions& options) {
  if (arrival < 0 || arrival >= space.steps()) {
    throw DomainError("arrival index must lie in [0, " + std::to_string(space.steps()) + ")");
  }
  const PathSet all = space.all();
  const StaticOptionBook cash;
  const HedgeOptions hopt{options.solver};
  ClaimInfoValue<T> r;
  r.claim = claim;
  r.arrival = arrival;
  r.hedge_plain = superhedge<T>(space, all, InfoStructure::none(), claim, cash, hopt).at(0).value;
  if (arrival == 0) {
    r.hedge_informed = superhedge<T>(space, all, InfoStructure::minus(z), claim, cash, hopt).at(0).value;
    for (const auto& hv : superhedge<T>(space, all, InfoStructure::plus(z), claim, cash, hopt)) {
      r.plus_table.push_back(hv.value);
    }
  } else {
    if (!check_scaling_form(space, z, arrival)) {
      throw PreconditionError("information variable '" + z.name + "' is not in scaling form at index " +
                              std::to_string(arrival));
    }
    r.hedge_informed =
        superhedge<T>(space, all, InfoStructure::dynamic(z, arrival), claim, cash, hopt).at(0).value;
  }

  if (r.hedge_plain.is_neg_inf()) {
    r.flag = "uninformed superhedging cost is -inf (arbitrage without the information)";
    return r;
  }
  if (r.hedge_informed.is_neg_inf()) {
    r.flag = "informed superhedging cost is -inf (the information admits arbitrage)";
    return r;
  }
  r.value = T(r.hedge_plain.value() - r.hedge_informed.value());
  if (arrival == 0) {
    const Extended<T> worst = max_of(r.plus_table);
    if (worst.is_finite()) r.plus_infimum = T(r.hedge_plain.value() - worst.value());
  }
  return r;
}

template <class T>
InfoValueReport<T> info_value(const PathSpace& space, const InfoVariable& z, int arrival,
                              const std::vector<PayoffExpr>& claims, const ValuationOptions& options) {
  for (const auto& c : claims) {
    for (const auto& v : claim_table(space, c)) {
      if (v.value() < 0 || v.value() > 1) {
        throw PreconditionError("claim '" + c.str() + "' leaves [0, 1] (value " +
                                to_string(v.value()) + ")");
      }
    }
  }
  InfoValueReport<T> r;
  r.arrival = arrival;
  for (std::size_t k = 0; k < claims.size(); ++k) {
    r.claims.push_back(info_value_claim<T>(space, z, arrival, claims[k], options));
    const auto& v = r.claims.back().value;
    if (v && (!r.value || *r.value < *v)) {
      r.value = *v;
      r.best = k;
    }
  }
  return r;
}

namespace {

void check_transport_grid(int tail_steps, int arrival, const TimeGrid& grid) {
  if (!grid.is_uniform()) throw IncompatibleGridError("transport needs a uniform grid");
  if (arrival < 0 || grid.steps() - arrival != tail_steps) {
    throw IncompatibleGridError("grid with " + std::to_string(grid.steps()) + " steps and arrival " +
                                std::to_string(arrival) + " does not leave " +
                                std::to_string(tail_steps) + " tail steps");
  }
}

}  // namespace

PayoffExpr transport_claim(const PayoffExpr& claim, int tail_steps, int arrival, const TimeGrid& grid) {
  check_transport_grid(tail_steps, arrival, grid);
  claim.validate(std::max(1, claim.max_asset()), tail_steps);
  auto shift = [&](const GridIndex& g) { return GridIndex::at(arrival + g.resolve(tail_steps)); };
  auto anchor = [&](int asset) { return PayoffExpr::price(asset, GridIndex::at(arrival)); };
  return substitute_prices(
      claim,
      [&](int asset, GridIndex time) {
        return PayoffExpr::call(Function::kNRat, {PayoffExpr::price(asset, shift(time)), anchor(asset)});
      },
      [&](const PayoffExpr::RunningExtreme& x) {
        const GridIndex from = shift(x.from);
        const GridIndex to = x.to.terminal ? GridIndex::end() : shift(x.to);
        const PayoffExpr inner = x.is_max ? PayoffExpr::running_max(x.asset, from, to)
                                          : PayoffExpr::running_min(x.asset, from, to);
        return PayoffExpr::call(Function::kNRat, {inner, anchor(x.asset)});
      });
}

InfoVariable transport_info(const InfoVariable& z, int tail_steps, int arrival, const TimeGrid& grid) {
  PayoffExpr lifted = transport_claim(z.labeler, tail_steps, arrival, grid);
  if (arrival > 0) {
    const PayoffExpr a = PayoffExpr::price(1, GridIndex::at(arrival));
    const PayoffExpr zero = PayoffExpr::constant(0);
    lifted = PayoffExpr::indicator(CompareOp::kEqual, a, zero) +
             PayoffExpr::indicator(CompareOp::kGreater, a, zero) * lifted;
  }
  return {z.name + "@" + std::to_string(arrival), std::move(lifted)};
}

std::vector<PayoffExpr> auto_claim_family(const PathSpace& space, std::size_t max_claims) {
  std::set<Rational> level_set;
  for (const auto& p : space.paths()) level_set.insert(p.at(0, space.steps()));
  const std::vector<Rational> levels(level_set.begin(), level_set.end());
  const PayoffExpr terminal = PayoffExpr::price(1, GridIndex::end());
  std::vector<PayoffExpr> out;
  auto push = [&](PayoffExpr e) {
    if (out.size() < max_claims) out.push_back(std::move(e));
  };
  for (std::size_t i = 1; i < levels.size(); ++i) {
    push(PayoffExpr::indicator(CompareOp::kGreaterEqual, terminal, PayoffExpr::constant(levels[i])));
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    push(PayoffExpr::indicator(CompareOp::kLessEqual, terminal, PayoffExpr::constant(levels[i])));
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      push(PayoffExpr::indicator(CompareOp::kGreaterEqual, PayoffExpr::running_min(1),
                                 PayoffExpr::constant(levels[i])) *
           PayoffExpr::indicator(CompareOp::kLessEqual, PayoffExpr::running_max(1),
                                 PayoffExpr::constant(levels[j])));
    }
  }
  return out;
}

template <class T>
std::vector<TimingRow<T>> timing_comparison(const std::vector<Rational>& ratios, int tail_steps,
                                            const std::vector<int>& arrivals, const InfoVariable& z,
                                            const std::vector<PayoffExpr>& claims,
                                            const ValuationOptions& options) {
  std::vector<TimingRow<T>> rows;
  for (int arrival : arrivals) {
    const int steps = arrival + tail_steps;
    const TimeGrid grid = TimeGrid::uniform(steps);
    const PathSpace space = build_lattice(1, grid, iid_ratios(steps, 1, ratios));
    std::vector<PayoffExpr> lifted;
    for (const auto& c : claims) lifted.push_back(transport_claim(c, tail_steps, arrival, grid));
    TimingRow<T> row;
    row.arrival = arrival;
    row.steps = steps;
    row.report = info_value<T>(space, transport_info(z, tail_steps, arrival, grid), arrival, lifted, options);
    rows.push_back(std::move(row));
  }
  return rows;
}

#define RIP_INSTANTIATE(T)                                                                          \
  template struct ChainQuantities<T>;                                                               \
  template struct DualityReport<T>;                                                                 \
  template DualityReport<T> duality_report(const PathSpace&, const PayoffExpr&, const InfoStructure&, \
                                           const StaticOptionBook&, const ValuationOptions&);       \
  template DualityReport<T> duality_report(const PathSpace&, const PathSet&, const PayoffExpr&,     \
                                           const InfoStructure&, const StaticOptionBook&,           \
                                           const ValuationOptions&);                                \
  template ChainQuantities<T> chain_quantities(const PathSpace&, const InfoVariable&,              \
                                               const PayoffExpr&, const ValuationOptions&);         \
  template ClaimInfoValue<T> info_value_claim(const PathSpace&, const InfoVariable&, int,          \
                                              const PayoffExpr&, const ValuationOptions&);          \
  template InfoValueReport<T> info_value(const PathSpace&, const InfoVariable&, int,               \
                                         const std::vector<PayoffExpr>&, const ValuationOptions&);  \
  template std::vector<TimingRow<T>> timing_comparison(const std::vector<Rational>&, int,          \
                                                       const std::vector<int>&, const InfoVariable&, \
                                                       const std::vector<PayoffExpr>&,              \
                                                       const ValuationOptions&);

RIP_INSTANTIATE(Rational)
RIP_INSTANTIATE(double)

#undef RIP_INSTANTIATE

}  // namespace rip
