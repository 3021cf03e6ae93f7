#include "rip/hedging.hpp"

#include <algorithm>
#include <cmath>

#include "rip/errors.hpp"

namespace rip {

TradingSchedule TradingSchedule::from(const Filtration& filtration, int first, int last) {
  if (first < 0 || last > filtration.steps() || first > last) {
    throw DomainError("trading interval [" + std::to_string(first) + ", " + std::to_string(last) +
                      ") outside the grid");
  }
  TradingSchedule s;
  s.first_step = first;
  for (int t = first; t < last; ++t) s.partitions.push_back(filtration.at(t));
  return s;
}

ClaimTable claim_table(const PathSpace& space, const PayoffExpr& claim, const EvalOptions& options) {
  claim.validate(space.assets(), space.steps());
  ClaimTable out;
  out.reserve(space.size());
  for (const auto& p : space.paths()) out.emplace_back(evaluate(claim, p, options));
  return out;
}

template <class T>
std::vector<T> Strategy<T>::holding(int t, std::size_t path, int assets) const {
  const int j = t - schedule.first_step;
  if (j < 0 || j >= static_cast<int>(holdings.size())) {
    return std::vector<T>(static_cast<std::size_t>(assets), T(0));
  }
  const std::size_t atom = schedule.partitions[static_cast<std::size_t>(j)].atom_of.at(path);
  return holdings[static_cast<std::size_t>(j)].at(atom);
}

template <class T>
T Strategy<T>::cost(const StaticOptionBook& book) const {
  T c(0);
  for (std::size_t l = 0; l < static_position.size(); ++l) {
    c += static_position[l] * Arith<T>::from(book.entry(l).price);
  }
  return c;
}

template <class T>
T gains(const PathSpace& space, const Strategy<T>& strategy, std::size_t path, int t1, int t2) {
  if (t1 > t2 || t1 < 0 || t2 > space.steps()) throw DomainError("invalid gains interval");
  const Path& p = space.path(path);
  T g(0);
  for (int t = t1; t < t2; ++t) {
    const std::vector<T> h = strategy.holding(t, path, space.assets());
    for (int a = 0; a < space.assets(); ++a) {
      if (Arith<T>::sign(h[a], 0.0) == 0) continue;
      g += h[a] * Arith<T>::from(p.at(a, t + 1) - p.at(a, t));
    }
  }
  return g;
}

template <class T>
T terminal_value(const PathSpace& space, const StaticOptionBook& book, const Strategy<T>& strategy,
                 std::size_t path) {
  T v = gains(space, strategy, path, strategy.schedule.first_step, strategy.schedule.last_step());
  for (std::size_t l = 0; l < strategy.static_position.size(); ++l) {
    if (Arith<T>::sign(strategy.static_position[l], 0.0) == 0) continue;
    v += strategy.static_position[l] * Arith<T>::from(evaluate(book.entry(l).payoff, space.path(path)));
  }
  return v;
}

template <class T>
EvalOptions eval_options() {
  if constexpr (Arith<T>::kExact) {
    return {};
  } else {
    return EvalOptions{Rational(kLabelTolerance)};
  }
}

namespace {

struct HedgeLayout {
  std::size_t statics = 0;
  // var_index[j][atom][asset], or npos
  std::vector<std::vector<std::vector<std::size_t>>> var_index;
  std::vector<std::size_t> active;  // target paths with a finite claim
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

lp::LinearProgram<Rational> build_hedge_lp(const PathSpace& space, const PathSet& target,
                                           const TradingSchedule& schedule,
                                           const ClaimTable& claim, const StaticOptionBook& book,
                                           HedgeLayout& layout) {
  lp::LinearProgram<Rational> lp;
  lp.sense = lp::Sense::kMinimize;
  layout.statics = book.size();
  for (const auto& e : book.entries()) lp.add_variable(e.price, lp::Bound<Rational>::free());

  for (auto i : target) {
    if (claim.at(i).is_finite()) layout.active.push_back(i);
  }
  const int assets = space.assets();
  layout.var_index.resize(schedule.partitions.size());
  for (std::size_t j = 0; j < schedule.partitions.size(); ++j) {
    const Partition& part = schedule.partitions[j];
    const int t = schedule.first_step + static_cast<int>(j);
    layout.var_index[j].assign(part.size(), std::vector<std::size_t>(assets, kNone));
    for (auto i : layout.active) {
      auto& slots = layout.var_index[j][part.atom_of[i]];
      const Path& p = space.path(i);
      for (int a = 0; a < assets; ++a) {
        if (slots[a] == kNone && p.at(a, t + 1) != p.at(a, t)) {
          slots[a] = lp.add_variable(Rational(0), lp::Bound<Rational>::free());
        }
      }
    }
  }

  std::vector<std::vector<Rational>> static_payoffs(book.size());
  for (std::size_t l = 1; l < book.size(); ++l) {
    for (auto i : layout.active) static_payoffs[l].push_back(evaluate(book.entry(l).payoff, space.path(i)));
  }
  for (std::size_t r = 0; r < layout.active.size(); ++r) {
    const std::size_t i = layout.active[r];
    std::vector<Rational> row(lp.num_vars());
    row[0] = 1;
    for (std::size_t l = 1; l < book.size(); ++l) row[l] = static_payoffs[l][r];
    const Path& p = space.path(i);
    for (std::size_t j = 0; j < schedule.partitions.size(); ++j) {
      const int t = schedule.first_step + static_cast<int>(j);
      const auto& slots = layout.var_index[j][schedule.partitions[j].atom_of[i]];
      for (int a = 0; a < assets; ++a) {
        if (slots[a] != kNone) row[slots[a]] = p.at(a, t + 1) - p.at(a, t);
      }
    }
    lp.add_row(std::move(row), lp::Relation::kGreaterEqual, claim[i].value());
  }
  return lp;
}

template <class T>
Strategy<T> strategy_from(const std::vector<T>& x, const TradingSchedule& schedule,
                          const HedgeLayout& layout, int assets) {
  Strategy<T> s;
  s.static_position.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(layout.statics));
  s.schedule = schedule;
  s.holdings.resize(layout.var_index.size());
  for (std::size_t j = 0; j < layout.var_index.size(); ++j) {
    s.holdings[j].assign(layout.var_index[j].size(), std::vector<T>(assets, T(0)));
    for (std::size_t atom = 0; atom < layout.var_index[j].size(); ++atom) {
      for (int a = 0; a < assets; ++a) {
        const std::size_t v = layout.var_index[j][atom][a];
        if (v != kNone) s.holdings[j][atom][a] = x[v];
      }
    }
  }
  return s;
}

template <class T>
bool dominates(const T& lhs, const Rational& rhs) {
  if constexpr (Arith<T>::kExact) {
    return lhs >= rhs;
  } else {
    const double r = rhs.get_d();
    return lhs >= r - kDualityTolerance * std::max(1.0, std::abs(r));
  }
}

}  // namespace

template <class T>
HedgeValue<T> superhedge_table(const PathSpace& space, const PathSet& target,
                               const TradingSchedule& schedule, const ClaimTable& claim,
                               const StaticOptionBook& book, const HedgeOptions& options) {
  if (target.empty()) throw DomainError("superhedge on an empty target set");
  check_subset(space, target);
  if (claim.size() != space.size()) throw DimensionError("claim table does not match the space");
  book.validate(space);
  if (schedule.first_step < 0 || schedule.last_step() > space.steps()) {
    throw DomainError("trading schedule outside the grid");
  }

  HedgeLayout layout;
  const lp::LinearProgram<Rational> exact = build_hedge_lp(space, target, schedule, claim, book, layout);
  const lp::LinearProgram<T> program = lp::convert<T>(exact);
  const lp::Outcome<T> out = lp::solve(program, options.solver);

  HedgeValue<T> hv;
  hv.target = target;
  hv.pivots = out.pivots;
  const int assets = space.assets();
  switch (out.status) {
    case lp::Status::kOptimal: {
      Strategy<T> s = strategy_from(out.primal, schedule, layout, assets);
      for (auto i : layout.active) {
        if (!dominates(terminal_value(space, book, s, i), claim[i].value())) {
          throw InternalConsistencyError("extracted strategy fails to superhedge path " +
                                         std::to_string(i));
        }
      }
      hv.value = Extended<T>(s.cost(book));
      hv.strategy = std::move(s);
      break;
    }
    case lp::Status::kUnbounded: {
      Strategy<T> s = strategy_from(out.ray, schedule, layout, assets);
      const T c = s.cost(book);
      if (Arith<T>::sign(c, options.solver.tolerance) >= 0) {
        throw InternalConsistencyError("arbitrage ray has nonnegative cost");
      }
      // Normalise to cost -1.
      const T scale = T(-1) / c;
      for (auto& x : s.static_position) x *= scale;
      for (auto& step : s.holdings) {
        for (auto& atom : step) {
          for (auto& x : atom) x *= scale;
        }
      }
      for (auto i : layout.active) {
        if (!dominates(terminal_value(space, book, s, i), Rational(0))) {
          throw InternalConsistencyError("arbitrage ray loses money on path " + std::to_string(i));
        }
      }
      hv.value = Extended<T>::neg_infinity();
      hv.arbitrage = std::move(s);
      break;
    }
    case lp::Status::kInfeasible:
      // Cash is free and enters every row, so the program is always feasible.
      throw InternalConsistencyError("superhedging program reported infeasible");
  }
  return hv;
}

template <class T>
std::vector<HedgeValue<T>> superhedge(const PathSpace& space, const PathSet& target,
                                      const InfoStructure& info, const PayoffExpr& claim,
                                      const StaticOptionBook& book, const HedgeOptions& options) {
  if (target.empty()) throw DomainError("superhedge on an empty target set");
  check_subset(space, target);
  const Filtration filtration(space, info, numeric_mode<T>());
  const TradingSchedule schedule = TradingSchedule::from(filtration, 0, space.steps());
  const ClaimTable table = claim_table(space, claim, eval_options<T>());
  std::vector<HedgeValue<T>> out;
  for (const auto& atom : restrict_atoms(filtration.at(-1), target)) {
    out.push_back(superhedge_table<T>(space, atom, schedule, table, book, options));
  }
  return out;
}

template <class T>
const HedgeValue<T>& value_at(const std::vector<HedgeValue<T>>& table, std::size_t path) {
  for (const auto& hv : table) {
    if (std::binary_search(hv.target.begin(), hv.target.end(), path)) return hv;
  }
  throw DomainError("path " + std::to_string(path) + " is not covered by the table");
}

template <class T>
HedgeValue<T> superhedge_interval(const PathSpace& space, std::size_t path, int arrival,
                                  const InfoStructure& info, const PayoffExpr& claim,
                                  const HedgeOptions& options) {
  if (path >= space.size()) throw DimensionError("path index out of range");
  const Filtration filtration(space, info, numeric_mode<T>());
  const TradingSchedule schedule = TradingSchedule::from(filtration, arrival, space.steps());
  const ClaimTable table = claim_table(space, claim, eval_options<T>());
  return superhedge_table<T>(space, f_atom(space, path, arrival), schedule, table,
                             StaticOptionBook(), options);
}

void check_dpp_preconditions(const PathSpace& space, const InfoStructure& info, int arrival,
                             const StaticOptionBook& book) {
  if (!book.cash_only()) throw PreconditionError("dynamic programming needs a cash-only book");
  if (arrival < 0 || arrival > space.steps()) throw DomainError("arrival index outside the grid");
  switch (info.variant) {
    case InfoVariant::kNone:
      return;
    case InfoVariant::kDynamic:
      info.validate(space);
      if (info.arrival != arrival) {
        throw PreconditionError("arrival index differs from the information arrival");
      }
      if (!check_scaling_form(space, *info.variable, arrival)) {
        throw PreconditionError("information variable '" + info.variable->name +
                                "' is not in scaling form at index " + std::to_string(arrival));
      }
      return;
    default:
      throw PreconditionError("dynamic programming needs no information or dynamic arrival");
  }
}

template <class T>
DppResult<T> dpp_superhedge(const PathSpace& space, const PayoffExpr& claim, int arrival,
                            const InfoStructure& info, const HedgeOptions& options) {
  const StaticOptionBook cash;
  check_dpp_preconditions(space, info, arrival, cash);
  const Filtration filtration(space, info, numeric_mode<T>());
  const ClaimTable table = claim_table(space, claim, eval_options<T>());
  const PathSet all = space.all();

  DppResult<T> r;
  r.direct = superhedge_table<T>(space, all, TradingSchedule::from(filtration, 0, space.steps()),
                                 table, cash, options)
                 .value;

  const TradingSchedule tail = TradingSchedule::from(filtration, arrival, space.steps());
  ClaimTable outer(space.size());
  for (const auto& atom : prefix_partition(space, arrival).atoms) {
    const HedgeValue<T> hv = superhedge_table<T>(space, atom, tail, table, cash, options);
    r.inner.push_back({atom, hv.value});
    for (auto i : atom) {
      if (hv.value.is_finite()) {
        if constexpr (Arith<T>::kExact) {
          outer[i] = Extended<Rational>(hv.value.value());
        } else {
          outer[i] = Extended<Rational>(Rational(hv.value.value()));
        }
      } else {
        outer[i] = Extended<Rational>::neg_infinity();
      }
    }
  }
  const Filtration natural = Filtration::natural(space);
  r.composed = superhedge_table<T>(space, all, TradingSchedule::from(natural, 0, arrival), outer, cash,
                                   options)
                   .value;
  return r;
}

template <class T>
HedgeValue<T> approx_superhedge(const PathSpace& space, const PathSet& core, const Rational& epsilon,
                                const PayoffExpr& claim, const StaticOptionBook& book,
                                const HedgeOptions& options) {
  if (core.empty()) throw DomainError("approximate superhedge on an empty set");
  const PathSet fat = fatten(space, core, epsilon);
  const Filtration natural = Filtration::natural(space);
  return superhedge_table<T>(space, fat, TradingSchedule::from(natural, 0, space.steps()),
                             claim_table(space, claim, eval_options<T>()), book, options);
}

#define RIP_INSTANTIATE(T)                                                                        \
  template struct Strategy<T>;                                                                    \
  template T gains(const PathSpace&, const Strategy<T>&, std::size_t, int, int);                  \
  template T terminal_value(const PathSpace&, const StaticOptionBook&, const Strategy<T>&,        \
                            std::size_t);                                                         \
  template EvalOptions eval_options<T>();                                                         \
  template HedgeValue<T> superhedge_table(const PathSpace&, const PathSet&,                      \
                                          const TradingSchedule&, const ClaimTable&,              \
                                          const StaticOptionBook&, const HedgeOptions&);          \
  template std::vector<HedgeValue<T>> superhedge(const PathSpace&, const PathSet&,               \
                                                 const InfoStructure&, const PayoffExpr&,         \
                                                 const StaticOptionBook&, const HedgeOptions&);   \
  template const HedgeValue<T>& value_at(const std::vector<HedgeValue<T>>&, std::size_t);        \
  template HedgeValue<T> superhedge_interval(const PathSpace&, std::size_t, int,                 \
                                             const InfoStructure&, const PayoffExpr&,             \
                                             const HedgeOptions&);                                \
  template DppResult<T> dpp_superhedge(const PathSpace&, const PayoffExpr&, int,                 \
                                       const InfoStructure&, const HedgeOptions&);                \
  template HedgeValue<T> approx_superhedge(const PathSpace&, const PathSet&, const Rational&,    \
                                           const PayoffExpr&, const StaticOptionBook&,            \
                                           const HedgeOptions&);

RIP_INSTANTIATE(Rational)
RIP_INSTANTIATE(double)

#undef RIP_INSTANTIATE

}  // namespace rip
