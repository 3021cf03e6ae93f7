#include "rip/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "rip/errors.hpp"

namespace rip {

template <class T>
T MartingaleMeasure<T>::mass(const PathSet& set) const {
  T m(0);
  for (auto i : set) m += weights.at(i);
  return m;
}

template <class T>
PathSet MartingaleMeasure<T>::support(double tol) const {
  PathSet s;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (Arith<T>::sign(weights[i], tol) > 0) s.push_back(i);
  }
  return s;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::vector<std::size_t> column_map(const PathSpace& space, const PathSet& variables) {
  std::vector<std::size_t> col(space.size(), kNone);
  for (std::size_t r = 0; r < variables.size(); ++r) col[variables[r]] = r;
  return col;
}

bool all_zero(const std::vector<Rational>& row) {
  return std::all_of(row.begin(), row.end(), [](const Rational& x) { return sgn(x) == 0; });
}

PathSet intersect(const PathSet& a, const PathSet& b) {
  PathSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <class T>
bool near_zero(const T& x, double tol) {
  if constexpr (Arith<T>::kExact) {
    return sgn(x) == 0;
  } else {
    return std::abs(x) <= tol;
  }
}

template <class T>
T as_scalar(const Rational& x) {
  return Arith<T>::from(x);
}

std::vector<Rational> objective_from(const ClaimTable& table) {
  std::vector<Rational> out;
  out.reserve(table.size());
  for (const auto& v : table) {
    if (!v.is_finite()) throw DomainError("measure objective must be finite on every path");
    out.push_back(v.value());
  }
  return out;
}

template <class T>
Rational to_rational(const T& x) {
  if constexpr (Arith<T>::kExact) {
    return x;
  } else {
    return Rational(x);
  }
}

// Solves an LP whose first |variables| columns are path weights and turns
// the outcome into a PriceValue. `audit` covers the base constraints; extra
// rows are covered by the certificate check.
template <class T>
PriceValue<T> finish(const PathSpace& space, const PathSet& variables,
                     const lp::LinearProgram<Rational>& exact, const MeasureProblem& audit,
                     const StaticOptionBook& audit_book, const std::vector<Rational>& objective,
                     const PriceOptions& options) {
  const lp::LinearProgram<T> program = lp::convert<T>(exact);
  const lp::Outcome<T> out = lp::solve(program, options.solver);
  PriceValue<T> pv;
  pv.target = variables;
  pv.pivots = out.pivots;
  if (!lp::verify_certificate(program, out)) {
    throw InternalConsistencyError("measure LP certificate failed verification");
  }
  switch (out.status) {
    case lp::Status::kOptimal: {
      MartingaleMeasure<T> m;
      m.weights.assign(space.size(), T(0));
      for (std::size_t r = 0; r < variables.size(); ++r) m.weights[variables[r]] = out.primal[r];
      if (!audit_measure(space, m, audit, audit_book)) {
        throw InternalConsistencyError("optimal measure failed its audit");
      }
      T value(0);
      if (!objective.empty()) {
        for (auto i : variables) value += m.weights[i] * as_scalar<T>(objective[i]);
      }
      pv.value = Extended<T>(value);
      pv.measure = std::move(m);
      break;
    }
    case lp::Status::kInfeasible:
      pv.value = Extended<T>::neg_infinity();
      pv.farkas = out.dual;
      break;
    case lp::Status::kUnbounded:
      throw InternalConsistencyError("measure LP reported unbounded");
  }
  return pv;
}

}  // namespace

lp::LinearProgram<Rational> measure_lp(const PathSpace& space, const MeasureProblem& problem,
                                       const StaticOptionBook& book,
                                       const std::vector<Rational>& objective) {
  if (problem.variables.empty()) throw DomainError("measure class on an empty set");
  check_subset(space, problem.variables);
  if (!objective.empty() && objective.size() != space.size()) {
    throw DimensionError("objective does not match the space");
  }
  book.validate(space);
  const std::size_t n = problem.variables.size();
  const auto col = column_map(space, problem.variables);

  lp::LinearProgram<Rational> lp;
  lp.sense = lp::Sense::kMaximize;
  for (auto i : problem.variables) {
    lp.add_variable(objective.empty() ? Rational(0) : objective[i], lp::Bound<Rational>::nonnegative());
  }
  lp.add_row(std::vector<Rational>(n, Rational(1)), lp::Relation::kEqual, Rational(1));

  const int assets = space.assets();
  for (std::size_t j = 0; j < problem.martingale.partitions.size(); ++j) {
    const int t = problem.martingale.first_step + static_cast<int>(j);
    for (const auto& atom : restrict_atoms(problem.martingale.partitions[j], problem.variables)) {
      for (int a = 0; a < assets; ++a) {
        std::vector<Rational> row(n);
        for (auto i : atom) row[col[i]] = space.path(i).at(a, t + 1) - space.path(i).at(a, t);
        if (!all_zero(row)) lp.add_row(std::move(row), lp::Relation::kEqual, Rational(0));
      }
    }
  }

  for (const auto& raw : problem.calibration_atoms) {
    const PathSet atom = intersect(raw, problem.variables);
    for (std::size_t l = 1; l < book.size(); ++l) {
      std::vector<Rational> row(n);
      for (auto i : atom) row[col[i]] = evaluate(book.entry(l).payoff, space.path(i)) - book.entry(l).price;
      if (!all_zero(row)) lp.add_row(std::move(row), lp::Relation::kEqual, Rational(0));
    }
  }

  if (problem.support) {
    std::vector<Rational> row(n);
    for (auto i : problem.variables) {
      if (!std::binary_search(problem.support->begin(), problem.support->end(), i)) row[col[i]] = 1;
    }
    if (!all_zero(row)) lp.add_row(std::move(row), lp::Relation::kEqual, Rational(0));
  }
  return lp;
}

lp::LinearProgram<Rational> build_measure_lp(const PathSpace& space, const PathSet& target,
                                             const InfoStructure& info,
                                             const StaticOptionBook& book, int first, int last,
                                             const std::optional<PayoffExpr>& claim) {
  const Filtration filtration(space, info);
  MeasureProblem problem{target, TradingSchedule::from(filtration, first, last),
                         restrict_atoms(filtration.at(-1), target), std::nullopt};
  std::vector<Rational> objective;
  if (claim) objective = objective_from(claim_table(space, *claim));
  return measure_lp(space, problem, book, objective);
}

template <class T>
bool audit_measure(const PathSpace& space, const MartingaleMeasure<T>& measure,
                   const MeasureProblem& problem, const StaticOptionBook& book, double tol) {
  const auto& w = measure.weights;
  if (w.size() != space.size()) return false;
  const auto col = column_map(space, problem.variables);
  T total(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (col[i] == kNone) {
      if (!near_zero(w[i], tol)) return false;
      continue;
    }
    if (Arith<T>::sign(w[i], tol) < 0) return false;
    total += w[i];
  }
  if (!near_zero(T(total - T(1)), tol)) return false;

  const int assets = space.assets();
  for (std::size_t j = 0; j < problem.martingale.partitions.size(); ++j) {
    const int t = problem.martingale.first_step + static_cast<int>(j);
    for (const auto& atom : problem.martingale.partitions[j].atoms) {
      for (int a = 0; a < assets; ++a) {
        T drift(0);
        for (auto i : atom) drift += w[i] * as_scalar<T>(space.path(i).at(a, t + 1) - space.path(i).at(a, t));
        if (!near_zero(drift, tol)) return false;
      }
    }
  }
  for (const auto& atom : problem.calibration_atoms) {
    for (std::size_t l = 1; l < book.size(); ++l) {
      T err(0);
      for (auto i : atom) {
        err += w[i] * as_scalar<T>(evaluate(book.entry(l).payoff, space.path(i)) - book.entry(l).price);
      }
      if (!near_zero(err, tol)) return false;
    }
  }
  if (problem.support) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!std::binary_search(problem.support->begin(), problem.support->end(), i) &&
          !near_zero(w[i], tol)) {
        return false;
      }
    }
  }
  return true;
}

template <class T>
PriceValue<T> solve_measure_problem(const PathSpace& space, const MeasureProblem& problem,
                                    const StaticOptionBook& book,
                                    const std::vector<Rational>& objective,
                                    const PriceOptions& options) {
  const lp::LinearProgram<Rational> exact = measure_lp(space, problem, book, objective);
  return finish<T>(space, problem.variables, exact, problem, book, objective, options);
}

template <class T>
std::vector<PriceValue<T>> model_price(const PathSpace& space, const PathSet& target,
                                       const InfoStructure& info, const PayoffExpr& claim,
                                       const StaticOptionBook& book, const PriceOptions& options) {
  if (target.empty()) throw DomainError("model price on an empty target set");
  check_subset(space, target);
  const Filtration filtration(space, info, numeric_mode<T>());
  const TradingSchedule schedule = TradingSchedule::from(filtration, 0, space.steps());
  const std::vector<Rational> objective = objective_from(claim_table(space, claim, eval_options<T>()));
  std::vector<PriceValue<T>> out;
  for (const auto& atom : restrict_atoms(filtration.at(-1), target)) {
    MeasureProblem problem{atom, schedule, {atom}, std::nullopt};
    out.push_back(solve_measure_problem<T>(space, problem, book, objective, options));
  }
  return out;
}

template <class T>
const PriceValue<T>& value_at(const std::vector<PriceValue<T>>& table, std::size_t path) {
  for (const auto& pv : table) {
    if (std::binary_search(pv.target.begin(), pv.target.end(), path)) return pv;
  }
  throw DomainError("path " + std::to_string(path) + " is not covered by the table");
}

template <class T>
std::vector<ConditionalPiece<T>> condition_measure(const PathSpace& space,
                                                   const MartingaleMeasure<T>& measure,
                                                   const Partition& partition) {
  if (measure.weights.size() != space.size() || partition.atom_of.size() != space.size()) {
    throw DimensionError("measure or partition does not match the space");
  }
  std::vector<ConditionalPiece<T>> out;
  for (const auto& atom : partition.atoms) {
    const T mass = measure.mass(atom);
    if (Arith<T>::sign(mass, kSolverTolerance) <= 0) continue;
    MartingaleMeasure<T> c;
    c.weights.assign(space.size(), T(0));
    for (auto i : atom) c.weights[i] = measure.weights[i] / mass;
    out.push_back({atom, mass, std::move(c)});
  }
  return out;
}

template <class T>
MartingaleMeasure<T> concatenate_measure(const PathSpace& space, int arrival,
                                         const std::vector<T>& prefix_masses,
                                         const std::vector<std::optional<MartingaleMeasure<T>>>& kernel) {
  const Partition atoms = prefix_partition(space, arrival);
  if (prefix_masses.size() != atoms.size() || kernel.size() != atoms.size()) {
    throw DimensionError("prefix masses and kernel must have one entry per atom");
  }
  T total(0);
  for (const auto& m : prefix_masses) {
    if (Arith<T>::sign(m, kSolverTolerance) < 0) throw DomainError("negative prefix mass");
    total += m;
  }
  if (!near_zero(T(total - T(1)), kDualityTolerance)) throw DomainError("prefix masses do not sum to one");

  MartingaleMeasure<T> out;
  out.weights.assign(space.size(), T(0));
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (Arith<T>::sign(prefix_masses[a], kSolverTolerance) == 0) continue;
    if (!kernel[a]) throw DomainError("no kernel measure on atom " + std::to_string(a) + " of positive mass");
    const auto& k = kernel[a]->weights;
    if (k.size() != space.size()) throw DimensionError("kernel measure does not match the space");
    T km(0);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (atoms.atom_of[i] != a) {
        if (!near_zero(k[i], kSolverTolerance)) {
          throw DomainError("kernel measure on atom " + std::to_string(a) + " charges path " +
                            std::to_string(i) + " outside the atom");
        }
        continue;
      }
      km += k[i];
      out.weights[i] = prefix_masses[a] * k[i];
    }
    if (!near_zero(T(km - T(1)), kDualityTolerance)) {
      throw DomainError("kernel measure on atom " + std::to_string(a) + " does not have mass one");
    }
  }
  return out;
}

template <class T>
MartingaleMeasure<T> concatenate_measure(const PathSpace& space, int arrival,
                                         const MartingaleMeasure<T>& prefix,
                                         const std::vector<std::optional<MartingaleMeasure<T>>>& kernel) {
  const Partition atoms = prefix_partition(space, arrival);
  std::vector<T> masses;
  for (const auto& atom : atoms.atoms) masses.push_back(prefix.mass(atom));
  return concatenate_measure(space, arrival, masses, kernel);
}

template <class T>
PriceValue<T> approx_price(const PathSpace& space, const PathSet& core, const Rational& eta,
                           const PayoffExpr& claim, const StaticOptionBook& book,
                           const PriceOptions& options) {
  if (core.empty()) throw DomainError("approximate price on an empty set");
  if (sgn(eta) <= 0) throw DomainError("eta must be positive");
  check_subset(space, core);
  book.validate(space);
  const Rational shift = eta / 1000;
  const PathSet all = space.all();
  const Filtration natural = Filtration::natural(space);
  const MeasureProblem base{all, TradingSchedule::from(natural, 0, space.steps()), {}, std::nullopt};
  const std::vector<Rational> objective = objective_from(claim_table(space, claim, eval_options<T>()));
  lp::LinearProgram<Rational> lp = measure_lp(space, base, StaticOptionBook(), objective);

  // Mass on the fattened core; vacuous once 1 - eta is negative.
  if (1 - eta >= 0) {
    const PathSet fat = fatten(space, core, eta);
    std::vector<Rational> row(space.size());
    for (auto i : fat) row[i] = 1;
    lp.add_row(std::move(row), lp::Relation::kGreaterEqual, 1 - eta + shift);
  }
  for (std::size_t l = 1; l < book.size(); ++l) {
    std::vector<Rational> row(space.size());
    for (auto i : all) row[i] = evaluate(book.entry(l).payoff, space.path(i));
    lp.add_row(row, lp::Relation::kLessEqual, book.entry(l).price + eta - shift);
    lp.add_row(std::move(row), lp::Relation::kGreaterEqual, book.entry(l).price - eta + shift);
  }
  return finish<T>(space, all, lp, base, StaticOptionBook(), objective, options);
}

template <class T>
ApproxLimit<T> approx_price_limit(const PathSpace& space, const PathSet& core,
                                  const PayoffExpr& claim, const StaticOptionBook& book,
                                  const PriceOptions& options) {
  Rational eta = min_pairwise_distance(space) / 5;
  if (sgn(eta) == 0 || eta > Rational(1, 5)) eta = Rational(1, 5);
  for (int attempt = 0; attempt < 40; ++attempt, eta /= 2) {
    ApproxLimit<T> r;
    r.eta = eta;
    r.at_eta = approx_price<T>(space, core, eta, claim, book, options).value;
    r.at_2eta = approx_price<T>(space, core, 2 * eta, claim, book, options).value;
    r.at_4eta = approx_price<T>(space, core, 4 * eta, claim, book, options).value;
    if (r.at_eta.is_neg_inf()) {
      // The class only shrinks as eta decreases.
      r.limit = Extended<T>::neg_infinity();
      return r;
    }
    if (r.at_2eta.is_neg_inf() || r.at_4eta.is_neg_inf()) continue;
    const T a = r.at_eta.value(), b = r.at_2eta.value(), c = r.at_4eta.value();
    if (near_zero(T((c - b) - 2 * (b - a)), kDualityTolerance)) {
      r.limit = Extended<T>(T(2 * a - b));
      return r;
    }
  }
  throw InternalConsistencyError("approximate price did not reach its linear regime");
}

template <class T>
DppResult<T> dpp_price(const PathSpace& space, const PayoffExpr& claim, int arrival,
                       const InfoStructure& info, const PriceOptions& options) {
  const StaticOptionBook cash;
  check_dpp_preconditions(space, info, arrival, cash);
  const Filtration filtration(space, info, numeric_mode<T>());
  const std::vector<Rational> objective = objective_from(claim_table(space, claim, eval_options<T>()));
  const PathSet all = space.all();

  DppResult<T> r;
  const MeasureProblem direct{all, TradingSchedule::from(filtration, 0, space.steps()), {}, std::nullopt};
  r.direct = solve_measure_problem<T>(space, direct, cash, objective, options).value;

  const TradingSchedule tail = TradingSchedule::from(filtration, arrival, space.steps());
  std::vector<Rational> inner(space.size());
  for (const auto& atom : prefix_partition(space, arrival).atoms) {
    const MeasureProblem local{atom, tail, {}, std::nullopt};
    const PriceValue<T> pv = solve_measure_problem<T>(space, local, cash, objective, options);
    if (pv.value.is_neg_inf()) {
      throw PreconditionError("no martingale measure on [" + std::to_string(arrival) +
                              ", N] carried by the atom of path " + std::to_string(atom.front()));
    }
    r.inner.push_back({atom, pv.value});
    for (auto i : atom) inner[i] = to_rational(pv.value.value());
  }
  const Filtration natural = Filtration::natural(space);
  const MeasureProblem outer{all, TradingSchedule::from(natural, 0, arrival), {}, std::nullopt};
  r.composed = solve_measure_problem<T>(space, outer, cash, inner, options).value;
  return r;
}

#define RIP_INSTANTIATE(T)                                                                         \
  template struct MartingaleMeasure<T>;                                                            \
  template bool audit_measure(const PathSpace&, const MartingaleMeasure<T>&, const MeasureProblem&, \
                              const StaticOptionBook&, double);                                    \
  template PriceValue<T> solve_measure_problem(const PathSpace&, const MeasureProblem&,           \
                                               const StaticOptionBook&,                            \
                                               const std::vector<Rational>&, const PriceOptions&); \
  template std::vector<PriceValue<T>> model_price(const PathSpace&, const PathSet&,               \
                                                  const InfoStructure&, const PayoffExpr&,         \
                                                  const StaticOptionBook&, const PriceOptions&);   \
  template const PriceValue<T>& value_at(const std::vector<PriceValue<T>>&, std::size_t);         \
  template std::vector<ConditionalPiece<T>> condition_measure(                                    \
      const PathSpace&, const MartingaleMeasure<T>&, const Partition&);                            \
  template MartingaleMeasure<T> concatenate_measure(                                              \
      const PathSpace&, int, const std::vector<T>&,                                                \
      const std::vector<std::optional<MartingaleMeasure<T>>>&);                                    \
  template MartingaleMeasure<T> concatenate_measure(                                              \
      const PathSpace&, int, const MartingaleMeasure<T>&,                                          \
      const std::vector<std::optional<MartingaleMeasure<T>>>&);                                    \
  template PriceValue<T> approx_price(const PathSpace&, const PathSet&, const Rational&,          \
                                      const PayoffExpr&, const StaticOptionBook&,                  \
                                      const PriceOptions&);                                        \
  template ApproxLimit<T> approx_price_limit(const PathSpace&, const PathSet&, const PayoffExpr&, \
                                             const StaticOptionBook&, const PriceOptions&);        \
  template DppResult<T> dpp_price(const PathSpace&, const PayoffExpr&, int, const InfoStructure&, \
                                  const PriceOptions&);

RIP_INSTANTIATE(Rational)
RIP_INSTANTIATE(double)

#undef RIP_INSTANTIATE

}  // namespace rip
