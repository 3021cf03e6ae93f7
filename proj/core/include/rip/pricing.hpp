#pragma once

// Calibrated martingale measures on a finite path space and the model
// prices they induce.

#include <cstddef>
#include <optional>
#include <vector>

#include "rip/hedging.hpp"
#include "rip/information.hpp"
#include "rip/lp.hpp"
#include "rip/model.hpp"

namespace rip {

/// Weights over every path of a space.
template <class T>
struct MartingaleMeasure {
  std::vector<T> weights;

  T mass(const PathSet& set) const;
  PathSet support(double tol = 0.0) const;
};

/// The constraint set of a measure LP.
///   - a weight w >= 0 for each path in `variables`, summing to one;
///   - for each step of `martingale`, each atom and asset:
///       sum over the atom of w * (price increment) = 0;
///   - for each calibration atom and each non-cash book entry:
///       sum over the atom of w * (payoff - price) = 0;
///   - when `support` is set, the paths of `variables` outside it carry zero
///     mass (one aggregated row).
struct MeasureProblem {
  PathSet variables;
  TradingSchedule martingale;
  std::vector<PathSet> calibration_atoms;
  std::optional<PathSet> support;
};

/// The LP of `problem`; column r is the weight of problem.variables[r].
/// `objective` has one entry per path of the space, or is empty.
lp::LinearProgram<Rational> measure_lp(const PathSpace& space, const MeasureProblem& problem,
                                       const StaticOptionBook& book,
                                       const std::vector<Rational>& objective = {});

/// Measure class on `target` for the given information over steps
/// [first, last), calibrated per atom of the time -1 partition.
lp::LinearProgram<Rational> build_measure_lp(const PathSpace& space, const PathSet& target,
                                             const InfoStructure& info,
                                             const StaticOptionBook& book, int first, int last,
                                             const std::optional<PayoffExpr>& claim = std::nullopt);

template <class T>
struct PriceValue {
  PathSet target;
  Extended<T> value;
  std::optional<MartingaleMeasure<T>> measure;  ///< attains `value` when finite
  std::vector<T> farkas;                        ///< emptiness certificate when -inf
  std::size_t pivots = 0;
};

struct PriceOptions {
  lp::SolverOptions solver;
};

/// Maximises the objective over `problem`. Empty class gives -inf with a
/// verified Farkas certificate; an optimal measure is audited directly.
template <class T>
PriceValue<T> solve_measure_problem(const PathSpace& space, const MeasureProblem& problem,
                                    const StaticOptionBook& book,
                                    const std::vector<Rational>& objective,
                                    const PriceOptions& options = {});

/// One value per atom of the time -1 partition that meets `target`.
template <class T>
std::vector<PriceValue<T>> model_price(const PathSpace& space, const PathSet& target,
                                       const InfoStructure& info, const PayoffExpr& claim,
                                       const StaticOptionBook& book,
                                       const PriceOptions& options = {});

template <class T>
const PriceValue<T>& value_at(const std::vector<PriceValue<T>>& table, std::size_t path);

/// Direct arithmetic check of every constraint of `problem`.
template <class T>
bool audit_measure(const PathSpace& space, const MartingaleMeasure<T>& measure,
                   const MeasureProblem& problem, const StaticOptionBook& book,
                   double tol = kDualityTolerance);

template <class T>
struct ConditionalPiece {
  PathSet atom;
  T mass;
  MartingaleMeasure<T> conditional;
};

/// Restriction to each atom of positive mass, renormalised.
template <class T>
std::vector<ConditionalPiece<T>> condition_measure(const PathSpace& space,
                                                   const MartingaleMeasure<T>& measure,
                                                   const Partition& partition);

/// Glues prefix masses on the natural-filtration atoms at `arrival` with a
/// kernel measure per atom. `kernel[a]` may be empty only where the mass is
/// zero, and must be carried by atom a.
template <class T>
MartingaleMeasure<T> concatenate_measure(const PathSpace& space, int arrival,
                                         const std::vector<T>& prefix_masses,
                                         const std::vector<std::optional<MartingaleMeasure<T>>>& kernel);

/// Same, taking the atom masses of a full measure.
template <class T>
MartingaleMeasure<T> concatenate_measure(const PathSpace& space, int arrival,
                                         const MartingaleMeasure<T>& prefix,
                                         const std::vector<std::optional<MartingaleMeasure<T>>>& kernel);

/// Natural-filtration price over measures with mass above 1 - eta on the
/// eta-fattening of `core` and calibration error below eta. The strict
/// inequalities are shifted inwards by eta / 1000.
template <class T>
PriceValue<T> approx_price(const PathSpace& space, const PathSet& core, const Rational& eta,
                           const PayoffExpr& claim, const StaticOptionBook& book,
                           const PriceOptions& options = {});

template <class T>
struct ApproxLimit {
  Extended<T> limit;
  Rational eta;  ///< smallest eta of the three samples
  Extended<T> at_eta, at_2eta, at_4eta;
};

/// Limit of approx_price as eta decreases to zero, read off the linear
/// regime near zero: 2 f(eta) - f(2 eta), once f(eta), f(2 eta), f(4 eta)
/// are collinear and 4 eta is below the smallest inter-path distance.
template <class T>
ApproxLimit<T> approx_price_limit(const PathSpace& space, const PathSet& core,
                                  const PayoffExpr& claim, const StaticOptionBook& book,
                                  const PriceOptions& options = {});

/// Direct price on [0, N] against the natural-filtration price on
/// [0, arrival] of the inner price table. Throws PreconditionError if some
/// inner measure class is empty.
template <class T>
DppResult<T> dpp_price(const PathSpace& space, const PayoffExpr& claim, int arrival,
                       const InfoStructure& info, const PriceOptions& options = {});

}  // namespace rip
