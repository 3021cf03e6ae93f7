#pragma once

// Superhedging costs of semi-static strategies.
//
// A strategy holds a static position in the option book, fixed on each atom
// of the time -1 partition, and trades every asset at each step t with a
// holding that is constant on the atoms of the time-t partition. The cost of
// a claim on a target set is the least price of the static position such
// that static payoff plus trading gains dominates the claim path by path.

#include <cstddef>
#include <optional>
#include <vector>

#include "rip/information.hpp"
#include "rip/lp.hpp"
#include "rip/model.hpp"
#include "rip/numeric.hpp"

namespace rip {

/// Which partition governs holdings on each step of [first_step, last_step).
struct TradingSchedule {
  int first_step = 0;
  std::vector<Partition> partitions;

  int last_step() const { return first_step + static_cast<int>(partitions.size()); }
  /// Steps [first, last) of a filtration.
  static TradingSchedule from(const Filtration& filtration, int first, int last);
};

/// Claim values per path of the space; -inf marks paths that impose no
/// constraint (an inner problem with an arbitrage there).
using ClaimTable = std::vector<Extended<Rational>>;

ClaimTable claim_table(const PathSpace& space, const PayoffExpr& claim,
                       const EvalOptions& options = {});

template <class T>
struct Strategy {
  std::vector<T> static_position;  ///< one entry per book entry
  TradingSchedule schedule;
  std::vector<std::vector<std::vector<T>>> holdings;  ///< [step - first][atom][asset]

  /// Holding vector at step t on `path`; zero outside the schedule.
  std::vector<T> holding(int t, std::size_t path, int assets) const;
  T cost(const StaticOptionBook& book) const;
};

/// Sum over steps t in [t1, t2) and all assets of holding * price increment.
template <class T>
T gains(const PathSpace& space, const Strategy<T>& strategy, std::size_t path, int t1, int t2);

/// Static payoff plus gains over the schedule, on `path`.
template <class T>
T terminal_value(const PathSpace& space, const StaticOptionBook& book, const Strategy<T>& strategy,
                 std::size_t path);

template <class T>
struct HedgeValue {
  PathSet target;
  Extended<T> value;
  std::optional<Strategy<T>> strategy;   ///< attains `value` when finite
  std::optional<Strategy<T>> arbitrage;  ///< when -inf: negative cost, nonnegative payoff
  std::size_t pivots = 0;
};

struct HedgeOptions {
  lp::SolverOptions solver;
};

/// The superhedging LP on `target` with the given schedule. Throws
/// InternalConsistencyError if the extracted strategy or arbitrage fails a
/// direct pathwise re-check.
template <class T>
HedgeValue<T> superhedge_table(const PathSpace& space, const PathSet& target,
                               const TradingSchedule& schedule, const ClaimTable& claim,
                               const StaticOptionBook& book, const HedgeOptions& options = {});

/// One value per atom of the time -1 partition that meets `target`.
template <class T>
std::vector<HedgeValue<T>> superhedge(const PathSpace& space, const PathSet& target,
                                      const InfoStructure& info, const PayoffExpr& claim,
                                      const StaticOptionBook& book,
                                      const HedgeOptions& options = {});

/// Value of the per-atom table at `path`.
template <class T>
const HedgeValue<T>& value_at(const std::vector<HedgeValue<T>>& table, std::size_t path);

/// Least x such that trading from `arrival` on super-replicates the claim on
/// the natural-filtration atom of `path` at `arrival`. Cash only.
template <class T>
HedgeValue<T> superhedge_interval(const PathSpace& space, std::size_t path, int arrival,
                                  const InfoStructure& info, const PayoffExpr& claim,
                                  const HedgeOptions& options = {});

template <class T>
struct InnerEntry {
  PathSet atom;  ///< natural-filtration atom at the arrival index
  Extended<T> value;
};

template <class T>
struct DppResult {
  Extended<T> direct;
  Extended<T> composed;
  std::vector<InnerEntry<T>> inner;
};

/// Checks the DPP preconditions: no static options beyond cash and either no
/// information or a scaling-form variable arriving at `arrival`.
void check_dpp_preconditions(const PathSpace& space, const InfoStructure& info, int arrival,
                             const StaticOptionBook& book);

/// Direct cost on [0, N] against the natural-filtration cost on [0, arrival]
/// of the inner value table. `info` is kNone or kDynamic with this arrival.
template <class T>
DppResult<T> dpp_superhedge(const PathSpace& space, const PayoffExpr& claim, int arrival,
                            const InfoStructure& info, const HedgeOptions& options = {});

/// Natural-filtration cost on the epsilon-fattening of `core`.
template <class T>
HedgeValue<T> approx_superhedge(const PathSpace& space, const PathSet& core,
                                const Rational& epsilon, const PayoffExpr& claim,
                                const StaticOptionBook& book, const HedgeOptions& options = {});

/// Evaluation options matching the scalar: exact for Rational, label
/// tolerance for double.
template <class T>
EvalOptions eval_options();

template <class T>
constexpr NumericMode numeric_mode() {
  return Arith<T>::kExact ? NumericMode::kRational : NumericMode::kFloat;
}

}  // namespace rip
