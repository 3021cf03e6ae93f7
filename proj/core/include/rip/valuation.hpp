#pragma once

// Duality reports across information variants and the value of information.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rip/hedging.hpp"
#include "rip/information.hpp"
#include "rip/model.hpp"
#include "rip/pricing.hpp"

namespace rip {

template <class T>
struct AtomDuality {
  PathSet atom;
  Extended<T> hedge;
  Extended<T> price;
  std::optional<T> gap;  ///< hedge - price when both are finite
  bool feasible = false; ///< measure class nonempty
  std::optional<Strategy<T>> strategy;
  std::optional<Strategy<T>> arbitrage;
  std::optional<MartingaleMeasure<T>> measure;
  std::vector<T> farkas;
};

/// Five routes to the same number when static information is withheld and
/// only cash is traded statically.
template <class T>
struct ChainQuantities {
  Extended<T> hedge_minus;       ///< cost with the variable unusable statically
  Extended<T> max_hedge_plus;    ///< largest per-level cost with full information
  Extended<T> max_price_plus;    ///< largest per-level price with full information
  Extended<T> max_single_level;  ///< best measure on the whole space carried by one level set
  Extended<T> price_minus;       ///< price with the variable unusable statically

  std::vector<Extended<T>> values() const {
    return {hedge_minus, max_hedge_plus, max_price_plus, max_single_level, price_minus};
  }
  bool agree(double tol = kDualityTolerance) const;
};

template <class T>
struct DualityReport {
  std::vector<AtomDuality<T>> atoms;
  std::optional<ChainQuantities<T>> chain;

  /// Every atom has hedge == price (both -inf counts as equal).
  bool holds(double tol = kDualityTolerance) const;
  bool any_infeasible() const;
};

struct ValuationOptions {
  lp::SolverOptions solver;
};

/// Per-atom hedge and price on the whole space; the chain is added for the
/// withheld-static variant with a cash-only book.
template <class T>
DualityReport<T> duality_report(const PathSpace& space, const PayoffExpr& claim,
                                const InfoStructure& info, const StaticOptionBook& book,
                                const ValuationOptions& options = {});

/// Same, restricted to `target`; no chain.
template <class T>
DualityReport<T> duality_report(const PathSpace& space, const PathSet& target,
                                const PayoffExpr& claim, const InfoStructure& info,
                                const StaticOptionBook& book, const ValuationOptions& options = {});

template <class T>
ChainQuantities<T> chain_quantities(const PathSpace& space, const InfoVariable& z,
                                    const PayoffExpr& claim, const ValuationOptions& options = {});

template <class T>
struct ClaimInfoValue {
  PayoffExpr claim;
  int arrival = 0;
  Extended<T> hedge_plain;     ///< natural filtration
  Extended<T> hedge_informed;  ///< withheld-static variant at 0, dynamic arrival otherwise
  /// Arrival 0 only: per level set cost with full information, and the
  /// infimum of hedge_plain minus that table.
  std::vector<Extended<T>> plus_table;
  std::optional<T> plus_infimum;
  std::optional<T> value;
  std::string flag;  ///< why `value` is missing
};

/// Cash-only cost reduction from receiving Z at `arrival`. Arrival 0 uses
/// the withheld-static variant; a positive arrival needs Z in scaling form.
template <class T>
ClaimInfoValue<T> info_value_claim(const PathSpace& space, const InfoVariable& z, int arrival,
                                   const PayoffExpr& claim, const ValuationOptions& options = {});

template <class T>
struct InfoValueReport {
  int arrival = 0;
  std::vector<ClaimInfoValue<T>> claims;
  std::optional<T> value;      ///< max over claims with a finite value
  std::optional<std::size_t> best;
};

/// Max over a finite family. Each claim must map every path into [0, 1]
/// (PreconditionError otherwise).
template <class T>
InfoValueReport<T> info_value(const PathSpace& space, const InfoVariable& z, int arrival,
                              const std::vector<PayoffExpr>& claims,
                              const ValuationOptions& options = {});

/// Lifts a claim on the `tail_steps`-step normalised space to a grid with
/// arrival `arrival`: prices are read from the arrival index on and divided
/// by the price there (0/0 = 1). Needs a uniform grid with
/// steps - arrival == tail_steps, else IncompatibleGridError.
PayoffExpr transport_claim(const PayoffExpr& claim, int tail_steps, int arrival,
                           const TimeGrid& grid);

/// Same lift for an information variable, labelled 1 where the price at the
/// arrival index is zero.
InfoVariable transport_info(const InfoVariable& z, int tail_steps, int arrival, const TimeGrid& grid);

/// Digitals on every terminal level and corridors between pairs of levels
/// of the first underlying, at most `max_claims` of them.
std::vector<PayoffExpr> auto_claim_family(const PathSpace& space, std::size_t max_claims = 64);

template <class T>
struct TimingRow {
  int arrival = 0;
  int steps = 0;
  InfoValueReport<T> report;
};

/// The value of information at arrival 0 on the `tail_steps`-step i.i.d.
/// lattice, and at each positive arrival on the (arrival + tail_steps)-step
/// lattice with transported variable and claims.
template <class T>
std::vector<TimingRow<T>> timing_comparison(const std::vector<Rational>& ratios, int tail_steps,
                                            const std::vector<int>& arrivals,
                                            const InfoVariable& z,
                                            const std::vector<PayoffExpr>& claims,
                                            const ValuationOptions& options = {});

}  // namespace rip
