#pragma once

// Finite discrete-time path spaces.
//
// A PathSpace is an explicit, immutable list of distinct price paths on a
// time grid t_0 = 0 < ... < t_N = T. Each path carries d underlyings and K
// dynamically traded options; every coordinate starts at 1 and option
// coordinates end at payoff / price.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "rip/numeric.hpp"
#include "rip/payoff.hpp"

namespace rip {

class TimeGrid {
 public:
  /// Throws DomainError unless times strictly increase from 0.
  explicit TimeGrid(std::vector<Rational> times);
  static TimeGrid uniform(int steps, Rational horizon = 1);

  int steps() const { return static_cast<int>(times_.size()) - 1; }
  const Rational& horizon() const { return times_.back(); }
  const Rational& time(int k) const { return times_.at(static_cast<std::size_t>(k)); }
  const std::vector<Rational>& times() const { return times_; }
  bool is_uniform() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<Rational> times_;
};

/// Prices of every asset at every grid index, stored asset-major.
class Path {
 public:
  Path() = default;
  /// `values[a * (steps + 1) + k]` is asset a (0-based) at grid index k.
  Path(int assets, int steps, std::vector<Rational> values);
  /// Single-asset convenience constructor.
  explicit Path(std::vector<Rational> single_asset);
  Path(std::initializer_list<Rational> single_asset) : Path(std::vector<Rational>(single_asset)) {}

  int assets() const { return assets_; }
  int steps() const { return steps_; }
  const Rational& at(int asset, int k) const {
    return values_[static_cast<std::size_t>(asset * (steps_ + 1) + k)];
  }
  std::span<const Rational> asset_values(int asset) const {
    return {values_.data() + asset * (steps_ + 1), static_cast<std::size_t>(steps_ + 1)};
  }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const Path& a, const Path& b) {
    return a.assets_ == b.assets_ && a.steps_ == b.steps_ && a.values_ == b.values_;
  }
  friend bool operator<(const Path& a, const Path& b);

 private:
  int assets_ = 0;
  int steps_ = 0;
  std::vector<Rational> values_;
};

/// Sorted, duplicate-free list of path indices.
using PathSet = std::vector<std::size_t>;

struct PricedPayoff {
  PayoffExpr payoff;
  Rational price;
};

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

class PathSpace {
 public:
  /// Validates normalised starts, nonnegativity, distinctness and the
  /// terminal constraint of the dynamic options.
  PathSpace(TimeGrid grid, int underlyings, std::vector<PricedPayoff> dynamic_options,
            std::vector<Path> paths);

  const TimeGrid& grid() const { return grid_; }
  int steps() const { return grid_.steps(); }
  int underlyings() const { return underlyings_; }
  int dynamic_count() const { return static_cast<int>(dynamic_.size()); }
  int assets() const { return underlyings_ + dynamic_count(); }
  const std::vector<PricedPayoff>& dynamic_options() const { return dynamic_; }

  std::size_t size() const { return paths_.size(); }
  const Path& path(std::size_t i) const { return paths_.at(i); }
  const std::vector<Path>& paths() const { return paths_; }
  PathSet all() const;

  std::optional<std::size_t> find(const Path& p) const;

  /// The underlying coordinates only (drops option coordinates).
  Path underlying_part(std::size_t i) const;

 private:
  TimeGrid grid_;
  int underlyings_;
  std::vector<PricedPayoff> dynamic_;
  std::vector<Path> paths_;
  std::vector<std::size_t> sorted_;  // indices ordered by path value
};

/// Static option book. Entry 0 is always the cash payoff 1 with price 1.
class StaticOptionBook {
 public:
  StaticOptionBook();

  void add(PayoffExpr payoff, Rational price);
  std::size_t size() const { return entries_.size(); }
  const PricedPayoff& entry(std::size_t i) const { return entries_.at(i); }
  const std::vector<PricedPayoff>& entries() const { return entries_; }
  bool cash_only() const { return entries_.size() == 1; }

  /// Throws DimensionError if a payoff references option coordinates.
  void validate(const PathSpace& space) const;

 private:
  std::vector<PricedPayoff> entries_;
};

/// Ratio sets indexed [step][asset].
using RatioSets = std::vector<std::vector<std::vector<Rational>>>;

/// Same ratio set for every step and asset.
RatioSets iid_ratios(int steps, int assets, const std::vector<Rational>& ratios);

/// Non-recombining multiplicative lattice: omega_0 = 1 and
/// omega_{k+1} = omega_k * r with r drawn from ratios[k][asset].
PathSpace build_lattice(int underlyings, const TimeGrid& grid, const RatioSets& ratios,
                        std::size_t path_cap = kDefaultPathCap);

/// How option coordinates move strictly between time 0 and maturity.
struct OptionInterpolation {
  /// Reference weights over the base paths. When set, interior values are
  /// E_ref[payoff | F_k] / price; otherwise values are linear in time.
  std::optional<std::vector<Rational>> reference_weights;
};

/// Extends every base path by one coordinate per dynamic option.
PathSpace build_info_space(const PathSpace& base, std::vector<PricedPayoff> dynamic_options,
                           const OptionInterpolation& interpolation = {});

/// max over assets and grid indices of |a - b|.
Rational sup_dist(const Path& a, const Path& b);

/// All paths within sup-distance `epsilon` of some path of `subset`.
PathSet fatten(const PathSpace& space, const PathSet& subset, const Rational& epsilon);

/// Smallest sup-distance between two distinct paths (0 for a single path).
Rational min_pairwise_distance(const PathSpace& space);

/// Checks that `subset` is sorted, unique and in range.
void check_subset(const PathSpace& space, const PathSet& subset);

}  // namespace rip
