#pragma once

// Dense two-phase primal simplex with Bland's rule.
//
// Every outcome carries a certificate that `verify_certificate` re-checks
// from the original problem data alone:
//   Optimal    primal point x, row multipliers y, equal objectives
//   Infeasible Farkas multipliers y with  y'b > sup{ (A'y)'x : bounds }
//   Unbounded  feasible point x and ray r with  A r ~ 0, c'r improving
//
// Dual sign convention (minimisation form; for maximisation negate c):
//   >= row: y >= 0,  <= row: y <= 0,  = row: free.
// The reduced cost d = c - A'y must be >= 0 on variables with only a lower
// bound, <= 0 with only an upper bound and 0 on free variables.

#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

#include "rip/numeric.hpp"

namespace rip::lp {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

template <class T>
struct Bound {
  std::optional<T> lower;
  std::optional<T> upper;

  static Bound free() { return {}; }
  static Bound nonnegative() { return {T(0), std::nullopt}; }
  static Bound boxed(T lo, T hi) { return {std::move(lo), std::move(hi)}; }
};

template <class T>
struct LinearProgram {
  Sense sense = Sense::kMinimize;
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<Relation> relations;
  std::vector<T> rhs;
  std::vector<Bound<T>> bounds;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_variable(T cost, Bound<T> bound);
  /// Appends a constraint; `coefficients` is padded with zeros to num_vars().
  std::size_t add_row(std::vector<T> coefficients, Relation relation, T rhs_value);

  /// Throws DimensionError on inconsistent shapes or empty boxes.
  void validate() const;
};

template <class T>
struct Outcome {
  Status status = Status::kInfeasible;
  std::vector<T> primal;  ///< optimum, or a feasible point when unbounded
  std::vector<T> dual;    ///< row multipliers, or Farkas multipliers
  std::vector<T> ray;     ///< improving direction when unbounded
  T objective{};          ///< optimal value in the problem's own sense
  std::size_t pivots = 0;
};

struct SolverOptions {
  double tolerance = kSolverTolerance;  ///< ignored in exact arithmetic
  std::size_t max_pivots = 2'000'000;
};

template <class T>
Outcome<T> solve(const LinearProgram<T>& lp, const SolverOptions& options = {});

/// Independently re-checks `outcome` against `lp`. `tolerance` bounds the
/// feasibility residuals and the duality gap in float mode; rational mode is
/// checked exactly.
template <class T>
bool verify_certificate(const LinearProgram<T>& lp, const Outcome<T>& outcome,
                        double tolerance = kDualityTolerance);

/// Converts an exact program to double precision.
LinearProgram<double> to_double(const LinearProgram<Rational>& lp);

/// Identity for Rational, to_double for double.
template <class T>
LinearProgram<T> convert(const LinearProgram<Rational>& lp) {
  if constexpr (std::is_same_v<T, Rational>) {
    return lp;
  } else {
    return to_double(lp);
  }
}

extern template struct LinearProgram<Rational>;
extern template struct LinearProgram<double>;

}  // namespace rip::lp
