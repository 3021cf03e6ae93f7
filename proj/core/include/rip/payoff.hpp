#pragma once

// Payoff expressions over grid-indexed prices.
//
// Grammar:
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := NUMBER | ref | call | "(" expr ")" | "-" factor
//   ref    := "S" "[" INT "," (INT | "T") "]"
//   call   := IDENT "(" args ")"
//   IDENT  := max | min | abs | pos | ind | maxt | mint | nrat
//
// `ind` takes one comparison `expr CMP expr`, CMP in {<, <=, >, >=, ==}.
// `maxt(i)` / `mint(i)` are the running extremes of asset i over the whole
// grid; `maxt(i, k0, k1)` restricts to grid indices k0..k1.
// `nrat(x, y)` is x / y with the convention nrat(x, 0) = 1, used for paths
// normalised by their value at an interior time.
//
// Numeric literals are integers, decimals, or exact ratios written without
// spaces ("4/9"). A ratio literal and the division "4 / 9" have the same value.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rip/numeric.hpp"

namespace rip {

class Path;

/// A grid index, or the terminal index written "T".
struct GridIndex {
  bool terminal = false;
  int index = 0;

  static GridIndex at(int k) { return {false, k}; }
  static GridIndex end() { return {true, 0}; }
  int resolve(int steps) const { return terminal ? steps : index; }
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

enum class BinaryOp { kAdd, kSub, kMul, kDiv };
enum class CompareOp { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual };
enum class Function { kMax, kMin, kAbs, kPos, kNRat };

class PayoffExpr {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Number {
    Rational value;
  };
  struct Price {
    int asset;  // 1-based
    GridIndex time;
  };
  struct Negate {
    NodePtr operand;
  };
  struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
  };
  struct Call {
    Function fn;
    std::vector<NodePtr> args;
  };
  struct RunningExtreme {
    bool is_max;
    int asset;  // 1-based
    GridIndex from;
    GridIndex to;
    bool windowed;  // printed with explicit bounds
  };
  struct Indicator {
    CompareOp op;
    NodePtr lhs;
    NodePtr rhs;
  };

  struct Node {
    std::variant<Number, Price, Negate, Binary, Call, RunningExtreme, Indicator> v;
  };

  PayoffExpr();  // the constant 0
  explicit PayoffExpr(NodePtr root) : root_(std::move(root)) {}

  static PayoffExpr constant(Rational value);
  static PayoffExpr price(int asset, GridIndex time);
  static PayoffExpr running_max(int asset, GridIndex from = GridIndex::at(0),
                                GridIndex to = GridIndex::end());
  static PayoffExpr running_min(int asset, GridIndex from = GridIndex::at(0),
                                GridIndex to = GridIndex::end());
  static PayoffExpr indicator(CompareOp op, const PayoffExpr& lhs, const PayoffExpr& rhs);
  static PayoffExpr call(Function fn, std::vector<PayoffExpr> args);

  friend PayoffExpr operator+(const PayoffExpr& a, const PayoffExpr& b);
  friend PayoffExpr operator-(const PayoffExpr& a, const PayoffExpr& b);
  friend PayoffExpr operator*(const PayoffExpr& a, const PayoffExpr& b);
  friend PayoffExpr operator/(const PayoffExpr& a, const PayoffExpr& b);
  friend PayoffExpr operator-(const PayoffExpr& a);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  /// Structural equality.
  friend bool operator==(const PayoffExpr& a, const PayoffExpr& b);

  /// Canonical text accepted by parse_payoff.
  std::string str() const;

  /// Largest asset index referenced (0 if none).
  int max_asset() const;

  /// Throws DimensionError if the expression references an asset outside
  /// 1..assets or a grid index outside 0..steps.
  void validate(int assets, int steps) const;

 private:
  NodePtr root_;
};

PayoffExpr parse_payoff(std::string_view text);

struct EvalOptions {
  /// Comparisons inside ind() treat |a - b| <= eq_tolerance as equal.
  /// Zero means exact comparison.
  Rational eq_tolerance = 0;
};

/// Evaluates `expr` on `path`. Throws EvalError on division by zero or an
/// out-of-range reference.
Rational evaluate(const PayoffExpr& expr, const Path& path, const EvalOptions& options = {});

/// Rewrites every price reference S[i,k] as scales[i-1] * S[i,k].
PayoffExpr rescale_prices(const PayoffExpr& expr, const std::vector<Rational>& scales);

/// Applies `map` to every price reference and running extreme, replacing
/// the referenced node.
PayoffExpr substitute_prices(
    const PayoffExpr& expr,
    const std::function<PayoffExpr(int asset, GridIndex time)>& price_map,
    const std::function<PayoffExpr(const PayoffExpr::RunningExtreme&)>& extreme_map);

}  // namespace rip
