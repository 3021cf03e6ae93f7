#include "rip/payoff.hpp"

#include <algorithm>
#include <sstream>

#include "rip/errors.hpp"
#include "rip/model.hpp"

namespace rip {

namespace {

using Node = PayoffExpr::Node;
using NodePtr = PayoffExpr::NodePtr;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

NodePtr make(auto&& alternative) {
  return std::make_shared<const Node>(Node{std::forward<decltype(alternative)>(alternative)});
}

bool nodes_equal(const NodePtr& a, const NodePtr& b);

bool nodes_equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      Overloaded{
          [&](const PayoffExpr::Number& x) {
            return x.value == std::get<PayoffExpr::Number>(b.v).value;
          },
          [&](const PayoffExpr::Price& x) {
            const auto& y = std::get<PayoffExpr::Price>(b.v);
            return x.asset == y.asset && x.time == y.time;
          },
          [&](const PayoffExpr::Negate& x) {
            return nodes_equal(x.operand, std::get<PayoffExpr::Negate>(b.v).operand);
          },
          [&](const PayoffExpr::Binary& x) {
            const auto& y = std::get<PayoffExpr::Binary>(b.v);
            return x.op == y.op && nodes_equal(x.lhs, y.lhs) && nodes_equal(x.rhs, y.rhs);
          },
          [&](const PayoffExpr::Call& x) {
            const auto& y = std::get<PayoffExpr::Call>(b.v);
            if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!nodes_equal(x.args[i], y.args[i])) return false;
            }
            return true;
          },
          [&](const PayoffExpr::RunningExtreme& x) {
            const auto& y = std::get<PayoffExpr::RunningExtreme>(b.v);
            return x.is_max == y.is_max && x.asset == y.asset && x.from == y.from &&
                   x.to == y.to && x.windowed == y.windowed;
          },
          [&](const PayoffExpr::Indicator& x) {
            const auto& y = std::get<PayoffExpr::Indicator>(b.v);
            return x.op == y.op && nodes_equal(x.lhs, y.lhs) && nodes_equal(x.rhs, y.rhs);
          },
      },
      a.v);
}

bool nodes_equal(const NodePtr& a, const NodePtr& b) {
  return a == b || nodes_equal(*a, *b);
}

std::string index_str(const GridIndex& g) {
  return g.terminal ? std::string("T") : std::to_string(g.index);
}

const char* binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
  }
  return "?";
}

const char* compare_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::kLess: return "<";
    case CompareOp::kLessEqual: return "<=";
    case CompareOp::kGreater: return ">";
    case CompareOp::kGreaterEqual: return ">=";
    case CompareOp::kEqual: return "==";
  }
  return "?";
}

const char* function_name(Function fn) {
  switch (fn) {
    case Function::kMax: return "max";
    case Function::kMin: return "min";
    case Function::kAbs: return "abs";
    case Function::kPos: return "pos";
    case Function::kNRat: return "nrat";
  }
  return "?";
}

void print(const Node& n, std::ostream& os) {
  std::visit(Overloaded{
                 [&](const PayoffExpr::Number& x) { os << to_string(x.value); },
                 [&](const PayoffExpr::Price& x) {
                   os << "S[" << x.asset << "," << index_str(x.time) << "]";
                 },
                 [&](const PayoffExpr::Negate& x) {
                   os << "-(";
                   print(*x.operand, os);
                   os << ")";
                 },
                 [&](const PayoffExpr::Binary& x) {
                   os << "(";
                   print(*x.lhs, os);
                   os << " " << binary_symbol(x.op) << " ";
                   print(*x.rhs, os);
                   os << ")";
                 },
                 [&](const PayoffExpr::Call& x) {
                   os << function_name(x.fn) << "(";
                   for (std::size_t i = 0; i < x.args.size(); ++i) {
                     if (i) os << ", ";
                     print(*x.args[i], os);
                   }
                   os << ")";
                 },
                 [&](const PayoffExpr::RunningExtreme& x) {
                   os << (x.is_max ? "maxt(" : "mint(") << x.asset;
                   if (x.windowed) os << ", " << index_str(x.from) << ", " << index_str(x.to);
                   os << ")";
                 },
                 [&](const PayoffExpr::Indicator& x) {
                   os << "ind(";
                   print(*x.lhs, os);
                   os << " " << compare_symbol(x.op) << " ";
                   print(*x.rhs, os);
                   os << ")";
                 },
             },
             n.v);
}

void walk_refs(const Node& n, const std::function<void(int, const GridIndex&)>& visit) {
  std::visit(Overloaded{
                 [&](const PayoffExpr::Number&) {},
                 [&](const PayoffExpr::Price& x) { visit(x.asset, x.time); },
                 [&](const PayoffExpr::Negate& x) { walk_refs(*x.operand, visit); },
                 [&](const PayoffExpr::Binary& x) {
                   walk_refs(*x.lhs, visit);
                   walk_refs(*x.rhs, visit);
                 },
                 [&](const PayoffExpr::Call& x) {
                   for (const auto& a : x.args) walk_refs(*a, visit);
                 },
                 [&](const PayoffExpr::RunningExtreme& x) {
                   visit(x.asset, x.from);
                   visit(x.asset, x.to);
                 },
                 [&](const PayoffExpr::Indicator& x) {
                   walk_refs(*x.lhs, visit);
                   walk_refs(*x.rhs, visit);
                 },
             },
             n.v);
}

struct Evaluator {
  const Path& path;
  const EvalOptions& options;

  const Rational& price(int asset, const GridIndex& time) const {
    const int k = time.resolve(path.steps());
    if (asset < 1 || asset > path.assets()) {
      throw EvalError("asset index " + std::to_string(asset) + " out of range 1.." +
                      std::to_string(path.assets()));
    }
    if (k < 0 || k > path.steps()) {
      throw EvalError("grid index " + std::to_string(k) + " out of range 0.." +
                      std::to_string(path.steps()));
    }
    return path.at(asset - 1, k);
  }

  int compare(const Rational& a, const Rational& b) const {
    Rational diff = a - b;
    if (sgn(options.eq_tolerance) > 0 && abs(diff) <= options.eq_tolerance) return 0;
    return sgn(diff);
  }

  Rational operator()(const Node& n) const {
    return std::visit(
        Overloaded{
            [&](const PayoffExpr::Number& x) -> Rational { return x.value; },
            [&](const PayoffExpr::Price& x) -> Rational { return price(x.asset, x.time); },
            [&](const PayoffExpr::Negate& x) -> Rational { return -(*this)(*x.operand); },
            [&](const PayoffExpr::Binary& x) -> Rational {
              Rational l = (*this)(*x.lhs);
              Rational r = (*this)(*x.rhs);
              switch (x.op) {
                case BinaryOp::kAdd: return l + r;
                case BinaryOp::kSub: return l - r;
                case BinaryOp::kMul: return l * r;
                case BinaryOp::kDiv:
                  if (sgn(r) == 0) throw EvalError("division by zero");
                  return l / r;
              }
              return Rational(0);
            },
            [&](const PayoffExpr::Call& x) -> Rational {
              switch (x.fn) {
                case Function::kMax:
                case Function::kMin: {
                  Rational best = (*this)(*x.args.at(0));
                  for (std::size_t i = 1; i < x.args.size(); ++i) {
                    Rational v = (*this)(*x.args[i]);
                    if (x.fn == Function::kMax ? v > best : v < best) best = v;
                  }
                  return best;
                }
                case Function::kAbs: return abs((*this)(*x.args.at(0)));
                case Function::kPos: {
                  Rational v = (*this)(*x.args.at(0));
                  return sgn(v) > 0 ? v : Rational(0);
                }
                case Function::kNRat: {
                  Rational num = (*this)(*x.args.at(0));
                  Rational den = (*this)(*x.args.at(1));
                  if (sgn(den) == 0) return Rational(1);
                  return num / den;
                }
              }
              return Rational(0);
            },
            [&](const PayoffExpr::RunningExtreme& x) -> Rational {
              const int k0 = x.from.resolve(path.steps());
              const int k1 = x.to.resolve(path.steps());
              if (k0 > k1) throw EvalError("empty running-extreme window");
              Rational best = price(x.asset, GridIndex::at(k0));
              for (int k = k0 + 1; k <= k1; ++k) {
                const Rational& v = price(x.asset, GridIndex::at(k));
                if (x.is_max ? v > best : v < best) best = v;
              }
              return best;
            },
            [&](const PayoffExpr::Indicator& x) -> Rational {
              const int c = compare((*this)(*x.lhs), (*this)(*x.rhs));
              bool holds = false;
              switch (x.op) {
                case CompareOp::kLess: holds = c < 0; break;
                case CompareOp::kLessEqual: holds = c <= 0; break;
                case CompareOp::kGreater: holds = c > 0; break;
                case CompareOp::kGreaterEqual: holds = c >= 0; break;
                case CompareOp::kEqual: holds = c == 0; break;
              }
              return Rational(holds ? 1 : 0);
            },
        },
        n.v);
  }
};

NodePtr substitute(const NodePtr& n,
                   const std::function<PayoffExpr(int, GridIndex)>& price_map,
                   const std::function<PayoffExpr(const PayoffExpr::RunningExtreme&)>& extreme_map) {
  auto rec = [&](const NodePtr& c) { return substitute(c, price_map, extreme_map); };
  return std::visit(
      Overloaded{
          [&](const PayoffExpr::Number&) -> NodePtr { return n; },
          [&](const PayoffExpr::Price& x) -> NodePtr {
            return price_map(x.asset, x.time).root_ptr();
          },
          [&](const PayoffExpr::Negate& x) -> NodePtr {
            return make(PayoffExpr::Negate{rec(x.operand)});
          },
          [&](const PayoffExpr::Binary& x) -> NodePtr {
            return make(PayoffExpr::Binary{x.op, rec(x.lhs), rec(x.rhs)});
          },
          [&](const PayoffExpr::Call& x) -> NodePtr {
            std::vector<NodePtr> args;
            for (const auto& a : x.args) args.push_back(rec(a));
            return make(PayoffExpr::Call{x.fn, std::move(args)});
          },
          [&](const PayoffExpr::RunningExtreme& x) -> NodePtr {
            return extreme_map(x).root_ptr();
          },
          [&](const PayoffExpr::Indicator& x) -> NodePtr {
            return make(PayoffExpr::Indicator{x.op, rec(x.lhs), rec(x.rhs)});
          },
      },
      n->v);
}

}  // namespace

PayoffExpr::PayoffExpr() : root_(make(Number{Rational(0)})) {}

PayoffExpr PayoffExpr::constant(Rational value) {
  value.canonicalize();
  return PayoffExpr(make(Number{std::move(value)}));
}

PayoffExpr PayoffExpr::price(int asset, GridIndex time) {
  return PayoffExpr(make(Price{asset, time}));
}

PayoffExpr PayoffExpr::running_max(int asset, GridIndex from, GridIndex to) {
  const bool windowed = !(from == GridIndex::at(0) && to == GridIndex::end());
  return PayoffExpr(make(RunningExtreme{true, asset, from, to, windowed}));
}

PayoffExpr PayoffExpr::running_min(int asset, GridIndex from, GridIndex to) {
  const bool windowed = !(from == GridIndex::at(0) && to == GridIndex::end());
  return PayoffExpr(make(RunningExtreme{false, asset, from, to, windowed}));
}

PayoffExpr PayoffExpr::indicator(CompareOp op, const PayoffExpr& lhs, const PayoffExpr& rhs) {
  return PayoffExpr(make(Indicator{op, lhs.root_, rhs.root_}));
}

PayoffExpr PayoffExpr::call(Function fn, std::vector<PayoffExpr> args) {
  const std::size_t n = args.size();
  const bool ok = (fn == Function::kMax || fn == Function::kMin) ? n >= 1
                  : fn == Function::kNRat                         ? n == 2
                                                                  : n == 1;
  if (!ok) throw DomainError(std::string("wrong number of arguments for ") + function_name(fn));
  std::vector<NodePtr> nodes;
  nodes.reserve(n);
  for (auto& a : args) nodes.push_back(a.root_);
  return PayoffExpr(make(Call{fn, std::move(nodes)}));
}

PayoffExpr operator+(const PayoffExpr& a, const PayoffExpr& b) {
  return PayoffExpr(make(PayoffExpr::Binary{BinaryOp::kAdd, a.root_, b.root_}));
}
PayoffExpr operator-(const PayoffExpr& a, const PayoffExpr& b) {
  return PayoffExpr(make(PayoffExpr::Binary{BinaryOp::kSub, a.root_, b.root_}));
}
PayoffExpr operator*(const PayoffExpr& a, const PayoffExpr& b) {
  return PayoffExpr(make(PayoffExpr::Binary{BinaryOp::kMul, a.root_, b.root_}));
}
PayoffExpr operator/(const PayoffExpr& a, const PayoffExpr& b) {
  return PayoffExpr(make(PayoffExpr::Binary{BinaryOp::kDiv, a.root_, b.root_}));
}
PayoffExpr operator-(const PayoffExpr& a) {
  return PayoffExpr(make(PayoffExpr::Negate{a.root_}));
}

bool operator==(const PayoffExpr& a, const PayoffExpr& b) {
  return nodes_equal(a.root_, b.root_);
}

std::string PayoffExpr::str() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

int PayoffExpr::max_asset() const {
  int m = 0;
  walk_refs(*root_, [&](int asset, const GridIndex&) { m = std::max(m, asset); });
  return m;
}

void PayoffExpr::validate(int assets, int steps) const {
  walk_refs(*root_, [&](int asset, const GridIndex& time) {
    if (asset < 1 || asset > assets) {
      throw DimensionError("payoff '" + str() + "' references asset " + std::to_string(asset) +
                           " outside 1.." + std::to_string(assets));
    }
    const int k = time.resolve(steps);
    if (k < 0 || k > steps) {
      throw DimensionError("payoff '" + str() + "' references grid index " + std::to_string(k) +
                           " outside 0.." + std::to_string(steps));
    }
  });
}

Rational evaluate(const PayoffExpr& expr, const Path& path, const EvalOptions& options) {
  return Evaluator{path, options}(expr.root());
}

PayoffExpr substitute_prices(
    const PayoffExpr& expr, const std::function<PayoffExpr(int, GridIndex)>& price_map,
    const std::function<PayoffExpr(const PayoffExpr::RunningExtreme&)>& extreme_map) {
  return PayoffExpr(substitute(expr.root_ptr(), price_map, extreme_map));
}

PayoffExpr rescale_prices(const PayoffExpr& expr, const std::vector<Rational>& scales) {
  auto scale_of = [&](int asset) -> const Rational& {
    if (asset < 1 || static_cast<std::size_t>(asset) > scales.size()) {
      throw DimensionError("no scale for asset " + std::to_string(asset));
    }
    return scales[static_cast<std::size_t>(asset - 1)];
  };
  return substitute_prices(
      expr,
      [&](int asset, GridIndex time) {
        return PayoffExpr::constant(scale_of(asset)) * PayoffExpr::price(asset, time);
      },
      [&](const PayoffExpr::RunningExtreme& x) {
        PayoffExpr inner(make(x));
        return PayoffExpr::constant(scale_of(x.asset)) * inner;
      });
}

}  // namespace rip
