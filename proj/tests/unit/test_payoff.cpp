#include <gtest/gtest.h>

#include <random>

#include "rip/errors.hpp"
#include "rip/model.hpp"
#include "rip/payoff.hpp"

using rip::CompareOp;
using rip::Function;
using rip::GridIndex;
using rip::Path;
using rip::PayoffExpr;
using rip::Rational;

namespace {

Path single(std::initializer_list<Rational> xs) { return Path(std::vector<Rational>(xs)); }

// Random AST over one or two assets and grid indices 0..3.
PayoffExpr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<int> small(-9, 9);
  std::uniform_int_distribution<int> asset(1, 2);
  std::uniform_int_distribution<int> idx(0, 3);
  auto grid = [&] { return idx(rng) == 3 ? GridIndex::end() : GridIndex::at(idx(rng)); };
  switch (kind(rng)) {
    case 0: return PayoffExpr::constant(Rational(small(rng), 1 + idx(rng)));
    case 1: return PayoffExpr::price(asset(rng), grid());
    case 2: {
      const int a = asset(rng);
      if (idx(rng) < 2) return small(rng) > 0 ? PayoffExpr::running_max(a) : PayoffExpr::running_min(a);
      const int k0 = idx(rng);
      return PayoffExpr::running_max(a, GridIndex::at(k0), GridIndex::at(k0 + idx(rng)));
    }
    case 3: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 6: return random_expr(rng, depth - 1) / random_expr(rng, depth - 1);
    case 7: return -random_expr(rng, depth - 1);
    case 8: {
      const CompareOp ops[] = {CompareOp::kLess, CompareOp::kLessEqual, CompareOp::kGreater,
                               CompareOp::kGreaterEqual, CompareOp::kEqual};
      return PayoffExpr::indicator(ops[idx(rng) % 5 + (small(rng) > 5 ? 1 : 0)], random_expr(rng, depth - 1),
                                   random_expr(rng, depth - 1));
    }
    default: {
      switch (idx(rng)) {
        case 0: return PayoffExpr::call(Function::kMax, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
        case 1: return PayoffExpr::call(Function::kMin, {random_expr(rng, depth - 1)});
        case 2: return PayoffExpr::call(Function::kAbs, {random_expr(rng, depth - 1)});
        default: return PayoffExpr::call(Function::kNRat, {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
      }
    }
  }
}

}  // namespace

TEST(ParsePayoff, CallOnTerminal) {
  const PayoffExpr e = rip::parse_payoff("pos(S[1,T] - 1)");
  EXPECT_EQ(e, PayoffExpr::call(Function::kPos, {PayoffExpr::price(1, GridIndex::end()) - PayoffExpr::constant(1)}));
}

TEST(ParsePayoff, CorridorDigital) {
  const PayoffExpr e = rip::parse_payoff("ind(maxt(1) < 2) * 0.5");
  EXPECT_EQ(e, PayoffExpr::indicator(CompareOp::kLess, PayoffExpr::running_max(1), PayoffExpr::constant(2)) *
                   PayoffExpr::constant(Rational(1, 2)));
}

TEST(ParsePayoff, SyntaxErrorCarriesColumn) {
  try {
    rip::parse_payoff("S[1,");
    FAIL() << "expected ParseError";
  } catch (const rip::ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(ParsePayoff, Errors) {
  EXPECT_THROW(rip::parse_payoff("foo(1)"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("pos(1, 2)"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("ind(1 + 2)"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("S[0,1]"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("1 +"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("(1"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("1 2"), rip::ParseError);
  EXPECT_THROW(rip::parse_payoff("maxt(1, 2)"), rip::ParseError);
  try {
    rip::parse_payoff("1 +\n  bar");
    FAIL();
  } catch (const rip::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
    EXPECT_EQ(e.token(), "bar");
  }
}

TEST(ParsePayoff, RatioLiteralEqualsDivisionValue) {
  const Path p = single({1, 2});
  EXPECT_EQ(rip::evaluate(rip::parse_payoff("4/9"), p), rip::evaluate(rip::parse_payoff("4 / 9"), p));
  EXPECT_EQ(rip::evaluate(rip::parse_payoff("-3/4"), p), Rational(-3, 4));
}

TEST(ParsePayoffProperty, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const PayoffExpr e = random_expr(rng, 4);
    const std::string text = e.str();
    EXPECT_EQ(rip::parse_payoff(text), e) << text;
  }
}

TEST(Evaluate, Semantics) {
  const Path p = single({1, Rational(1, 2), 2, Rational(3, 2)});
  auto ev = [&](const char* s) { return rip::evaluate(rip::parse_payoff(s), p); };
  EXPECT_EQ(ev("S[1,T]"), Rational(3, 2));
  EXPECT_EQ(ev("S[1,2]"), Rational(2));
  EXPECT_EQ(ev("maxt(1)"), Rational(2));
  EXPECT_EQ(ev("mint(1)"), Rational(1, 2));
  EXPECT_EQ(ev("maxt(1, 2, 3)"), Rational(2));
  EXPECT_EQ(ev("mint(1, 2, 3)"), Rational(3, 2));
  EXPECT_EQ(ev("pos(1 - S[1,T])"), Rational(0));
  EXPECT_EQ(ev("abs(1 - S[1,T])"), Rational(1, 2));
  EXPECT_EQ(ev("max(1, 3, 2)"), Rational(3));
  EXPECT_EQ(ev("min(1, 3, 2)"), Rational(1));
  EXPECT_EQ(ev("ind(S[1,1] <= 1/2)"), Rational(1));
  EXPECT_EQ(ev("ind(S[1,1] < 1/2)"), Rational(0));
  EXPECT_EQ(ev("ind(S[1,2] == 2)"), Rational(1));
  EXPECT_EQ(ev("nrat(S[1,3], S[1,2])"), Rational(3, 4));
  EXPECT_EQ(ev("nrat(S[1,3], 0)"), Rational(1));
  EXPECT_EQ(ev("-(S[1,1]) * 4"), Rational(-2));
  EXPECT_THROW(ev("1 / (S[1,1] - 1/2)"), rip::EvalError);
  EXPECT_THROW(ev("S[2,1]"), rip::EvalError);
  EXPECT_THROW(ev("S[1,9]"), rip::EvalError);
}

TEST(Evaluate, EqualityTolerance) {
  const Path p = single({1, Rational(1000000000001, 1000000000000)});
  const PayoffExpr e = rip::parse_payoff("ind(S[1,1] == 1)");
  EXPECT_EQ(rip::evaluate(e, p), Rational(0));
  rip::EvalOptions opts;
  opts.eq_tolerance = Rational(1, 1000000000000);
  EXPECT_EQ(rip::evaluate(e, p, opts), Rational(1));
}

TEST(PayoffExpr, ValidateAndMaxAsset) {
  const PayoffExpr e = rip::parse_payoff("S[2,3] + maxt(1)");
  EXPECT_EQ(e.max_asset(), 2);
  EXPECT_NO_THROW(e.validate(2, 3));
  EXPECT_THROW(e.validate(1, 3), rip::DimensionError);
  EXPECT_THROW(e.validate(2, 2), rip::DimensionError);
}

TEST(PayoffExpr, RescalePrices) {
  const PayoffExpr e = rip::rescale_prices(rip::parse_payoff("pos(S[1,T] - 100)"), {Rational(100)});
  EXPECT_EQ(rip::evaluate(e, single({1, Rational(6, 5)})), Rational(20));
  const PayoffExpr m = rip::rescale_prices(rip::parse_payoff("maxt(1)"), {Rational(10)});
  EXPECT_EQ(rip::evaluate(m, single({1, 3, 2})), Rational(30));
}
