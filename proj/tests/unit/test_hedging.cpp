#include <gtest/gtest.h>

#include "random_models.hpp"
#include "rip/errors.hpp"
#include "rip/hedging.hpp"

using rip::HedgeValue;
using rip::InfoStructure;
using rip::InfoVariable;
using rip::PayoffExpr;
using rip::Rational;
using rip::StaticOptionBook;

namespace {

const PayoffExpr kCall = rip::parse_payoff("pos(S[1,T] - 1)");

InfoVariable at_money() { return InfoVariable::expression(rip::parse_payoff("ind(S[1,1] == 1)")); }

Rational value(const HedgeValue<Rational>& h) {
  EXPECT_TRUE(h.value.is_finite());
  return h.value.value();
}

}  // namespace

TEST(Gains, SingleAndTwoSteps) {
  const auto s1 = testing_support::tri1();
  rip::Strategy<Rational> g;
  g.static_position = {0};
  g.schedule = rip::TradingSchedule::from(rip::Filtration::natural(s1), 0, 1);
  g.holdings = {{{Rational(1)}}};
  EXPECT_EQ(rip::gains(s1, g, 2, 0, 1), Rational(1));

  const auto s2 = testing_support::tri2();
  rip::Strategy<Rational> h;
  h.static_position = {0};
  h.schedule = rip::TradingSchedule::from(rip::Filtration::natural(s2), 0, 2);
  h.holdings = {{{Rational(1)}}, {{Rational(1)}, {Rational(1)}, {Rational(1)}}};
  EXPECT_EQ(rip::gains(s2, h, 0, 0, 2), Rational(-3, 4));
}

TEST(Superhedge, Tri1Call) {
  const auto s = testing_support::tri1();
  const auto table = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(value(table[0]), Rational(1, 3));
  ASSERT_TRUE(table[0].strategy);
  EXPECT_EQ(table[0].strategy->holdings[0][0][0], Rational(2, 3));
  EXPECT_EQ(table[0].strategy->static_position[0], Rational(1, 3));
}

TEST(Superhedge, ConstantClaim) {
  const auto s = testing_support::tri1();
  const auto table =
      rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), PayoffExpr::constant(5), StaticOptionBook());
  EXPECT_EQ(value(table[0]), Rational(5));
  EXPECT_EQ(table[0].strategy->holdings[0][0][0], Rational(0));
}

TEST(Superhedge, PlusAtoms) {
  const auto s = testing_support::tri1();
  const auto table = rip::superhedge<Rational>(s, s.all(), InfoStructure::plus(at_money()), kCall, StaticOptionBook());
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(value(rip::value_at(table, 1)), Rational(0));
  EXPECT_EQ(value(rip::value_at(table, 0)), Rational(1, 3));
  EXPECT_EQ(value(rip::value_at(table, 2)), Rational(1, 3));
  const auto minus = rip::superhedge<Rational>(s, s.all(), InfoStructure::minus(at_money()), kCall, StaticOptionBook());
  ASSERT_EQ(minus.size(), 1u);
  EXPECT_EQ(value(minus[0]), Rational(1, 3));
}

TEST(Superhedge, StaticDigitalBook) {
  const auto s = testing_support::tri1();
  StaticOptionBook book;
  book.add(rip::parse_payoff("ind(S[1,T] == 1)"), Rational(1, 5));
  const auto table = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), kCall, book);
  EXPECT_EQ(value(table[0]), Rational(4, 15));
  EXPECT_EQ(table[0].strategy->cost(book), Rational(4, 15));
}

TEST(Superhedge, ArbitrageRay) {
  const auto s = rip::build_lattice(1, rip::TimeGrid::uniform(2), rip::iid_ratios(2, 1, {2, 3}));
  const auto table = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  ASSERT_TRUE(table[0].value.is_neg_inf());
  ASSERT_TRUE(table[0].arbitrage);
  const auto& arb = *table[0].arbitrage;
  EXPECT_LT(arb.cost(StaticOptionBook()), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GE(rip::terminal_value(s, StaticOptionBook(), arb, i), 0);
  }
}

TEST(Superhedge, FloatMatchesRational) {
  const auto s = testing_support::tri2();
  const auto exact = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  const auto approx = rip::superhedge<double>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  EXPECT_NEAR(exact[0].value.value().get_d(), approx[0].value.value(), 1e-9);
}

TEST(Superhedge, Interval) {
  const auto s = testing_support::tri2();
  // Path 7 is (1, 2, 2).
  const auto h = rip::superhedge_interval<Rational>(s, 7, 1, InfoStructure::none(),
                                                    rip::parse_payoff("pos(S[1,2] - 2)"));
  EXPECT_EQ(value(h), Rational(2, 3));
  EXPECT_EQ(h.target, (rip::PathSet{6, 7, 8}));
}

TEST(SuperhedgeProperty, StrategiesDominatePathwise) {
  testing_support::Generator gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto lat = gen.lattice(3, 3, 0.2);
    const auto& s = lat.space;
    const PayoffExpr claim = gen.claim(s);
    const InfoVariable z = gen.static_variable(s);
    for (const auto& info : {InfoStructure::none(), InfoStructure::plus(z), InfoStructure::minus(z)}) {
      for (const auto& h : rip::superhedge<Rational>(s, s.all(), info, claim, StaticOptionBook())) {
        if (h.value.is_finite()) {
          for (std::size_t i : h.target) {
            EXPECT_GE(rip::terminal_value(s, StaticOptionBook(), *h.strategy, i), rip::evaluate(claim, s.path(i)));
          }
          EXPECT_EQ(h.strategy->cost(StaticOptionBook()), h.value.value());
        } else {
          ASSERT_TRUE(h.arbitrage);
          EXPECT_LT(h.arbitrage->cost(StaticOptionBook()), 0);
          for (std::size_t i : h.target) {
            EXPECT_GE(rip::terminal_value(s, StaticOptionBook(), *h.arbitrage, i), 0);
          }
        }
      }
    }
  }
}

TEST(SuperhedgeProperty, MoreInformationNeverCostsMore) {
  testing_support::Generator gen(22);
  for (int trial = 0; trial < 40; ++trial) {
    const auto lat = gen.lattice(3, 3, 0.0);
    const auto& s = lat.space;
    const PayoffExpr claim = gen.claim(s);
    const InfoVariable z = gen.static_variable(s);
    const auto none = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), claim, StaticOptionBook());
    const auto minus = rip::superhedge<Rational>(s, s.all(), InfoStructure::minus(z), claim, StaticOptionBook());
    EXPECT_TRUE(minus[0].value <= none[0].value);
    for (const auto& h : rip::superhedge<Rational>(s, s.all(), InfoStructure::plus(z), claim, StaticOptionBook())) {
      EXPECT_TRUE(h.value <= minus[0].value);
    }
  }
}

TEST(Dpp, NaturalFiltration) {
  const auto s = testing_support::tri2();
  const auto r = rip::dpp_superhedge<Rational>(s, kCall, 1, InfoStructure::none());
  EXPECT_EQ(r.direct, r.composed);
  EXPECT_EQ(r.inner.size(), 3u);
}

TEST(Dpp, DynamicScalingForm) {
  const auto s = testing_support::tri2();
  const InfoVariable z = InfoVariable::expression(rip::parse_payoff("ind(nrat(S[1,2], S[1,1]) == 1)"));
  ASSERT_TRUE(rip::check_scaling_form(s, z, 1));
  const auto r = rip::dpp_superhedge<Rational>(s, rip::parse_payoff("ind(S[1,2] == S[1,1])"), 1,
                                               InfoStructure::dynamic(z, 1));
  EXPECT_EQ(r.direct, r.composed);
  for (const auto& e : r.inner) {
    ASSERT_TRUE(e.value.is_finite());
    EXPECT_TRUE(e.value.value() == 0 || e.value.value() == 1);
  }
}

TEST(Dpp, Preconditions) {
  const auto s = testing_support::tri2();
  StaticOptionBook book;
  book.add(kCall, Rational(1, 3));
  EXPECT_THROW(rip::check_dpp_preconditions(s, InfoStructure::none(), 1, book), rip::PreconditionError);
  EXPECT_THROW(rip::check_dpp_preconditions(s, InfoStructure::minus(at_money()), 1, StaticOptionBook()),
               rip::PreconditionError);
  EXPECT_THROW(rip::check_dpp_preconditions(s, InfoStructure::dynamic(InfoVariable::max_abs_deviation(), 1), 1,
                                            StaticOptionBook()),
               rip::PreconditionError);
}

TEST(Approx, ZeroRadiusIsExact) {
  const auto s = testing_support::tri2();
  const auto exact = rip::superhedge<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  const auto approx = rip::approx_superhedge<Rational>(s, s.all(), 0, kCall, StaticOptionBook());
  EXPECT_EQ(exact[0].value, approx.value);
  const auto wide = rip::approx_superhedge<Rational>(testing_support::tri1(), {1}, Rational(1, 2), kCall,
                                                     StaticOptionBook());
  // {(1,1/2), (1,1)}: the flat path carries a martingale measure.
  EXPECT_EQ(wide.target, (rip::PathSet{0, 1}));
  EXPECT_EQ(wide.value, rip::Extended<Rational>(Rational(0)));
}
