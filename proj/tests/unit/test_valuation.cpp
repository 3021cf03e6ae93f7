#include <gtest/gtest.h>

#include "random_models.hpp"
#include "rip/errors.hpp"
#include "rip/valuation.hpp"

using rip::InfoStructure;
using rip::InfoVariable;
using rip::PayoffExpr;
using rip::Rational;
using rip::StaticOptionBook;

namespace {

const PayoffExpr kCall = rip::parse_payoff("pos(S[1,T] - 1)");

InfoVariable at_money() { return InfoVariable::expression(rip::parse_payoff("ind(S[1,1] == 1)")); }

}  // namespace

TEST(Duality, Tri1Call) {
  const auto s = testing_support::tri1();
  const auto r = rip::duality_report<Rational>(s, kCall, InfoStructure::none(), StaticOptionBook());
  ASSERT_EQ(r.atoms.size(), 1u);
  EXPECT_EQ(r.atoms[0].hedge, rip::Extended<Rational>(Rational(1, 3)));
  EXPECT_EQ(r.atoms[0].price, rip::Extended<Rational>(Rational(1, 3)));
  EXPECT_EQ(r.atoms[0].gap, Rational(0));
  EXPECT_TRUE(r.holds(0));
  EXPECT_FALSE(r.chain);
}

TEST(Duality, InfeasibleAtomsAreMinusInfinityOnBothSides) {
  const auto s = rip::build_lattice(1, rip::TimeGrid::uniform(2), rip::iid_ratios(2, 1, {Rational(1, 2), 1, 2}));
  // Level sets of the running maximum above 1 force an upward drift on the
  // atom where the maximum is reached.
  const InfoVariable z = InfoVariable::expression(rip::parse_payoff("ind(maxt(1) > 1)"));
  const auto r = rip::duality_report<Rational>(s, kCall, InfoStructure::plus(z), StaticOptionBook());
  EXPECT_TRUE(r.any_infeasible());
  EXPECT_TRUE(r.holds(0));
  for (const auto& a : r.atoms) {
    if (!a.feasible) {
      EXPECT_TRUE(a.hedge.is_neg_inf());
      EXPECT_TRUE(a.arbitrage);
      EXPECT_FALSE(a.farkas.empty());
      EXPECT_FALSE(a.gap);
    }
  }
}

TEST(Chain, Tri1AtMoney) {
  const auto s = testing_support::tri1();
  const auto c = rip::chain_quantities<Rational>(s, at_money(), kCall);
  for (const auto& v : c.values()) EXPECT_EQ(v, rip::Extended<Rational>(Rational(1, 3)));
  EXPECT_TRUE(c.agree(0));
  const auto r = rip::duality_report<Rational>(s, kCall, InfoStructure::minus(at_money()), StaticOptionBook());
  ASSERT_TRUE(r.chain);
  EXPECT_TRUE(r.chain->agree(0));
}

TEST(ChainProperty, RandomTriples) {
  testing_support::Generator gen(51);
  for (int trial = 0; trial < 25; ++trial) {
    const auto lat = gen.lattice(3, 3, 0.1);
    const auto c = rip::chain_quantities<Rational>(lat.space, gen.static_variable(lat.space), gen.claim(lat.space));
    EXPECT_TRUE(c.agree(0)) << "trial " << trial;
  }
}

TEST(InfoValue, Tri1CallAtZero) {
  const auto s = testing_support::tri1();
  const auto v = rip::info_value_claim<Rational>(s, at_money(), 0, kCall);
  ASSERT_TRUE(v.value);
  EXPECT_EQ(*v.value, Rational(0));
  ASSERT_EQ(v.plus_table.size(), 2u);
  ASSERT_TRUE(v.plus_infimum);
  EXPECT_EQ(*v.plus_infimum, Rational(0));
}

TEST(InfoValue, DynamicNeedsScalingForm) {
  const auto s = testing_support::tri2();
  EXPECT_THROW(rip::info_value_claim<Rational>(s, InfoVariable::max_abs_deviation(), 1, kCall),
               rip::PreconditionError);
  const auto z = InfoVariable::tail_range_indicator(Rational(3, 4), Rational(3, 2), 1);
  const auto v = rip::info_value_claim<Rational>(s, z, 1, rip::parse_payoff("ind(maxt(1) <= 1)"));
  ASSERT_TRUE(v.value);
  EXPECT_GE(*v.value, 0);
}

TEST(InfoValue, ClaimsMustBeUnitInterval) {
  const auto s = testing_support::tri1();
  EXPECT_THROW(rip::info_value<Rational>(s, at_money(), 0, {rip::parse_payoff("S[1,T]")}), rip::PreconditionError);
  const auto family = rip::auto_claim_family(s);
  EXPECT_FALSE(family.empty());
  const auto r = rip::info_value<Rational>(s, at_money(), 0, family);
  EXPECT_TRUE(r.value);
  EXPECT_TRUE(r.best);
}

TEST(Transport, ClaimReadsTailRatios) {
  const PayoffExpr c = rip::parse_payoff("pos(S[1,T] - 1) + maxt(1, 0, 1)");
  const PayoffExpr lifted = rip::transport_claim(c, 2, 1, rip::TimeGrid::uniform(3));
  const rip::Path p(std::vector<Rational>{1, 2, 3, 5});
  // Tail (1, 3/2, 5/2).
  EXPECT_EQ(rip::evaluate(lifted, p), Rational(3, 2) + Rational(3, 2));
  EXPECT_THROW(rip::transport_claim(c, 2, 2, rip::TimeGrid::uniform(3)), rip::IncompatibleGridError);
  const auto z = rip::transport_info(InfoVariable::max_abs_deviation(), 2, 1, rip::TimeGrid::uniform(3));
  EXPECT_EQ(rip::evaluate(z.labeler, p), Rational(3, 2));
  EXPECT_EQ(rip::evaluate(z.labeler, rip::Path(std::vector<Rational>{1, 0, 0, 0})), Rational(1));
}

TEST(Timing, IidLatticeEquality) {
  const std::vector<Rational> ratios = {Rational(1, 2), 1, 2};
  const InfoVariable z = InfoVariable::range_indicator(Rational(3, 4), Rational(3, 2));
  const std::vector<PayoffExpr> claims = {rip::parse_payoff("ind(S[1,T] >= 2)"),
                                          rip::parse_payoff("ind(maxt(1) <= 1)")};
  const auto rows = rip::timing_comparison<Rational>(ratios, 1, {0, 1, 2}, z, claims);
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_TRUE(rows[0].report.value && rows[1].report.value && rows[2].report.value);
  EXPECT_LE(*rows[0].report.value, *rows[1].report.value);
  EXPECT_EQ(*rows[1].report.value, *rows[2].report.value);
}
