#include <gtest/gtest.h>

#include "oracle.hpp"
#include "random_models.hpp"
#include "rip/errors.hpp"
#include "rip/pricing.hpp"

using rip::InfoStructure;
using rip::InfoVariable;
using rip::MartingaleMeasure;
using rip::PayoffExpr;
using rip::Rational;
using rip::StaticOptionBook;

namespace {

const PayoffExpr kCall = rip::parse_payoff("pos(S[1,T] - 1)");

Rational price_of(const rip::PathSpace& s, const PayoffExpr& claim, const StaticOptionBook& book = {},
                  const InfoStructure& info = InfoStructure::none()) {
  const auto table = rip::model_price<Rational>(s, s.all(), info, claim, book);
  EXPECT_EQ(table.size(), 1u);
  EXPECT_TRUE(table[0].value.is_finite());
  return table[0].value.value();
}

}  // namespace

TEST(ModelPrice, Tri1HandValues) {
  const auto s = testing_support::tri1();
  EXPECT_EQ(price_of(s, kCall), Rational(1, 3));
  EXPECT_EQ(price_of(s, rip::parse_payoff("pos(1 - S[1,T])")), Rational(1, 3));
  EXPECT_EQ(price_of(s, rip::parse_payoff("ind(S[1,T] >= 2)")), Rational(1, 3));
}

TEST(ModelPrice, Tri1AgainstVertexEnumeration) {
  const auto s = testing_support::tri1();
  for (const char* text : {"pos(S[1,T] - 1)", "pos(1 - S[1,T])", "ind(S[1,T] >= 2)", "S[1,T]", "abs(S[1,T] - 1)"}) {
    const PayoffExpr claim = rip::parse_payoff(text);
    const auto expected = oracle::brute_price(s, s.all(), InfoStructure::none(), claim, StaticOptionBook());
    ASSERT_TRUE(expected);
    EXPECT_EQ(price_of(s, claim), *expected) << text;
  }
}

TEST(ModelPrice, CalibratedDigitalGivesUniqueMeasure) {
  const auto s = testing_support::tri1();
  StaticOptionBook book;
  book.add(rip::parse_payoff("ind(S[1,T] == 1)"), Rational(1, 5));
  const auto table = rip::model_price<Rational>(s, s.all(), InfoStructure::none(), kCall, book);
  ASSERT_TRUE(table[0].value.is_finite());
  EXPECT_EQ(table[0].value.value(), Rational(4, 15));
  ASSERT_TRUE(table[0].measure);
  // Paths (1,1/2), (1,1), (1,2).
  EXPECT_EQ(table[0].measure->weights, (std::vector<Rational>{Rational(8, 15), Rational(1, 5), Rational(4, 15)}));
  const auto poly = oracle::measure_polytope(
      {{{1, Rational(1, 2)}, {1, 1}, {1, 2}}, {}, {{{0, 1, 0}, Rational(1, 5)}}});
  EXPECT_EQ(oracle::vertices(poly).size(), 1u);
}

TEST(ModelPrice, PlusAtoms) {
  const auto s = testing_support::tri1();
  const InfoVariable z = InfoVariable::expression(rip::parse_payoff("ind(S[1,1] == 1)"));
  const auto table = rip::model_price<Rational>(s, s.all(), InfoStructure::plus(z), kCall, StaticOptionBook());
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(rip::value_at(table, 1).value, rip::Extended<Rational>(Rational(0)));
  EXPECT_EQ(rip::value_at(table, 0).value, rip::Extended<Rational>(Rational(1, 3)));
}

TEST(ModelPrice, EmptyClassHasCertificate) {
  const auto s = rip::build_lattice(1, rip::TimeGrid::uniform(1), rip::iid_ratios(1, 1, {2, 3}));
  const auto table = rip::model_price<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  EXPECT_TRUE(table[0].value.is_neg_inf());
  EXPECT_FALSE(table[0].farkas.empty());
  EXPECT_FALSE(table[0].measure);
  const auto lp = rip::build_measure_lp(s, s.all(), InfoStructure::none(), StaticOptionBook(), 0, 1, kCall);
  rip::lp::Outcome<Rational> out;
  out.status = rip::lp::Status::kInfeasible;
  out.dual = table[0].farkas;
  EXPECT_TRUE(rip::lp::verify_certificate(lp, out));
}

TEST(ModelPriceProperty, AgreesWithVertexEnumeration) {
  testing_support::Generator gen(31);
  int compared = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto lat = gen.lattice(2, 4, 0.15);
    const auto& s = lat.space;
    if (s.size() > 16) continue;
    const PayoffExpr claim = gen.claim(s);
    const InfoVariable z = gen.static_variable(s);
    StaticOptionBook book;
    if (gen.coin(0.3)) book.add(gen.unit_claim(s), Rational(gen.uniform_int(1, 4), 5));
    std::vector<InfoStructure> infos = {InfoStructure::none(), InfoStructure::plus(z), InfoStructure::minus(z)};
    if (s.steps() > 1) infos.push_back(InfoStructure::dynamic(z, 1));
    for (const auto& info : infos) {
      for (const auto& p : rip::model_price<Rational>(s, s.all(), info, claim, book)) {
        const auto expected = oracle::brute_price(s, p.target, info, claim, book);
        if (expected) {
          ASSERT_TRUE(p.value.is_finite()) << "trial " << trial;
          EXPECT_EQ(p.value.value(), *expected) << "trial " << trial;
        } else {
          EXPECT_TRUE(p.value.is_neg_inf()) << "trial " << trial;
        }
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(Measure, AuditRejectsBrokenMeasure) {
  const auto s = testing_support::tri1();
  const rip::Filtration f = rip::Filtration::natural(s);
  const rip::MeasureProblem problem{s.all(), rip::TradingSchedule::from(f, 0, 1), {s.all()}, std::nullopt};
  MartingaleMeasure<Rational> good{{Rational(2, 9), Rational(2, 3), Rational(1, 9)}};
  EXPECT_TRUE(rip::audit_measure(s, good, problem, StaticOptionBook()));
  MartingaleMeasure<Rational> bad{{Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  EXPECT_FALSE(rip::audit_measure(s, bad, problem, StaticOptionBook()));
  EXPECT_EQ(good.support(), (rip::PathSet{0, 1, 2}));
  EXPECT_EQ(good.mass({0, 2}), Rational(1, 3));
}

TEST(Concatenation, RoundTripOnTri2) {
  testing_support::Generator gen(41);
  const auto s = testing_support::tri2();
  const rip::Partition atoms = rip::prefix_partition(s, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const MartingaleMeasure<Rational> m{gen.weights(s.size(), static_cast<std::size_t>(gen.uniform_int(1, 9)))};
    const auto pieces = rip::condition_measure(s, m, atoms);
    std::vector<std::optional<MartingaleMeasure<Rational>>> kernel(atoms.size());
    std::vector<Rational> masses(atoms.size(), Rational(0));
    for (const auto& piece : pieces) {
      const std::size_t a = atoms.atom_of[piece.atom.front()];
      kernel[a] = piece.conditional;
      masses[a] = piece.mass;
      EXPECT_EQ(piece.conditional.mass(piece.atom), Rational(1));
    }
    EXPECT_EQ(rip::concatenate_measure(s, 1, masses, kernel).weights, m.weights);
    EXPECT_EQ(rip::concatenate_measure(s, 1, m, kernel).weights, m.weights);
  }
}

TEST(Dpp, PriceComposition) {
  const auto s = testing_support::tri2();
  const auto r = rip::dpp_price<Rational>(s, kCall, 1, InfoStructure::none());
  EXPECT_EQ(r.direct, r.composed);
  const InfoVariable z = InfoVariable::tail_range_indicator(Rational(3, 4), Rational(3, 2), 1);
  const auto d = rip::dpp_price<Rational>(s, rip::parse_payoff("pos(maxt(1) - 1)"), 1, InfoStructure::dynamic(z, 1));
  EXPECT_EQ(d.direct, d.composed);
}

TEST(Approx, LimitMatchesExactPrice) {
  const auto s = testing_support::tri2();
  const auto exact = rip::model_price<Rational>(s, s.all(), InfoStructure::none(), kCall, StaticOptionBook());
  const auto limit = rip::approx_price_limit<Rational>(s, s.all(), kCall, StaticOptionBook());
  EXPECT_EQ(limit.limit, exact[0].value);
  const auto t1 = testing_support::tri1();
  const auto dirac = rip::approx_price_limit<Rational>(t1, {1}, kCall, StaticOptionBook());
  EXPECT_EQ(dirac.limit, rip::Extended<Rational>(Rational(0)));
}

TEST(Approx, PriceIsMonotoneInRadius) {
  const auto s = testing_support::tri1();
  const auto small = rip::approx_price<Rational>(s, {1}, Rational(1, 10), kCall, StaticOptionBook());
  const auto large = rip::approx_price<Rational>(s, {1}, Rational(3, 5), kCall, StaticOptionBook());
  EXPECT_TRUE(small.value <= large.value);
  ASSERT_TRUE(large.value.is_finite());
  EXPECT_GT(large.value.value(), 0);
}
