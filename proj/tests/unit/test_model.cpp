#include <gtest/gtest.h>

#include "random_models.hpp"
#include "rip/errors.hpp"
#include "rip/model.hpp"

using rip::Path;
using rip::PathSpace;
using rip::Rational;
using rip::TimeGrid;

TEST(TimeGrid, Validation) {
  EXPECT_THROW(TimeGrid({Rational(0)}), rip::DomainError);
  EXPECT_THROW(TimeGrid({Rational(1), Rational(2)}), rip::DomainError);
  EXPECT_THROW(TimeGrid({Rational(0), Rational(1), Rational(1)}), rip::DomainError);
  const TimeGrid g = TimeGrid::uniform(4, 2);
  EXPECT_EQ(g.steps(), 4);
  EXPECT_EQ(g.time(1), Rational(1, 2));
  EXPECT_TRUE(g.is_uniform());
  EXPECT_FALSE(TimeGrid({Rational(0), Rational(1), Rational(3)}).is_uniform());
}

TEST(Lattice, Tri1Order) {
  const PathSpace s = testing_support::tri1();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.path(0).at(0, 1), Rational(1, 2));
  EXPECT_EQ(s.path(1).at(0, 1), Rational(1));
  EXPECT_EQ(s.path(2).at(0, 1), Rational(2));
}

TEST(Lattice, Tri2FirstStepMostSignificant) {
  const PathSpace s = testing_support::tri2();
  ASSERT_EQ(s.size(), 9u);
  EXPECT_EQ(s.path(1).at(0, 1), Rational(1, 2));
  EXPECT_EQ(s.path(1).at(0, 2), Rational(1, 2));
  EXPECT_EQ(s.path(3).at(0, 1), Rational(1));
  EXPECT_EQ(s.path(3).at(0, 2), Rational(1, 2));
}

TEST(Lattice, CapAndValidation) {
  EXPECT_THROW(rip::build_lattice(1, TimeGrid::uniform(3), rip::iid_ratios(3, 1, {1, 2, 3}), 26),
               rip::CapacityError);
  EXPECT_THROW(rip::build_lattice(1, TimeGrid::uniform(1), rip::iid_ratios(1, 1, {0, 2})), rip::DomainError);
  EXPECT_THROW(rip::build_lattice(1, TimeGrid::uniform(1), rip::iid_ratios(1, 1, {})), rip::DomainError);
  const PathSpace dedup = rip::build_lattice(1, TimeGrid::uniform(1), rip::iid_ratios(1, 1, {2, 1, 2}));
  EXPECT_EQ(dedup.size(), 2u);
}

TEST(Lattice, TwoAssets) {
  const PathSpace s = rip::build_lattice(2, TimeGrid::uniform(2), rip::iid_ratios(2, 2, {Rational(1, 2), 2}));
  EXPECT_EQ(s.size(), 16u);
  EXPECT_EQ(s.assets(), 2);
}

TEST(PathSpace, Validation) {
  const TimeGrid g = TimeGrid::uniform(1);
  EXPECT_THROW(PathSpace(g, 1, {}, {}), rip::DimensionError);
  EXPECT_THROW(PathSpace(g, 1, {}, {Path({Rational(2), Rational(1)})}), rip::DomainError);
  EXPECT_THROW(PathSpace(g, 1, {}, {Path({Rational(1), Rational(-1)})}), rip::DomainError);
  EXPECT_THROW(PathSpace(g, 1, {}, {Path({Rational(1), Rational(2)}), Path({Rational(1), Rational(2)})}),
               rip::DomainError);
  EXPECT_THROW(PathSpace(g, 1, {}, {Path({Rational(1), Rational(2), Rational(3)})}), rip::DimensionError);
  const PathSpace s(g, 1, {}, {Path({Rational(1), Rational(2)}), Path({Rational(1), Rational(0)})});
  EXPECT_EQ(s.find(Path({Rational(1), Rational(0)})), 1u);
  EXPECT_FALSE(s.find(Path({Rational(1), Rational(3)})).has_value());
}

TEST(InfoSpace, TerminalConstraintAndInterpolation) {
  const PathSpace base = testing_support::tri2();
  const rip::PayoffExpr call = rip::parse_payoff("pos(S[1,T] - 1)");
  Rational mean = 0;
  for (const auto& p : base.paths()) mean += rip::evaluate(call, p);
  mean /= base.size();
  const PathSpace lin = rip::build_info_space(base, {{call, mean}});
  ASSERT_EQ(lin.assets(), 2);
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const Rational terminal = rip::evaluate(call, base.path(i)) / mean;
    EXPECT_EQ(lin.path(i).at(1, 0), Rational(1));
    EXPECT_EQ(lin.path(i).at(1, 2), terminal);
    EXPECT_EQ(lin.path(i).at(1, 1), (Rational(1) + terminal) / 2);
  }
  rip::OptionInterpolation ref;
  ref.reference_weights = std::vector<Rational>(base.size(), Rational(1, 9));
  const PathSpace cond = rip::build_info_space(base, {{call, mean}}, ref);
  // Conditional expectation given the first step, normalised.
  for (std::size_t i = 0; i < cond.size(); ++i) {
    Rational sum = 0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (base.path(j).at(0, 1) == base.path(i).at(0, 1)) sum += rip::evaluate(call, base.path(j));
    }
    EXPECT_EQ(cond.path(i).at(1, 1), sum / 3 / mean);
  }
  EXPECT_THROW(rip::build_info_space(base, {{call, 0}}), rip::DomainError);
  EXPECT_THROW(rip::build_info_space(base, {{call, mean * 2}}, ref), rip::DomainError);
}

TEST(Geometry, FattenAndDistances) {
  const PathSpace s = testing_support::tri1();
  EXPECT_EQ(rip::sup_dist(s.path(0), s.path(2)), Rational(3, 2));
  EXPECT_EQ(rip::min_pairwise_distance(s), Rational(1, 2));
  EXPECT_EQ(rip::fatten(s, {1}, 0), (rip::PathSet{1}));
  EXPECT_EQ(rip::fatten(s, {1}, Rational(1, 2)), (rip::PathSet{0, 1}));
  EXPECT_EQ(rip::fatten(s, {1}, 1), (rip::PathSet{0, 1, 2}));
  EXPECT_THROW(rip::check_subset(s, {1, 0}), rip::DimensionError);
  EXPECT_THROW(rip::check_subset(s, {3}), rip::DimensionError);
}

TEST(StaticBook, CashEntryAndValidation) {
  rip::StaticOptionBook book;
  EXPECT_TRUE(book.cash_only());
  EXPECT_EQ(book.entry(0).price, Rational(1));
  book.add(rip::parse_payoff("S[2,T]"), 1);
  EXPECT_THROW(book.validate(testing_support::tri1()), rip::DimensionError);
}
