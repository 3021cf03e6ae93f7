#include <gtest/gtest.h>

#include "random_models.hpp"
#include "rip/errors.hpp"
#include "rip/information.hpp"

using rip::Filtration;
using rip::InfoStructure;
using rip::InfoVariable;
using rip::Partition;
using rip::Path;
using rip::PathSet;
using rip::Rational;

namespace {

InfoVariable terminal_above_one() { return InfoVariable::expression(rip::parse_payoff("ind(S[1,T] > 1)")); }

std::vector<Rational> seq(std::initializer_list<Rational> xs) { return xs; }

}  // namespace

TEST(Partition, FromKeysAndMeet) {
  const Partition a = Partition::from_keys(std::vector<int>{2, 1, 2, 1});
  EXPECT_EQ(a.atoms, (std::vector<PathSet>{{0, 2}, {1, 3}}));
  const Partition b = Partition::from_keys(std::vector<int>{0, 0, 1, 1});
  const Partition m = rip::meet(a, b);
  EXPECT_EQ(m.size(), 4u);
  EXPECT_TRUE(m.refines(a));
  EXPECT_TRUE(m.refines(b));
  EXPECT_FALSE(a.refines(b));
  EXPECT_TRUE(a.refines(Partition::trivial(4)));
  EXPECT_EQ(a.atom_containing(3), (PathSet{1, 3}));
}

TEST(Partition, PrefixAtomsOnTri2) {
  const auto s = testing_support::tri2();
  EXPECT_EQ(rip::prefix_partition(s, -1).size(), 1u);
  EXPECT_EQ(rip::prefix_partition(s, 0).size(), 1u);
  EXPECT_EQ(rip::prefix_partition(s, 1).size(), 3u);
  EXPECT_EQ(rip::prefix_partition(s, 2).size(), 9u);
  EXPECT_EQ(rip::f_atom(s, 4, 1), (PathSet{3, 4, 5}));
}

TEST(Filtration, VariantsOnTri2) {
  const auto s = testing_support::tri2();
  const InfoVariable z = terminal_above_one();
  const Partition zp = rip::z_partition(s, z);
  EXPECT_EQ(zp.size(), 2u);

  const Filtration none(s, InfoStructure::none());
  EXPECT_EQ(none.at(-1).size(), 1u);
  EXPECT_EQ(none.at(1).size(), 3u);

  const Filtration plus(s, InfoStructure::plus(z));
  EXPECT_EQ(plus.at(-1), zp);
  EXPECT_EQ(plus.at(0), zp);
  EXPECT_EQ(plus.at(1), rip::meet(rip::prefix_partition(s, 1), zp));

  const Filtration minus(s, InfoStructure::minus(z));
  EXPECT_EQ(minus.at(-1).size(), 1u);
  EXPECT_EQ(minus.at(0), zp);

  const Filtration dyn(s, InfoStructure::dynamic(z, 1));
  EXPECT_EQ(dyn.at(-1).size(), 1u);
  EXPECT_EQ(dyn.at(0).size(), 1u);
  EXPECT_EQ(dyn.at(1), rip::meet(rip::prefix_partition(s, 1), zp));
  EXPECT_THROW(dyn.at(3), rip::DomainError);
}

TEST(FiltrationProperty, IncreasingAndAboveNatural) {
  testing_support::Generator gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto lat = gen.lattice(3, 3, 0.0);
    const auto& s = lat.space;
    const InfoVariable z = gen.static_variable(s);
    std::vector<InfoStructure> variants = {InfoStructure::none(), InfoStructure::plus(z), InfoStructure::minus(z)};
    if (s.steps() > 1) variants.push_back(InfoStructure::dynamic(z, gen.uniform_int(1, s.steps() - 1)));
    for (const auto& info : variants) {
      const Filtration f(s, info);
      for (int t = 0; t <= s.steps(); ++t) {
        EXPECT_TRUE(f.at(t).refines(f.at(t - 1)));
        EXPECT_TRUE(f.at(t).refines(rip::prefix_partition(s, t)));
      }
      EXPECT_TRUE(f.at(s.steps()).refines(rip::z_partition(s, z)) || info.variant == rip::InfoVariant::kNone);
    }
  }
}

TEST(InfoStructure, DynamicArrivalMustBeInterior) {
  const auto s = testing_support::tri2();
  EXPECT_THROW(InfoStructure::dynamic(terminal_above_one(), 0).validate(s), rip::DomainError);
  EXPECT_THROW(InfoStructure::dynamic(terminal_above_one(), 2).validate(s), rip::DomainError);
  EXPECT_NO_THROW(InfoStructure::dynamic(terminal_above_one(), 1).validate(s));
  InfoStructure missing;
  missing.variant = rip::InfoVariant::kPlus;
  EXPECT_THROW(missing.validate(s), rip::DomainError);
}

TEST(Catalog, Labels) {
  const auto s = testing_support::tri2();
  const auto dev = rip::labels(s, InfoVariable::max_abs_deviation());
  // path 0 is (1, 1/2, 1/4): deviation 3/4; path 8 is (1, 2, 4): deviation 3.
  EXPECT_EQ(dev[0], Rational(3, 4));
  EXPECT_EQ(dev[8], Rational(3));
  const auto range = rip::labels(s, InfoVariable::range_indicator(Rational(1, 3), 3));
  EXPECT_EQ(range[0], Rational(0));
  EXPECT_EQ(range[4], Rational(1));
  EXPECT_THROW(InfoVariable::range_indicator(2, 1), rip::DomainError);
  const auto tail = rip::labels(s, InfoVariable::tail_range_indicator(Rational(3, 4), Rational(3, 2), 1));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(tail[i], Rational(i % 3 == 1 ? 1 : 0));
}

TEST(Catalog, TailLabelsAreOneAtZeroPrice) {
  const rip::PathSpace s(rip::TimeGrid::uniform(2), 1, {},
                         {Path(seq({1, 0, 0})), Path(seq({1, 2, 1})), Path(seq({1, 2, 4}))});
  const auto l = rip::labels(s, InfoVariable::tail_max_abs_deviation(1));
  EXPECT_EQ(l[0], Rational(1));
  EXPECT_EQ(l[1], Rational(1, 2));
  EXPECT_EQ(l[2], Rational(1));
}

TEST(ScalingForm, CatalogAndCounterexample) {
  const auto s = testing_support::tri3();
  EXPECT_TRUE(rip::check_scaling_form(s, InfoVariable::tail_range_indicator(Rational(3, 4), 2, 1), 1));
  EXPECT_TRUE(rip::check_scaling_form(s, InfoVariable::tail_max_abs_deviation(2), 2));
  EXPECT_FALSE(rip::check_scaling_form(s, InfoVariable::max_abs_deviation(), 1));
  EXPECT_FALSE(rip::check_scaling_form(s, InfoVariable::tail_max_abs_deviation(1), 2));
}

TEST(PathModify, SwapsPrefixesAndRescales) {
  const Path v(seq({1, 2, 4}));
  const Path vt(seq({1, Rational(1, 2), 1}));
  EXPECT_EQ(rip::path_modify(v, vt, Path(seq({1, Rational(1, 2), Rational(1, 4)})), 1), Path(seq({1, 2, 1})));
  EXPECT_EQ(rip::path_modify(v, vt, Path(seq({1, 2, 3})), 1), Path(seq({1, Rational(1, 2), Rational(3, 4)})));
  const Path other(seq({1, 1, 1}));
  EXPECT_EQ(rip::path_modify(v, vt, other, 1), other);
  EXPECT_THROW(rip::path_modify(Path(seq({1, 0, 0})), vt, other, 1), rip::DomainError);
}

TEST(PathModifyProperty, AppliedTwiceIsIdentity) {
  const auto s = testing_support::tri3();
  for (std::size_t a = 0; a < s.size(); a += 4) {
    for (std::size_t b = 0; b < s.size(); b += 5) {
      for (std::size_t w = 0; w < s.size(); ++w) {
        const Path once = rip::path_modify(s.path(a), s.path(b), s.path(w), 1);
        EXPECT_EQ(rip::path_modify(s.path(a), s.path(b), once, 1), s.path(w));
      }
    }
  }
}

TEST(TimeChange, IndexUnits) {
  const Path w(seq({1, 2, 3, 4, 5}));
  EXPECT_EQ(rip::time_change(w, 2, 2), w);
  EXPECT_EQ(rip::time_change(w, 2, 1, 2), Path(seq({1, 3, 5})));
  EXPECT_EQ(rip::time_change(w, 2, 1, 3), Path(seq({1, 3, 4, 5})));
  EXPECT_THROW(rip::time_change(w, 1, 3), rip::IncompatibleGridError);
  EXPECT_THROW(rip::time_change(w, 0, 1), rip::IncompatibleGridError);
  EXPECT_THROW(rip::time_change(w, 4, 3), rip::IncompatibleGridError);
}
