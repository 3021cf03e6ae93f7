#include <gtest/gtest.h>

#include "rip/errors.hpp"
#include "rip/numeric.hpp"

using rip::Extended;
using rip::Rational;

TEST(ParseRational, Forms) {
  EXPECT_EQ(rip::parse_rational("4/9"), Rational(4, 9));
  EXPECT_EQ(rip::parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(rip::parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(rip::parse_rational(" 12 "), Rational(12));
  EXPECT_EQ(rip::parse_rational("1.5e-3"), Rational(3, 2000));
  EXPECT_EQ(rip::parse_rational("2E2"), Rational(200));
  EXPECT_EQ(rip::parse_rational(".5"), Rational(1, 2));
}

TEST(ParseRational, Rejects) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "1e", "--1", "1/-2"}) {
    EXPECT_THROW(rip::parse_rational(bad), rip::DomainError) << bad;
  }
}

TEST(ParseRational, RoundTripsCanonicalText) {
  for (const char* s : {"0", "1", "-7", "3/4", "-22/7", "123456789012345678901234567891/7"}) {
    EXPECT_EQ(rip::to_string(rip::parse_rational(s)), s);
  }
}

TEST(Extended, OrderAndEquality) {
  const Extended<Rational> ninf = Extended<Rational>::neg_infinity();
  const Extended<Rational> one = Rational(1);
  EXPECT_TRUE(ninf < one);
  EXPECT_FALSE(one < ninf);
  EXPECT_FALSE(ninf < ninf);
  EXPECT_EQ(ninf, Extended<Rational>::neg_infinity());
  EXPECT_EQ(rip::max(ninf, one), one);
  EXPECT_EQ(ninf.str(), "-inf");
  EXPECT_EQ(one.str(), "1");
  EXPECT_TRUE(rip::extended_equal(Extended<double>(1.0), Extended<double>(1.0 + 1e-9), 1e-7));
  EXPECT_FALSE(rip::extended_equal(Extended<double>(1.0), Extended<double>::neg_infinity(), 1e-7));
}

TEST(Arith, FloatTextIsRoundTrip) {
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(rip::Arith<double>::str(x)), x);
}
