#pragma once

// Seeded generators for small random instances.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rip/information.hpp"
#include "rip/model.hpp"
#include "rip/payoff.hpp"

namespace testing_support {

using rip::Rational;

struct RandomLattice {
  int steps = 1;
  std::vector<std::vector<Rational>> ratios;  // per step
  rip::PathSpace space;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// d = 1, 1..max_steps steps, 2..max_size ratios per step. With
  /// probability `arbitrage_rate` some step has all ratios on one side of 1.
  RandomLattice lattice(int max_steps = 4, int max_size = 4, double arbitrage_rate = 0.1);

  /// i.i.d. ratios that straddle 1.
  std::vector<Rational> iid_ratio_set(int max_size = 3);

  /// Digital, corridor or call on levels taken from the space.
  rip::PayoffExpr claim(const rip::PathSpace& space);

  /// Claim with values in [0, 1].
  rip::PayoffExpr unit_claim(const rip::PathSpace& space);

  /// Static information variable (depends on the whole path).
  rip::InfoVariable static_variable(const rip::PathSpace& space);

  /// Scaling-form variable for the given arrival.
  rip::InfoVariable scaling_variable(const rip::PathSpace& space, int arrival);

  /// Random weights with the given support size, summing to one.
  std::vector<Rational> weights(std::size_t n, std::size_t support);

  Rational level(const rip::PathSpace& space);

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// One-step trinomial, ratios {1/2, 1, 2}.
rip::PathSpace tri1();
/// Two steps of the same.
rip::PathSpace tri2();
/// Three steps of the same.
rip::PathSpace tri3();

}  // namespace testing_support
