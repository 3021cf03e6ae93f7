#include <benchmark/benchmark.h>

#include "rip/hedging.hpp"
#include "rip/lp.hpp"
#include "rip/model.hpp"
#include "rip/payoff.hpp"

namespace {

rip::PathSpace trinomial(int steps) {
  return rip::build_lattice(1, rip::TimeGrid::uniform(steps),
                            rip::iid_ratios(steps, 1, {rip::Rational(1, 2), rip::Rational(1), rip::Rational(2)}));
}

// Transportation-style program with n sources and n sinks.
template <class T>
rip::lp::LinearProgram<T> transport(int n) {
  rip::lp::LinearProgram<T> lp;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.add_variable(T((i * 7 + j * 3) % 11 + 1), rip::lp::Bound<T>::nonnegative());
  }
  for (int i = 0; i < n; ++i) {
    std::vector<T> supply(static_cast<std::size_t>(n * n), T(0));
    std::vector<T> demand(static_cast<std::size_t>(n * n), T(0));
    for (int j = 0; j < n; ++j) {
      supply[static_cast<std::size_t>(i * n + j)] = 1;
      demand[static_cast<std::size_t>(j * n + i)] = 1;
    }
    lp.add_row(supply, rip::lp::Relation::kLessEqual, T(i + 2));
    lp.add_row(demand, rip::lp::Relation::kGreaterEqual, T(1));
  }
  return lp;
}

template <class T>
void BM_Transport(benchmark::State& state) {
  const auto lp = transport<T>(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rip::lp::solve(lp));
}
BENCHMARK(BM_Transport<rip::Rational>)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_Transport<double>)->Arg(4)->Arg(8)->Arg(12);

template <class T>
void BM_Superhedge(benchmark::State& state) {
  const auto space = trinomial(static_cast<int>(state.range(0)));
  const auto claim = rip::parse_payoff("pos(maxt(1) - 1)");
  const auto info = rip::InfoStructure::plus(rip::InfoVariable::max_abs_deviation());
  const rip::StaticOptionBook book;
  for (auto _ : state) benchmark::DoNotOptimize(rip::superhedge<T>(space, space.all(), info, claim, book));
}
BENCHMARK(BM_Superhedge<rip::Rational>)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Superhedge<double>)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
