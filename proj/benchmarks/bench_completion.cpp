#include <benchmark/benchmark.h>

#include <random>

#include "qctl/completion.hpp"
#include "qctl/quadrature.hpp"
#include "support/random_systems.hpp"

using namespace qctl;
using namespace qctl::testing;

namespace {

void BM_CompleteRealization(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 setup(5);
  const Matrix F = random_matrix(n, n, setup);
  const Matrix G1 = random_matrix(n, 2, setup);
  const Matrix H = random_matrix(2, n, setup);
  const Matrix G2 = theta_matrix(n) * H.transpose() * theta_matrix(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(complete_realization(F, G1, G2));
  }
}
BENCHMARK(BM_CompleteRealization)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_MakeGamma(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_gamma(n));
  }
}
BENCHMARK(BM_MakeGamma)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
