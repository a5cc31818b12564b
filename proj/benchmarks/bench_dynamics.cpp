#include <benchmark/benchmark.h>

#include <random>

#include "qctl/dynamics.hpp"
#include "qctl/quadrature.hpp"
#include "support/random_systems.hpp"

using namespace qctl;
using namespace qctl::testing;

namespace {

Matrix stable_generator(int n, std::mt19937_64& rng) {
  return random_matrix(n, n, rng, 0.4) - 1.0 * Matrix::Identity(n, n);
}

void BM_SimulateMeans(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 setup(21);
  const Matrix A = stable_generator(n, setup);
  const Vector x0 = random_matrix(n, 1, setup).col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_means(A, x0, 10.0, 0.01));
  }
}
BENCHMARK(BM_SimulateMeans)->Arg(4)->Arg(8)->Arg(16);

void BM_CommutationDefect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 setup(22);
  const Matrix A = stable_generator(n, setup);
  const Matrix B = random_matrix(n, n, setup, 0.4);
  const Matrix tn = theta_matrix(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutation_defect(A, B, tn, 10.0, 0.01));
  }
}
BENCHMARK(BM_CommutationDefect)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
