#include <benchmark/benchmark.h>

#include <random>

#include "qctl/pole_placement.hpp"
#include "qctl/synthesis.hpp"
#include "support/random_systems.hpp"

using namespace qctl;
using namespace qctl::testing;

namespace {

void BM_PlaceStateFeedback(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 setup(42);
  Matrix A = random_matrix(n, n, setup);
  Matrix B = random_matrix(n, n / 2 + 1, setup);
  while (!is_controllable(A, B)) {
    A = random_matrix(n, n, setup);
    B = random_matrix(n, n / 2 + 1, setup);
  }
  const PoleSpec spec{random_stable_poles(n, setup), std::nullopt};
  for (auto _ : state) {
    std::mt19937_64 rng(7);
    benchmark::DoNotOptimize(place_state_feedback(A, B, spec, rng));
  }
}
BENCHMARK(BM_PlaceStateFeedback)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_StructuredScalarSearch(benchmark::State& state) {
  std::mt19937_64 setup(3);
  const QuadraturePlant plant = random_realizable_plant(2, 2, 2, setup);
  const PoleSpec spec{eigenvalues_of(plant.A - 0.4 * plant.B2), std::nullopt};
  for (auto _ : state) {
    benchmark::DoNotOptimize(place_structured_scalar(plant.A, plant.B2, spec));
  }
}
BENCHMARK(BM_StructuredScalarSearch);

void BM_Synthesize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 setup(11);
  QuadraturePlant plant = random_realizable_plant(n, n, n, setup);
  while (!is_controllable(plant.A, plant.B2) || !is_detectable(plant.A, plant.C)) {
    plant = random_realizable_plant(n, n, n, setup);
  }
  SynthesisProblem problem;
  problem.plant = plant;
  problem.coupling = DirectCoupling::zero(n);
  problem.regulator_spec.poles = random_stable_poles(n, setup);
  problem.observer_spec.poles = random_stable_poles(n, setup);
  for (auto _ : state) {
    std::mt19937_64 rng(13);
    benchmark::DoNotOptimize(synthesize(problem, rng));
  }
}
BENCHMARK(BM_Synthesize)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

}  // namespace
