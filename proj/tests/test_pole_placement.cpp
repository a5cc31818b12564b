#include <doctest.h>

#include <cmath>
#include <random>

#include "qctl/errors.hpp"
#include "qctl/pole_placement.hpp"
#include "qctl/quadrature.hpp"
#include "support/cavity.hpp"
#include "support/matchers.hpp"
#include "support/random_systems.hpp"

using namespace qctl;
using namespace qctl::testing;

TEST_CASE("place_state_feedback") {
  std::mt19937_64 rng(101);

  SUBCASE("single-input chain has the unique textbook gain") {
    Matrix a(2, 2), b(2, 1);
    a << 0, 1, 0, 0;
    b << 0, 1;
    const PoleSpec spec{{Complex(-1, 0), Complex(-2, 0)}, std::nullopt};
    const PlacementResult result = place_state_feedback(a, b, spec, rng);
    Matrix expected(1, 2);
    expected << -2, -3;
    CHECK(max_abs_diff(result.gain, expected) <= 1e-10);
    CHECK(result.residual <= 1e-10);
  }

  SUBCASE("open-loop spectrum already matching returns the zero gain") {
    const Matrix a = cavity_plant().A;
    const PoleSpec spec{eigenvalues_of(a), std::nullopt};
    const PlacementResult result = place_state_feedback(a, random_matrix(2, 2, rng), spec, rng);
    CHECK(result.gain.norm() == 0.0);
    CHECK(result.residual <= 1e-12);
  }

  SUBCASE("random MIMO placement meets the residual budget") {
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 2 + 2 * (trial % 4);  // up to 8 states
      const Matrix a = random_matrix(n, n, rng);
      const Matrix b = random_matrix(n, 2, rng);
      if (!is_controllable(a, b)) continue;
      const PoleSpec spec{random_stable_poles(n, rng), std::nullopt};
      const PlacementResult result = place_state_feedback(a, b, spec, rng);
      CHECK(result.residual <= 1e-6);
    }
  }

  SUBCASE("partial overlap with the open-loop spectrum still places") {
    Matrix a(2, 2);
    a << -1, 0, 0, -2;
    Matrix b(2, 1);
    b << 1, 1;
    const PoleSpec spec{{Complex(-1, 0), Complex(-3, 0)}, std::nullopt};
    const PlacementResult result = place_state_feedback(a, b, spec, rng);
    CHECK(result.residual <= 1e-8);
  }

  SUBCASE("rejects non-conjugate-closed and wrong-sized specs") {
    const Matrix a = random_matrix(2, 2, rng);
    const Matrix b = random_matrix(2, 2, rng);
    CHECK_THROWS_AS(
        place_state_feedback(a, b, PoleSpec{{Complex(-1, 0.5), Complex(-1, 0.4)}, {}}, rng),
        PreconditionError);
    CHECK_THROWS_AS(place_state_feedback(a, b, PoleSpec{{Complex(-1, 0)}, {}}, rng),
                    PreconditionError);
  }

  SUBCASE("uncontrollable pair is refused") {
    CHECK_THROWS_AS(place_state_feedback(Matrix::Identity(2, 2), Matrix::Zero(2, 1),
                                         PoleSpec{{Complex(-1, 0), Complex(-2, 0)}, {}}, rng),
                    PreconditionError);
  }
}

TEST_CASE("observer gain duality") {
  std::mt19937_64 rng_a(77), rng_b(77);
  const Matrix a = random_matrix(4, 4, rng_a);
  const Matrix c = random_matrix(2, 4, rng_a);
  // keep the generators aligned after drawing the test system
  const Matrix a2 = random_matrix(4, 4, rng_b);
  const Matrix c2 = random_matrix(2, 4, rng_b);
  REQUIRE(bitwise_equal(a, a2));

  const PoleSpec spec{random_stable_poles(4, rng_a), std::nullopt};
  std::mt19937_64 seed_direct(42), seed_dual(42);
  const PlacementResult observer = place_observer_gain(a, c, spec, seed_direct);
  const PlacementResult dual =
      place_state_feedback(a.transpose(), c.transpose(), spec, seed_dual);
  CHECK(bitwise_equal(observer.gain, -dual.gain.transpose()));
  CHECK(observer.residual <= 1e-7);
  CHECK(pole_pairing_distance(eigenvalues_of(a - observer.gain * c), spec.poles) <= 1e-7);
}

TEST_CASE("structured scalar search") {
  const QuadraturePlant plant = cavity_plant();
  const Matrix theta = theta_matrix(2);
  const Matrix shift = 2.0 * theta * cavity_coupling().Rc;

  SUBCASE("recovers h = 0.5 from the exact regulator targets") {
    const PoleSpec spec{cavity_regulator_poles(), std::nullopt};
    const ScalarPlacement placed = place_structured_scalar(plant.A + shift, plant.B2, spec);
    CHECK(std::abs(placed.scalar - 0.5) <= 1e-9);
    CHECK(placed.residual <= 1e-12);
  }

  SUBCASE("recovers g1 = 1 from the exact observer targets") {
    const PoleSpec spec{cavity_observer_poles(), std::nullopt};
    const ScalarPlacement placed = place_structured_scalar(plant.A - shift, -plant.C, spec);
    CHECK(std::abs(placed.scalar - 1.0) <= 1e-9);
    CHECK(placed.residual <= 1e-12);
  }

  SUBCASE("unreachable targets return the best point without throwing") {
    const PoleSpec spec{{Complex(-5, 0), Complex(-6, 0)}, std::nullopt};
    const ScalarPlacement placed = place_structured_scalar(plant.A, plant.B2, spec);
    CHECK(placed.residual > 0.1);  // honest reachability report
  }
}

TEST_CASE("region-only scalar scan reports the reachable arc") {
  const QuadraturePlant plant = cavity_plant();
  const ScalarScan scan = scan_scalar_gain(plant.A, plant.B2, cavity_region());
  REQUIRE(scan.chosen.has_value());
  REQUIRE(scan.feasible_interval.has_value());
  CHECK(scan.feasible_interval->first == doctest::Approx(0.5).epsilon(2e-2));
  CHECK(scan.feasible_interval->second == doctest::Approx(1.0).epsilon(2e-2));
  // every reachable pole sits on the circle |z| = 0.1
  CHECK(scan.feasible_radius_max - scan.feasible_radius_min <= 1e-9);
  CHECK(scan.feasible_radius_max == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("the structured family covers only the arc") {
  // across [0.5, 1] the two regulator poles keep magnitude 0.1
  const QuadraturePlant plant = cavity_plant();
  std::vector<double> grid;
  for (int k = 0; k < 20; ++k) grid.push_back(0.5 + 0.025 * k);
  grid.push_back(1.0);
  for (double h : grid) {
    const Matrix closed = plant.A + plant.B2 * (h * Matrix::Identity(2, 2));
    for (const Complex& z : eigenvalues_of(closed)) {
      CHECK(std::abs(std::abs(z) - 0.1) <= 1e-12);
    }
  }
}

TEST_CASE("characteristic polynomial factors") {
  const QuadraturePlant plant = cavity_plant();

  SUBCASE("cavity factors match the hand-expanded quadratics") {
    const CharPolyPair pair = closed_loop_char_poly(plant, cavity_feedback_gain(),
                                                    cavity_observer_gain(), cavity_coupling());
    REQUIRE(pair.regulator.size() == 3);
    CHECK(pair.regulator[0] == 1.0);
    CHECK(pair.regulator[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(pair.regulator[2] == doctest::Approx(0.0076).epsilon(1e-12));
    CHECK(pair.observer[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(pair.observer[2] == doctest::Approx(0.0056).epsilon(1e-12));

    const std::vector<Complex> roots = poly_roots(pair.regulator);
    CHECK(pole_pairing_distance(roots, cavity_regulator_poles()) <= 1e-12);
    const std::vector<Complex> oroots = poly_roots(pair.observer);
    CHECK(pole_pairing_distance(oroots, cavity_observer_poles()) <= 1e-12);
  }

  SUBCASE("zero gains and coupling give the plant polynomial twice") {
    const CharPolyPair pair = closed_loop_char_poly(plant, Matrix::Zero(2, 2),
                                                    Matrix::Zero(2, 2), DirectCoupling::zero(2));
    const std::vector<double> open = char_poly(plant.A);
    for (std::size_t i = 0; i < open.size(); ++i) {
      CHECK(pair.regulator[i] == doctest::Approx(open[i]).epsilon(1e-14));
      CHECK(pair.observer[i] == doctest::Approx(open[i]).epsilon(1e-14));
    }
  }

  SUBCASE("without direct coupling the observer factor has a double pole") {
    // g1 = 1: z^2 + 0.2 z + 0.01 = (z + 0.1)^2
    const CharPolyPair pair = closed_loop_char_poly(plant, cavity_feedback_gain(),
                                                    cavity_observer_gain(),
                                                    DirectCoupling::zero(2));
    const std::vector<Complex> roots = poly_roots(pair.observer);
    CHECK(std::abs(roots[0] - Complex(-0.1, 0.0)) <= 1e-12);
    CHECK(std::abs(roots[1] - Complex(-0.1, 0.0)) <= 1e-12);
  }

  SUBCASE("asymmetric coupling is refused") {
    Matrix rc(2, 2);
    rc << 0, 0.01, -0.01, 0;
    CHECK_THROWS_AS(closed_loop_char_poly(plant, Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                                          DirectCoupling(rc)),
                    PreconditionError);
  }
}

TEST_CASE("factor product equals the closed-loop polynomial for symmetric coupling") {
  std::mt19937_64 rng(271);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_x = 2 + 2 * (trial % 3);
    const QuadraturePlant plant = random_realizable_plant(n_x, 2, 2, rng);
    const Matrix H = random_matrix(2, n_x, rng);
    const Matrix G1 = random_matrix(n_x, 2, rng);
    const Matrix G2 = theta_matrix(n_x) * H.transpose() * theta_matrix(2);
    const Matrix F = plant.A - G1 * plant.C + plant.B2 * H;
    const ObserverController ctrl(F, G1, G2, Matrix::Zero(n_x, 0), H);
    const DirectCoupling coupling(random_symmetric(n_x, rng, 0.2));

    const CharPolyPair pair = closed_loop_char_poly(plant, H, G1, coupling);
    const std::vector<double> product = poly_multiply(pair.regulator, pair.observer);
    const std::vector<double> whole =
        char_poly(assemble_closed_loop(plant, ctrl, coupling).A_s);
    REQUIRE(product.size() == whole.size());
    for (std::size_t i = 0; i < whole.size(); ++i) {
      CHECK(std::abs(product[i] - whole[i]) <= 1e-8 * std::max(1.0, std::abs(whole[i])));
    }
  }
}

TEST_CASE("poly_roots closed forms") {
  SUBCASE("double root from matrix-consistent coefficients is resolved exactly") {
    // h = 1 closes the family on (z + 0.1)^2
    const QuadraturePlant plant = cavity_plant();
    const std::vector<Complex> roots = poly_roots(char_poly(plant.A + plant.B2));
    CHECK(std::abs(roots[0] - Complex(-0.1, 0.0)) <= 1e-12);
    CHECK(std::abs(roots[1] - Complex(-0.1, 0.0)) <= 1e-12);
  }
  SUBCASE("double root from independently rounded literals is sqrt(eps)-limited") {
    const std::vector<Complex> roots = poly_roots({1.0, 0.2, 0.01});
    CHECK(std::abs(roots[0] - Complex(-0.1, 0.0)) <= 2e-9);
    CHECK(std::abs(roots[1] - Complex(-0.1, 0.0)) <= 2e-9);
  }
  SUBCASE("cancellation-prone real pair") {
    const std::vector<Complex> roots = poly_roots({1.0, 100.0, 1.0});
    CHECK(std::abs(roots[0].real() * roots[1].real() - 1.0) <= 1e-12);
  }
  SUBCASE("higher degree via companion matrix") {
    const std::vector<Complex> roots = poly_roots({1.0, 6.0, 11.0, 6.0});
    CHECK(pole_pairing_distance(
              roots, {Complex(-1, 0), Complex(-2, 0), Complex(-3, 0)}) <= 1e-10);
  }
}

TEST_CASE("poles_in_region") {
  const PoleRegion region = cavity_region();

  SUBCASE("reference direct-coupling poles sit inside") {
    CHECK(poles_in_region(cavity_regulator_poles(), region).all_pass);
  }

  SUBCASE("arc boundary points count as inside") {
    const double im = 0.1 * std::sqrt(0.75);
    const RegionReport report =
        poles_in_region({Complex(-0.05, im), Complex(-0.05, -im)}, region);
    CHECK(report.all_pass);
  }

  SUBCASE("an unstable pole fails") {
    const RegionReport report = poles_in_region({Complex(0.01, 0)}, region);
    CHECK(!report.all_pass);
    CHECK(!report.checks[0].decay_ok);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(poles_in_region({}, PoleRegion{-1.0, 0.0, 1.0}), PreconditionError);
  }
}
