#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qctl/completion.hpp"
#include "qctl/errors.hpp"
#include "qctl/problem_io.hpp"
#include "support/cavity.hpp"
#include "support/fixtures.hpp"
#include "support/matchers.hpp"

using namespace qctl;
using namespace qctl::testing;

TEST_CASE("load_problem parses the cavity document") {
  TempDir dir;
  const auto path = write_json(dir.path() / "cavity.json", cavity_problem_json());
  const ProblemFile file = load_problem(path);

  CHECK(file.schema_version == kSchemaVersion);
  CHECK(max_abs_diff(file.plant.A, cavity_plant().A) == 0.0);
  CHECK(max_abs_diff(file.coupling.Rc, cavity_coupling().Rc) == 0.0);
  REQUIRE(file.regulator_spec.poles.size() == 2);
  CHECK(std::abs(file.regulator_spec.poles[0] - cavity_regulator_poles()[0]) == 0.0);
  REQUIRE(file.regulator_spec.region.has_value());
  CHECK(file.regulator_spec.region->theta_max == doctest::Approx(M_PI / 3.0));
  CHECK(file.structured.h_scalar);
  CHECK(file.structured.h_value == doctest::Approx(0.5));
  REQUIRE(file.simulate.has_value());
  CHECK(file.simulate->t_final == 200.0);
  CHECK(file.simulate->x0.size() == 4);
}

TEST_CASE("schema violations raise ParseError") {
  TempDir dir;

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_problem(dir.path() / "absent.json"), ParseError);
  }

  SUBCASE("invalid JSON") {
    const auto path = dir.path() / "bad.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_problem(path), ParseError);
  }

  SUBCASE("odd state dimension") {
    nlohmann::json j = cavity_problem_json();
    j["plant"]["n_x"] = 3;
    CHECK_THROWS_AS(load_problem(write_json(dir.path() / "odd.json", j)), ParseError);
  }

  SUBCASE("ragged matrix") {
    nlohmann::json j = cavity_problem_json();
    j["plant"]["A"] = {{0.0, 0.1}, {0.1}};
    CHECK_THROWS_AS(load_problem(write_json(dir.path() / "ragged.json", j)), ParseError);
  }

  SUBCASE("unknown schema version") {
    nlohmann::json j = cavity_problem_json();
    j["schema_version"] = "qctl-99";
    CHECK_THROWS_AS(load_problem(write_json(dir.path() / "ver.json", j)), ParseError);
  }

  SUBCASE("fixed scalar without the structure flag") {
    nlohmann::json j = cavity_problem_json();
    j["structured_gain"]["H_scalar"] = false;
    CHECK_THROWS_AS(load_problem(write_json(dir.path() / "flag.json", j)), ParseError);
  }
}

TEST_CASE("controller files round-trip and stay realizable") {
  const Matrix F = cavity_F();
  const Matrix G1 = cavity_observer_gain();
  const Matrix G2 = -0.5 * Matrix::Identity(2, 2);
  const NoiseCompletion completion = complete_realization(F, G1, G2);
  const ObserverController ctrl(F, G1, G2, completion.g3, cavity_feedback_gain());

  TempDir dir;
  const auto path = dir.path() / "controller.json";
  save_controller(path, ctrl, completion.psd_shift);
  const ObserverController loaded = load_controller(path);

  CHECK(bitwise_equal(loaded.F, ctrl.F));
  CHECK(bitwise_equal(loaded.G1, ctrl.G1));
  CHECK(bitwise_equal(loaded.G2, ctrl.G2));
  CHECK(bitwise_equal(loaded.G3, ctrl.G3));
  CHECK(bitwise_equal(loaded.H, ctrl.H));
  CHECK(loaded.n_v == ctrl.n_v);
  CHECK(check_controller_realizability(loaded).physical);
}

TEST_CASE("format_double round-trips doubles through text") {
  for (double v : {0.1, -0.95, 1.0 / 3.0, 0.071414284285428509, 1e-300, 0.0}) {
    const std::string text = format_double(v);
    CHECK(std::stod(text) == v);
    CHECK(text.find(',') == std::string::npos);
  }
}

TEST_CASE("csv writers") {
  TempDir dir;

  SUBCASE("trajectory header and width") {
    MeanTrajectory traj;
    traj.times = {0.0, 0.5};
    Vector a(2), b(2);
    a << 1.0, 2.0;
    b << 3.0, 0.25;
    traj.states = {a, b};
    const auto path = dir.path() / "trajectory.csv";
    write_trajectory_csv(path, traj);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x1,x2");
    std::getline(in, line);
    CHECK(line == "0,1,2");
    std::getline(in, line);
    CHECK(line == "0.5,3,0.25");
  }

  SUBCASE("pole table flags") {
    const auto path = dir.path() / "poles.csv";
    write_poles_csv(path, {{Complex(-0.05, 0.07), "regulator", true},
                           {Complex(-0.1, 0.0), "observer", std::nullopt}});
    std::ifstream in(path);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(header == "re,im,source,in_region");
    // 17 significant digits, locale-independent
    CHECK(row1 == "-0.050000000000000003,0.070000000000000007,regulator,1");
    CHECK(row2 == "-0.10000000000000001,0,observer,-");
  }
}
