#pragma once

// JSON fixtures for the I/O and CLI tests, built programmatically so the
// numeric fields carry full precision.

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "support/cavity.hpp"

namespace qctl::testing {

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json poles_json(const std::vector<Complex>& poles) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& z : poles) out.push_back({z.real(), z.imag()});
  return out;
}

// Full problem document for the cavity reference design.
inline nlohmann::json cavity_problem_json() {
  const QuadraturePlant plant = cavity_plant();
  nlohmann::json j;
  j["schema_version"] = "qctl-1";
  j["plant"] = {{"n_x", 2}, {"n_w", 2}, {"n_u", 2}, {"n_y", 2},
                {"A", matrix_json(plant.A)},   {"B1", matrix_json(plant.B1)},
                {"B2", matrix_json(plant.B2)}, {"C", matrix_json(plant.C)}};
  j["coupling"] = {{"Rc", matrix_json(cavity_coupling().Rc)}};
  j["specs"] = {{"regulator_poles", poles_json(cavity_regulator_poles())},
                {"observer_poles", poles_json(cavity_observer_poles())},
                {"region", {{"r_max", 0.1}, {"alpha_min", 0.05}, {"theta_max_deg", 60.0}}}};
  j["structured_gain"] = {{"H_scalar", true}, {"G1_scalar", true}, {"h", 0.5}, {"g1", 1.0}};
  j["simulate"] = {{"x0", {1.0, 0.0, 0.0, 0.0}}, {"t_final", 200.0}, {"dt", 0.05}};
  return j;
}

inline std::filesystem::path write_json(const std::filesystem::path& path,
                                        const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  return path;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("qctl_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace qctl::testing
