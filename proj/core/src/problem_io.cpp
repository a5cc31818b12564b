#include "qctl/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "qctl/errors.hpp"

namespace qctl {
namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int even_dim(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + ": '" + std::string(key) + "' must be an integer");
  const int n = v.get<int>();
  if (n <= 0 || n % 2 != 0) {
    throw ParseError(where + ": '" + std::string(key) + "' must be even and positive, got " +
                     std::to_string(n));
  }
  return n;
}

Matrix parse_matrix(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ParseError(where + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = number(row[k], where);
  }
  return m;
}

std::vector<Complex> parse_poles(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of [re, im] pairs");
  std::vector<Complex> poles;
  for (const json& entry : j) {
    if (!entry.is_array() || entry.size() != 2) {
      throw ParseError(where + ": each pole must be an [re, im] pair");
    }
    poles.emplace_back(number(entry[0], where), number(entry[1], where));
  }
  return poles;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

SynthesisProblem ProblemFile::to_synthesis_problem(bool force_asymmetric) const {
  return SynthesisProblem{plant, coupling, regulator_spec, observer_spec, structured,
                          force_asymmetric};
}

ProblemFile load_problem(const std::filesystem::path& path) {
  const json j = read_json(path);

  ProblemFile file;
  file.schema_version = field(j, "schema_version", "problem").get<std::string>();
  if (file.schema_version != kSchemaVersion) {
    throw ParseError("problem: unrecognized schema_version '" + file.schema_version + "'");
  }

  const json& plant = field(j, "plant", "problem");
  const int n_x = even_dim(plant, "n_x", "plant");
  const int n_w = even_dim(plant, "n_w", "plant");
  const int n_u = even_dim(plant, "n_u", "plant");
  const int n_y = even_dim(plant, "n_y", "plant");
  if (n_y != n_w) throw ParseError("plant: n_y must equal n_w (dy = C x dt + dw)");
  file.plant = QuadraturePlant(parse_matrix(field(plant, "A", "plant"), n_x, n_x, "plant.A"),
                               parse_matrix(field(plant, "B1", "plant"), n_x, n_w, "plant.B1"),
                               parse_matrix(field(plant, "B2", "plant"), n_x, n_u, "plant.B2"),
                               parse_matrix(field(plant, "C", "plant"), n_y, n_x, "plant.C"));

  if (j.contains("coupling")) {
    file.coupling = DirectCoupling(
        parse_matrix(field(j["coupling"], "Rc", "coupling"), n_x, n_x, "coupling.Rc"));
  } else {
    file.coupling = DirectCoupling::zero(n_x);
  }

  if (j.contains("specs")) {
    const json& specs = j["specs"];
    if (specs.contains("regulator_poles")) {
      file.regulator_spec.poles = parse_poles(specs["regulator_poles"], "specs.regulator_poles");
    }
    if (specs.contains("observer_poles")) {
      file.observer_spec.poles = parse_poles(specs["observer_poles"], "specs.observer_poles");
    }
    if (specs.contains("region")) {
      const json& r = specs["region"];
      PoleRegion region;
      region.r_max = number(field(r, "r_max", "region"), "region.r_max");
      region.alpha_min = number(field(r, "alpha_min", "region"), "region.alpha_min");
      region.theta_max =
          number(field(r, "theta_max_deg", "region"), "region.theta_max_deg") * M_PI / 180.0;
      if (region.r_max <= 0.0 || region.alpha_min < 0.0 || region.theta_max <= 0.0 ||
          region.theta_max > M_PI / 2.0 + 1e-12) {
        throw ParseError("region: need r_max > 0, alpha_min >= 0, 0 < theta_max_deg <= 90");
      }
      file.regulator_spec.region = region;
      file.observer_spec.region = region;
    }
  }

  if (j.contains("structured_gain")) {
    const json& s = j["structured_gain"];
    if (s.contains("H_scalar")) file.structured.h_scalar = s["H_scalar"].get<bool>();
    if (s.contains("G1_scalar")) file.structured.g1_scalar = s["G1_scalar"].get<bool>();
    if (s.contains("h")) file.structured.h_value = number(s["h"], "structured_gain.h");
    if (s.contains("g1")) file.structured.g1_value = number(s["g1"], "structured_gain.g1");
    if ((file.structured.h_value && !file.structured.h_scalar) ||
        (file.structured.g1_value && !file.structured.g1_scalar)) {
      throw ParseError("structured_gain: fixed scalar given without the matching *_scalar flag");
    }
  }

  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    SimulationRequest req;
    const json& x0 = field(s, "x0", "simulate");
    if (!x0.is_array() || x0.empty()) throw ParseError("simulate.x0: expected a vector");
    req.x0.resize(static_cast<Eigen::Index>(x0.size()));
    for (std::size_t i = 0; i < x0.size(); ++i) {
      req.x0(static_cast<Eigen::Index>(i)) = number(x0[i], "simulate.x0");
    }
    req.t_final = number(field(s, "t_final", "simulate"), "simulate.t_final");
    if (req.t_final < 0.0) throw ParseError("simulate.t_final must be nonnegative");
    if (s.contains("dt")) {
      req.dt = number(s["dt"], "simulate.dt");
      if (*req.dt <= 0.0) throw ParseError("simulate.dt must be positive");
    }
    file.simulate = std::move(req);
  }
  return file;
}

void save_controller(const std::filesystem::path& path, const ObserverController& ctrl,
                     double xi_shift) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n_x"] = ctrl.n_x;
  j["n_y"] = ctrl.n_y;
  j["n_z"] = ctrl.n_z;
  j["n_v"] = ctrl.n_v;
  j["F"] = matrix_to_json(ctrl.F);
  j["G1"] = matrix_to_json(ctrl.G1);
  j["G2"] = matrix_to_json(ctrl.G2);
  j["G3"] = matrix_to_json(ctrl.G3);
  j["H"] = matrix_to_json(ctrl.H);
  j["xi_shift"] = xi_shift;

  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

ObserverController load_controller(const std::filesystem::path& path) {
  const json j = read_json(path);
  if (field(j, "schema_version", "controller").get<std::string>() != kSchemaVersion) {
    throw ParseError("controller: unrecognized schema_version");
  }
  const int n_x = even_dim(j, "n_x", "controller");
  const int n_y = even_dim(j, "n_y", "controller");
  const int n_z = even_dim(j, "n_z", "controller");
  const json& nv_field = field(j, "n_v", "controller");
  if (!nv_field.is_number_integer()) throw ParseError("controller: n_v must be an integer");
  const int n_v = nv_field.get<int>();
  if (n_v < 0 || n_v % 2 != 0) throw ParseError("controller: n_v must be even and nonnegative");

  return ObserverController(
      parse_matrix(field(j, "F", "controller"), n_x, n_x, "controller.F"),
      parse_matrix(field(j, "G1", "controller"), n_x, n_y, "controller.G1"),
      parse_matrix(field(j, "G2", "controller"), n_x, n_z, "controller.G2"),
      n_v > 0 ? parse_matrix(field(j, "G3", "controller"), n_x, n_v, "controller.G3")
              : Matrix::Zero(n_x, 0),
      parse_matrix(field(j, "H", "controller"), n_z, n_x, "controller.H"));
}

void write_poles_csv(const std::filesystem::path& path, const std::vector<PoleTableRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << "re,im,source,in_region\n";
  for (const PoleTableRow& row : rows) {
    out << format_double(row.pole.real()) << ',' << format_double(row.pole.imag()) << ','
        << row.source << ',';
    if (row.in_region) {
      out << (*row.in_region ? '1' : '0');
    } else {
      out << '-';
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const MeanTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states[0].size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(traj.states[k](i));
    out << '\n';
  }
}

void write_defect_csv(const std::filesystem::path& path, const CommutationDefect& defect) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << "t,defect\n";
  for (std::size_t k = 0; k < defect.times.size(); ++k) {
    out << format_double(defect.times[k]) << ',' << format_double(defect.defect[k]) << '\n';
  }
}

}  // namespace qctl
