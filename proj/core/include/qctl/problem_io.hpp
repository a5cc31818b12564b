#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qctl/dynamics.hpp"
#include "qctl/synthesis.hpp"

namespace qctl {

// JSON problem/controller files and CSV emission.  Matrices are row-major
// nested arrays, poles are [re, im] pairs, angles in files are degrees.

inline constexpr const char* kSchemaVersion = "qctl-1";

struct SimulationRequest {
  Vector x0;
  double t_final = 0.0;
  std::optional<double> dt;
};

struct ProblemFile {
  std::string schema_version;
  QuadraturePlant plant;
  DirectCoupling coupling;
  PoleSpec regulator_spec;
  PoleSpec observer_spec;
  StructuredGainSpec structured;
  std::optional<SimulationRequest> simulate;

  SynthesisProblem to_synthesis_problem(bool force_asymmetric = false) const;
};

// Throws ParseError on unreadable, malformed, or schema-invalid input.
ProblemFile load_problem(const std::filesystem::path& path);

void save_controller(const std::filesystem::path& path, const ObserverController& ctrl,
                     double xi_shift);
ObserverController load_controller(const std::filesystem::path& path);

struct PoleTableRow {
  Complex pole;
  std::string source;               // "regulator" or "observer"
  std::optional<bool> in_region;    // empty when no region was given
};

void write_poles_csv(const std::filesystem::path& path, const std::vector<PoleTableRow>& rows);
void write_trajectory_csv(const std::filesystem::path& path, const MeanTrajectory& traj);
void write_defect_csv(const std::filesystem::path& path, const CommutationDefect& defect);

// Shortest-round-trip decimal formatting, locale independent.
std::string format_double(double value);

}  // namespace qctl
