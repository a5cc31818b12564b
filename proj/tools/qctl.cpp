// Command-line front end: realizability checks, controller synthesis, and
// mean/defect simulation for linear quantum stochastic systems.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "qctl/completion.hpp"
#include "qctl/dynamics.hpp"
#include "qctl/errors.hpp"
#include "qctl/pole_placement.hpp"
#include "qctl/problem_io.hpp"
#include "qctl/quadrature.hpp"
#include "qctl/synthesis.hpp"
#include "qctl/systems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitInputError = 2;

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Hypotheses {
  qctl::RealizabilityReport plant;
  bool controllable = false;
  bool detectable = false;
};

Hypotheses evaluate_hypotheses(const qctl::ProblemFile& file) {
  const qctl::Matrix theta = qctl::theta_matrix(file.plant.n_x);
  const qctl::Matrix shift = 2.0 * theta * file.coupling.Rc;
  Hypotheses h;
  h.plant = qctl::check_plant_realizability(file.plant);
  h.controllable = qctl::is_controllable(file.plant.A + shift, file.plant.B2);
  h.detectable = qctl::is_detectable(file.plant.A - shift, file.plant.C);
  return h;
}

int cmd_check(const std::string& path) {
  const qctl::ProblemFile file = qctl::load_problem(path);
  const Hypotheses h = evaluate_hypotheses(file);
  std::cout << "physical: " << bool_str(h.plant.physical)
            << " (residual_a=" << qctl::format_double(h.plant.residual_a)
            << ", residual_b=" << qctl::format_double(h.plant.residual_b) << ")\n"
            << "controllable: " << bool_str(h.controllable) << "\n"
            << "detectable: " << bool_str(h.detectable) << "\n";
  const bool ok = h.plant.physical && h.controllable && h.detectable;
  return ok ? kExitOk : kExitDomainFailure;
}

void append_pole_rows(std::vector<qctl::PoleTableRow>& rows,
                      const std::vector<qctl::Complex>& poles, const std::string& source,
                      const std::optional<qctl::PoleRegion>& region) {
  if (region) {
    const qctl::RegionReport report = qctl::poles_in_region(poles, *region);
    for (const auto& check : report.checks) {
      rows.push_back({check.pole, source, check.pass});
    }
  } else {
    for (const qctl::Complex& z : poles) rows.push_back({z, source, std::nullopt});
  }
}

int cmd_design(const std::string& path, const std::string& out_dir, bool force_asymmetric,
               std::mt19937_64& rng) {
  const qctl::ProblemFile file = qctl::load_problem(path);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);

  const Hypotheses h = evaluate_hypotheses(file);
  const qctl::SynthesisDetails details =
      qctl::synthesize_detailed(file.to_synthesis_problem(force_asymmetric), rng);
  const qctl::ObserverController& ctrl = details.system.ctrl;
  const qctl::RealizabilityReport ctrl_check = qctl::check_controller_realizability(ctrl);

  qctl::save_controller(out / "controller.json", ctrl, details.completion.psd_shift);

  std::vector<qctl::PoleTableRow> rows;
  const auto& region = file.regulator_spec.region;
  append_pole_rows(rows, details.regulator.poles, "regulator", region);
  append_pole_rows(rows, details.observer.poles, "observer", region);
  qctl::write_poles_csv(out / "poles.csv", rows);

  std::ofstream report(out / "report.txt");
  report << "plant: physical=" << bool_str(h.plant.physical)
         << " residual_a=" << qctl::format_double(h.plant.residual_a)
         << " residual_b=" << qctl::format_double(h.plant.residual_b) << "\n"
         << "controllable: " << bool_str(h.controllable) << "\n"
         << "detectable: " << bool_str(h.detectable) << "\n";

  auto describe_leg = [&report, &region](const char* name, const qctl::GainDesignInfo& info) {
    report << name << " poles:";
    for (const qctl::Complex& z : info.poles) {
      report << ' ' << qctl::format_double(z.real()) << (z.imag() >= 0 ? "+" : "-")
             << qctl::format_double(std::abs(z.imag())) << 'i';
    }
    report << " (placement residual=" << qctl::format_double(info.residual);
    if (info.scalar) report << ", scalar=" << qctl::format_double(*info.scalar);
    report << ")\n";
    if (region) {
      const auto membership = qctl::poles_in_region(info.poles, *region);
      report << name << " in region: " << bool_str(membership.all_pass) << "\n";
    }
    if (info.scan) {
      const qctl::ScalarScan& scan = *info.scan;
      if (scan.feasible_interval) {
        report << name << " feasible scalar interval: ["
               << qctl::format_double(scan.feasible_interval->first) << ", "
               << qctl::format_double(scan.feasible_interval->second) << "]\n";
        const double spread = scan.feasible_radius_max - scan.feasible_radius_min;
        if (spread <= 1e-9) {
          report << name << " reachable poles confined to the arc |z| = "
                 << qctl::format_double(scan.feasible_radius_max)
                 << "; only part of the region is coverable\n";
        }
      }
    }
  };
  describe_leg("regulator", details.regulator);
  describe_leg("observer", details.observer);

  report << "controller: physical=" << bool_str(ctrl_check.physical)
         << " residual_a=" << qctl::format_double(ctrl_check.residual_a)
         << " residual_b=" << qctl::format_double(ctrl_check.residual_b) << "\n"
         << "noise channels: n_v=" << ctrl.n_v
         << " psd_shift=" << qctl::format_double(details.completion.psd_shift) << "\n"
         << "separation: triangular=" << bool_str(details.separation.triangular)
         << " spectrum_union_residual="
         << qctl::format_double(details.separation.spectrum_union_residual) << "\n";

  std::cout << "wrote " << (out / "controller.json").string() << ", poles.csv, report.txt\n";
  return kExitOk;
}

int cmd_simulate(const std::string& path, const std::string& controller_path,
                 const std::string& out_dir) {
  const qctl::ProblemFile file = qctl::load_problem(path);
  if (!file.simulate) {
    throw qctl::ParseError("problem file has no 'simulate' block");
  }
  const qctl::ObserverController ctrl = qctl::load_controller(controller_path);
  const qctl::ClosedLoopSystem cls =
      qctl::assemble_closed_loop(file.plant, ctrl, file.coupling);

  const qctl::SimulationRequest& req = *file.simulate;
  if (req.x0.size() != cls.A_s.rows()) {
    throw qctl::ParseError("simulate.x0 must have dimension 2*n_x = " +
                           std::to_string(cls.A_s.rows()));
  }
  const double dt = req.dt ? *req.dt : qctl::default_time_step(cls.A_s);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path out(out_dir);
  const qctl::MeanTrajectory traj = qctl::simulate_means(cls.A_s, req.x0, req.t_final, dt);
  qctl::write_trajectory_csv(out / "trajectory.csv", traj);
  const qctl::CommutationDefect defect =
      qctl::commutation_defect(cls.A_s, cls.B_s, cls.noise_theta(), req.t_final, dt);
  qctl::write_defect_csv(out / "defect.csv", defect);

  std::cout << "wrote " << (out / "trajectory.csv").string() << ", defect.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent observer-based feedback synthesis for linear quantum systems"};
  app.require_subcommand(1);

  std::string problem_path, controller_path, out_dir;
  bool force_asymmetric = false;

  CLI::App* check = app.add_subcommand("check", "Realizability and hypothesis checks");
  check->add_option("file", problem_path, "problem file (JSON)")->required();

  CLI::App* design = app.add_subcommand("design", "Synthesize an observer-based controller");
  design->add_option("file", problem_path, "problem file (JSON)")->required();
  design->add_option("--out", out_dir, "output directory")->required();
  design->add_flag("--force-asymmetric-rc", force_asymmetric,
                   "proceed even if Rc is not symmetric");

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate closed-loop mean dynamics");
  simulate->add_option("file", problem_path, "problem file (JSON)")->required();
  simulate->add_option("--controller", controller_path, "controller file (JSON)")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  std::uint64_t seed = 1234567;
  if (const char* env = std::getenv("QCTL_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: QCTL_SEED must be an unsigned integer\n";
      return kExitInputError;
    }
  }
  std::mt19937_64 rng(seed);

  try {
    if (check->parsed()) return cmd_check(problem_path);
    if (design->parsed()) return cmd_design(problem_path, out_dir, force_asymmetric, rng);
    if (simulate->parsed()) return cmd_simulate(problem_path, controller_path, out_dir);
  } catch (const qctl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const qctl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  }
  return kExitOk;
}
