#include "qctl/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qctl/errors.hpp"
#include "qctl/quadrature.hpp"

namespace qctl {
namespace {

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto one_sided = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& z : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Complex& w : to) nearest = std::min(nearest, std::abs(z - w));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// Designs one gain under the structured/unstructured rules shared by the
// observer and regulator legs.  `direction` is B2 for the regulator leg and
// -C for the observer leg, so the closed matrix is always A_eff + s * direction
// in scalar mode.
struct GainLeg {
  Matrix gain;
  GainDesignInfo info;
};

GainLeg design_gain(const Matrix& A_eff, const Matrix& input, const Matrix& direction,
                    const PoleSpec& spec, bool scalar_mode, std::optional<double> fixed_scalar,
                    bool observer_leg, std::mt19937_64& rng, const char* leg_name) {
  const int n = static_cast<int>(A_eff.rows());
  GainLeg leg;

  if (scalar_mode) {
    if (direction.rows() != n || direction.cols() != n) {
      throw PreconditionError(std::string(leg_name) +
                              ": scalar-structured gain requires a square channel matrix");
    }
    double s = 0.0;
    if (fixed_scalar) {
      s = *fixed_scalar;
    } else if (spec.has_poles()) {
      const ScalarPlacement placed = place_structured_scalar(A_eff, direction, spec);
      s = placed.scalar;
    } else if (spec.region) {
      const ScalarScan scan = scan_scalar_gain(A_eff, direction, *spec.region);
      if (!scan.chosen) {
        throw NumericalError(std::string(leg_name) +
                             ": no scalar gain keeps every pole inside the region");
      }
      s = *scan.chosen;
      leg.info.scan = scan;
    } else {
      throw PreconditionError(std::string(leg_name) +
                              ": structured design needs target poles, a region, or a fixed scalar");
    }
    leg.info.scalar = s;
    leg.gain = s * Matrix::Identity(n, n);
    const Matrix closed = A_eff + s * direction;
    leg.info.poles = eigenvalues_of(closed);
    leg.info.residual =
        spec.has_poles() ? pole_pairing_distance(leg.info.poles, spec.poles) : 0.0;
    return leg;
  }

  if (!spec.has_poles()) {
    throw PreconditionError(std::string(leg_name) +
                            ": explicit target poles are required (a region alone is only a "
                            "verification constraint)");
  }
  const PlacementResult placed = observer_leg
                                     ? place_observer_gain(A_eff, input, spec, rng)
                                     : place_state_feedback(A_eff, input, spec, rng);
  leg.gain = placed.gain;
  leg.info.poles = placed.achieved;
  leg.info.residual = placed.residual;
  return leg;
}

}  // namespace

Matrix ClosedLoopSystem::noise_theta() const {
  std::vector<Matrix> blocks;
  blocks.push_back(theta_matrix(ctrl.n_y));
  blocks.push_back(theta_matrix(ctrl.n_z));
  if (ctrl.n_v > 0) blocks.push_back(theta_matrix(ctrl.n_v));
  return block_diag(blocks);
}

ClosedLoopSystem assemble_closed_loop(const QuadraturePlant& plant,
                                      const ObserverController& ctrl,
                                      const DirectCoupling& coupling) {
  const int n = plant.n_x;
  detail::require_dims(ctrl.n_x == n, "assemble_closed_loop: controller state dim != plant");
  detail::require_dims(ctrl.n_y == plant.n_y, "assemble_closed_loop: G1 width != n_y");
  detail::require_dims(ctrl.n_z == plant.n_u,
                       "assemble_closed_loop: controller output dim != plant input dim");
  detail::require_dims(coupling.Rc.rows() == n, "assemble_closed_loop: Rc dimension != n_x");

  const Matrix theta = theta_matrix(n);
  const Matrix K = plant.B2 * ctrl.H + 2.0 * theta * coupling.Rc;            // plant <- observer
  const Matrix L = ctrl.G1 * plant.C + 2.0 * theta * coupling.Rc.transpose();  // observer <- plant

  ClosedLoopSystem cls;
  cls.ctrl = ctrl;
  cls.coupling = coupling;

  cls.A_s = Matrix::Zero(2 * n, 2 * n);
  cls.A_s.topLeftCorner(n, n) = plant.A;
  cls.A_s.topRightCorner(n, n) = K;
  cls.A_s.bottomLeftCorner(n, n) = L;
  cls.A_s.bottomRightCorner(n, n) = ctrl.F;

  const int n_w = plant.n_w, n_z = ctrl.n_z, n_v = ctrl.n_v;
  cls.B_s = Matrix::Zero(2 * n, n_w + n_z + n_v);
  cls.B_s.block(0, 0, n, n_w) = plant.B1;
  cls.B_s.block(0, n_w, n, n_z) = plant.B2;
  cls.B_s.block(n, 0, n, n_w) = ctrl.G1;
  cls.B_s.block(n, n_w, n, n_z) = ctrl.G2;
  if (n_v > 0) cls.B_s.block(n, n_w + n_z, n, n_v) = ctrl.G3;

  // Error coordinates (x, e = x - xh): similarity by T = [[I, 0], [I, -I]].
  cls.A_e = Matrix::Zero(2 * n, 2 * n);
  cls.A_e.topLeftCorner(n, n) = plant.A + K;
  cls.A_e.topRightCorner(n, n) = -K;
  cls.A_e.bottomLeftCorner(n, n) = plant.A + K - L - ctrl.F;
  cls.A_e.bottomRightCorner(n, n) = ctrl.F - K;
  return cls;
}

SeparationReport verify_separation(const ClosedLoopSystem& cls) {
  const int n = cls.n_x();
  SeparationReport report;
  report.triangular = cls.A_e.block(n, 0, n, n).norm() <= 1e-12;

  std::vector<Complex> factored = eigenvalues_of(cls.A_e.topLeftCorner(n, n));
  const std::vector<Complex> observer = eigenvalues_of(cls.A_e.bottomRightCorner(n, n));
  factored.insert(factored.end(), observer.begin(), observer.end());
  report.spectrum_union_residual = hausdorff(eigenvalues_of(cls.A_s), factored);
  return report;
}

SynthesisDetails synthesize_detailed(const SynthesisProblem& problem, std::mt19937_64& rng) {
  const QuadraturePlant& plant = problem.plant;
  const int n = plant.n_x;
  detail::require_dims(problem.coupling.Rc.rows() == n, "synthesize: Rc dimension != n_x");

  if (!problem.force_asymmetric && !problem.coupling.symmetric()) {
    throw PreconditionError(
        "synthesize: direct coupling Rc is asymmetric (||Rc - Rc^T|| = " +
        std::to_string(problem.coupling.asymmetry()) +
        "); separation does not hold. Pass the force flag to proceed anyway");
  }

  const Matrix theta = theta_matrix(n);
  const Matrix shift = 2.0 * theta * problem.coupling.Rc;
  const Matrix A_obs_eff = plant.A - shift;
  const Matrix A_reg_eff = plant.A + shift;

  if (!is_detectable(A_obs_eff, plant.C)) {
    throw PreconditionError(
        "synthesize: hypothesis violated: (A - 2 theta Rc, C) is not detectable");
  }
  if (!is_controllable(A_reg_eff, plant.B2)) {
    throw PreconditionError(
        "synthesize: hypothesis violated: (A + 2 theta Rc, B2) is not controllable");
  }

  // Observer gain first, then state feedback, then the forced G2/F, then the
  // noise completion; later steps depend on every earlier gain.
  GainLeg observer = design_gain(A_obs_eff, plant.C, -plant.C, problem.observer_spec,
                                 problem.structured.g1_scalar, problem.structured.g1_value,
                                 /*observer_leg=*/true, rng, "observer design");
  GainLeg regulator = design_gain(A_reg_eff, plant.B2, plant.B2, problem.regulator_spec,
                                  problem.structured.h_scalar, problem.structured.h_value,
                                  /*observer_leg=*/false, rng, "feedback design");

  const Matrix& G1 = observer.gain;
  const Matrix& H = regulator.gain;
  const int n_z = plant.n_u;  // du = H xh dt + dz forces n_z == n_u
  const Matrix G2 = theta * H.transpose() * theta_matrix(n_z);
  const Matrix F = plant.A - G1 * plant.C + plant.B2 * H;

  NoiseCompletion completion = complete_realization(F, G1, G2);
  ObserverController ctrl(F, G1, G2, completion.g3, H);

  const RealizabilityReport check = check_controller_realizability(ctrl);
  if (!check.physical) {
    throw NumericalError("synthesize: completed controller fails realizability (residuals " +
                         std::to_string(check.residual_a) + ", " +
                         std::to_string(check.residual_b) + ")");
  }

  SynthesisDetails details{assemble_closed_loop(plant, ctrl, problem.coupling),
                           std::move(regulator.info),
                           std::move(observer.info),
                           std::move(completion),
                           {}};
  details.separation = verify_separation(details.system);
  return details;
}

ClosedLoopSystem synthesize(const SynthesisProblem& problem, std::mt19937_64& rng) {
  return synthesize_detailed(problem, rng).system;
}

}  // namespace qctl
