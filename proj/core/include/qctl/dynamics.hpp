#pragma once

#include <vector>

#include "qctl/types.hpp"

namespace qctl {

// First-moment simulation and the commutation-defect witness.  Input fields
// are vacuum (zero-mean), so mean dynamics reduce to d<x>/dt = A <x>.

struct MeanTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;
};

// Classic fixed-step 4th-order integration of d<x>/dt = A x.  The horizon is
// rounded to a whole number of steps; t_final = 0 yields just the initial
// sample.  Throws NumericalError if the state stops being finite.
MeanTrajectory simulate_means(MatrixRef A_sys, const Vector& x0, double t_final, double dt);

// dt heuristic: 0.01 / max |Re(eig)|, falling back to the spectral radius and
// then to 0.01 for nilpotent/zero generators; always small enough for a
// stable step.
double default_time_step(MatrixRef A_sys);

struct CommutationDefect {
  std::vector<double> times;
  std::vector<Matrix> S;        // skew witness trajectory
  std::vector<double> defect;   // ||S(t) - theta||_F
};

// Integrates dS/dt = A S + S A^T + B theta_noise B^T from S(0) = theta.
// For a physically realizable closed loop S = theta is an equilibrium and the
// defect stays at roundoff level.
CommutationDefect commutation_defect(MatrixRef A_sys, MatrixRef B_sys, MatrixRef theta_noise,
                                     double t_final, double dt);

struct StepMetrics {
  double overshoot = 0.0;          // (peak beyond final) / |final - initial|
  double settling_time_2pct = 0.0; // last exit from the +/-2% band
  double rise_time_10_90 = 0.0;    // first 10% -> 90% progress interval
};

// Standard transient metrics of one trajectory component.  Requires the final
// 10% of samples to sit inside the 2% band, and a nondegenerate step.
StepMetrics step_response_metrics(const MeanTrajectory& traj, int component_index);

}  // namespace qctl
