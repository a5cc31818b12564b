#include "qctl/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "qctl/errors.hpp"
#include "qctl/quadrature.hpp"

namespace qctl {
namespace {

long long step_count(double t_final, double dt) {
  if (dt <= 0.0) throw PreconditionError("time step must be positive");
  if (t_final < 0.0) throw PreconditionError("horizon must be nonnegative");
  if (t_final == 0.0) return 0;
  if (t_final < dt) throw PreconditionError("horizon shorter than one step");
  return std::llround(t_final / dt);
}

}  // namespace

MeanTrajectory simulate_means(MatrixRef A_sys, const Vector& x0, double t_final, double dt) {
  const Eigen::Index n = A_sys.rows();
  detail::require_dims(A_sys.cols() == n, "simulate_means: A must be square");
  detail::require_dims(x0.size() == n, "simulate_means: x0 size mismatch");
  const long long steps = step_count(t_final, dt);

  MeanTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  Vector x = x0;
  for (long long k = 1; k <= steps; ++k) {
    const Vector k1 = A_sys * x;
    const Vector k2 = A_sys * (x + 0.5 * dt * k1);
    const Vector k3 = A_sys * (x + 0.5 * dt * k2);
    const Vector k4 = A_sys * (x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      throw NumericalError("simulate_means: state diverged at t = " +
                           std::to_string(static_cast<double>(k) * dt));
    }
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

double default_time_step(MatrixRef A_sys) {
  Eigen::EigenSolver<Matrix> es(A_sys);
  double max_re = 0.0, max_abs = 0.0;
  for (Eigen::Index i = 0; i < A_sys.rows(); ++i) {
    max_re = std::max(max_re, std::abs(es.eigenvalues()(i).real()));
    max_abs = std::max(max_abs, std::abs(es.eigenvalues()(i)));
  }
  double dt;
  if (max_re > 1e-12) {
    dt = 0.01 / max_re;
  } else if (max_abs > 1e-12) {
    dt = 0.01 / max_abs;
  } else {
    dt = 0.01;
  }
  if (max_abs > 1e-12) dt = std::min(dt, 1.0 / max_abs);  // keep the step stable
  return dt;
}

CommutationDefect commutation_defect(MatrixRef A_sys, MatrixRef B_sys, MatrixRef theta_noise,
                                     double t_final, double dt) {
  const Eigen::Index n = A_sys.rows();
  detail::require_dims(A_sys.cols() == n, "commutation_defect: A must be square");
  detail::require_dims(B_sys.rows() == n, "commutation_defect: B row count != n");
  detail::require_dims(theta_noise.rows() == B_sys.cols() && theta_noise.cols() == B_sys.cols(),
                       "commutation_defect: theta_noise must match the noise dimension");
  const long long steps = step_count(t_final, dt);

  const Matrix theta = theta_matrix(static_cast<int>(n));
  const Matrix Q = B_sys * theta_noise * B_sys.transpose();
  auto f = [&](const Matrix& S) -> Matrix { return A_sys * S + S * A_sys.transpose() + Q; };

  CommutationDefect out;
  out.times.reserve(steps + 1);
  out.S.reserve(steps + 1);
  out.defect.reserve(steps + 1);

  Matrix S = theta;
  out.times.push_back(0.0);
  out.S.push_back(S);
  out.defect.push_back(0.0);

  for (long long k = 1; k <= steps; ++k) {
    const Matrix k1 = f(S);
    const Matrix k2 = f(S + 0.5 * dt * k1);
    const Matrix k3 = f(S + 0.5 * dt * k2);
    const Matrix k4 = f(S + dt * k3);
    S += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!S.allFinite()) {
      throw NumericalError("commutation_defect: witness diverged at t = " +
                           std::to_string(static_cast<double>(k) * dt));
    }
    out.times.push_back(static_cast<double>(k) * dt);
    out.S.push_back(S);
    out.defect.push_back((S - theta).norm());
  }
  return out;
}

StepMetrics step_response_metrics(const MeanTrajectory& traj, int component_index) {
  const std::size_t count = traj.states.size();
  detail::require(count >= 2, "step_response_metrics: trajectory too short");
  detail::require_dims(component_index >= 0 && component_index < traj.states[0].size(),
                       "step_response_metrics: component index out of range");

  auto value = [&](std::size_t k) { return traj.states[k](component_index); };
  const double initial = value(0);
  const double final = value(count - 1);
  const double span = final - initial;
  if (std::abs(span) <= 1e-15 * std::max({std::abs(initial), std::abs(final), 1.0})) {
    throw PreconditionError("step_response_metrics: degenerate step (initial equals final)");
  }

  const double band = 0.02 * std::abs(span);
  const double t_total = traj.times.back() - traj.times.front();
  for (std::size_t k = 0; k < count; ++k) {
    if (traj.times[k] < traj.times.back() - 0.1 * t_total) continue;
    if (std::abs(value(k) - final) > band) {
      throw NumericalError("step_response_metrics: trajectory has not settled");
    }
  }

  StepMetrics metrics;

  double peak_beyond = 0.0;
  const double direction = span > 0.0 ? 1.0 : -1.0;
  for (std::size_t k = 0; k < count; ++k) {
    peak_beyond = std::max(peak_beyond, direction * (value(k) - final));
  }
  metrics.overshoot = peak_beyond / std::abs(span);

  metrics.settling_time_2pct = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(value(k) - final) > band) metrics.settling_time_2pct = traj.times[k];
  }

  auto first_crossing = [&](double progress) -> double {
    const double level = initial + progress * span;
    for (std::size_t k = 1; k < count; ++k) {
      const double prev = value(k - 1), cur = value(k);
      if ((prev - level) * (cur - level) <= 0.0 && prev != cur) {
        // Linear interpolation inside the step.
        const double frac = (level - prev) / (cur - prev);
        return traj.times[k - 1] + frac * (traj.times[k] - traj.times[k - 1]);
      }
    }
    return traj.times.back();
  };
  metrics.rise_time_10_90 = first_crossing(0.9) - first_crossing(0.1);
  return metrics;
}

}  // namespace qctl
