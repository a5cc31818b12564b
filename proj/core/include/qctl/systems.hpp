#pragma once

#include <optional>

#include "qctl/types.hpp"

namespace qctl {

// Quadrature-form state-space models and the algebraic checks that decide
// whether they describe open quantum systems.

// Plant  dx = A x dt + B1 dw + B2 du,  dy = C x dt + dw.
// All channel dimensions are even; the output equation forces n_y == n_w.
struct QuadraturePlant {
  int n_x = 0, n_w = 0, n_u = 0, n_y = 0;
  Matrix A, B1, B2, C;

  QuadraturePlant() = default;
  QuadraturePlant(Matrix A_in, Matrix B1_in, Matrix B2_in, Matrix C_in);
};

// Controller  dxh = F xh dt + G1 dy + G2 dz + G3 dv,  du = H xh dt + dz.
// n_v may be zero when no auxiliary noise is required.
struct ObserverController {
  int n_x = 0, n_y = 0, n_z = 0, n_v = 0;
  Matrix F, G1, G2, G3, H;

  ObserverController() = default;
  ObserverController(Matrix F_in, Matrix G1_in, Matrix G2_in, Matrix G3_in, Matrix H_in);
};

// Bilinear plant-controller interaction 1/2 x^T Rc xh + 1/2 xh^T Rc^T x.
struct DirectCoupling {
  Matrix Rc;

  DirectCoupling() = default;
  explicit DirectCoupling(Matrix Rc_in);
  static DirectCoupling zero(int n_x);

  bool symmetric(double tol = 1e-12) const;
  double asymmetry() const;  // ||Rc - Rc^T||_F
};

struct RealizabilityReport {
  double residual_a = 0.0;  // drift/diffusion constraint
  double residual_b = 0.0;  // output-coupling constraint
  bool physical = false;
};

// residual_a = ||A T_x + T_x A^T + B1 T_w B1^T + B2 T_u B2^T||_F,
// residual_b = ||B1 - T_x C^T T_w||_F, with T_* the skew forms.
RealizabilityReport check_plant_realizability(const QuadraturePlant& plant,
                                              double tol = kRealizabilityTol);

// Same shape of check over (F, G1, G2, G3) and G2 = T_x H^T T_z.
RealizabilityReport check_controller_realizability(const ObserverController& ctrl,
                                                   double tol = kRealizabilityTol);

// Kalman rank test: rank [B, AB, ..., A^{n-1}B] == n, rank by singular
// values against max(dim) * eps * sigma_max unless rank_tol is given.
bool is_controllable(MatrixRef A, MatrixRef B, std::optional<double> rank_tol = std::nullopt);

// PBH test on every eigenvalue with nonnegative real part.
bool is_detectable(MatrixRef A, MatrixRef C, std::optional<double> rank_tol = std::nullopt);

}  // namespace qctl
