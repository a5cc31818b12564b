#pragma once

#include <optional>

#include "qctl/quadrature.hpp"
#include "qctl/types.hpp"

namespace qctl {

// Restores physical realizability of a candidate controller (F, G1, G2) by
// computing the auxiliary coupling lambda_v and the vacuum-noise gain G3.
// This is the step with no classical analogue: a gain triple that a classical
// observer could use freely must here be padded with extra noise channels
// until the commutation structure survives the dynamics.

struct NoiseCompletion {
  CMatrix lambda_v;      // (n_v/2) x n_x coupling of the injected noise
  Matrix xi_v;           // real symmetric shift used on the factor equation
  Matrix g3;             // n_x x n_v real gain
  int n_v = 0;           // 2 * rank of the factored right-hand side
  double psd_shift = 0;  // max(0, -lambda_min(H0))
};

// Right-hand side of the factor equation: H0 + xi_v with
//   H0 = -(i/4)(T F + F^T T) + (i/4) T G1 T_w G1^T T + (i/4) T G2 T_z G2^T T.
// Each term is i times a real antisymmetric matrix, so H0 is Hermitian with
// zero real part; the result is re-symmetrized to kill roundoff drift.
CMatrix completion_rhs(MatrixRef F, MatrixRef G1, MatrixRef G2, MatrixRef theta_x,
                       MatrixRef theta_w, MatrixRef theta_z, MatrixRef xi_v);

// Smallest scalar shift making H0 positive semidefinite:
// xi_v = max(0, -lambda_min(H0)) * I.
Matrix choose_xi(const CMatrix& h0);

// Default eigenvalue cutoff for rank decisions in the factorization.  The
// margin covers drift between independent eigensolves of the same matrix.
double completion_rank_tol(Eigen::Index n, double scale);

// Factors a Hermitian PSD matrix as lambda^dagger lambda.  Rows are
// sqrt(eigenvalue) * eigenvector^dagger in descending eigenvalue order, each
// eigenvector phased so its first nonzero component is real positive.  Fails
// if an eigenvalue is below -rank_tol.
CMatrix factor_lambda(const CMatrix& rhs, std::optional<double> rank_tol = std::nullopt);

// Converts the complex noise coupling into the real quadrature gain:
//   G3 = 2i T [-lambda^dagger  lambda^T] Gamma.
// The product is real by construction; a nonzero imaginary residue signals a
// broken ladder-block convention and raises NumericalError.
Matrix compute_g3(const CMatrix& lambda_v, MatrixRef theta_x, const GammaMap& gamma);

// Full pipeline: completion_rhs -> choose_xi (unless xi_override is given)
// -> factor_lambda -> compute_g3.  Dimensions are inferred from the gains.
NoiseCompletion complete_realization(MatrixRef F, MatrixRef G1, MatrixRef G2,
                                     std::optional<Matrix> xi_override = std::nullopt);

}  // namespace qctl
