#include "qctl/completion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qctl/errors.hpp"

namespace qctl {
namespace {

constexpr Complex kImag{0.0, 1.0};

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace

CMatrix completion_rhs(MatrixRef F, MatrixRef G1, MatrixRef G2, MatrixRef theta_x,
                       MatrixRef theta_w, MatrixRef theta_z, MatrixRef xi_v) {
  const Eigen::Index n = F.rows();
  detail::require_dims(F.cols() == n && theta_x.rows() == n && theta_x.cols() == n,
                       "completion_rhs: F and theta_x must be n x n");
  detail::require_dims(G1.rows() == n && G1.cols() == theta_w.rows(),
                       "completion_rhs: G1/theta_w dimension mismatch");
  detail::require_dims(G2.rows() == n && G2.cols() == theta_z.rows(),
                       "completion_rhs: G2/theta_z dimension mismatch");
  detail::require_dims(xi_v.rows() == n && xi_v.cols() == n,
                       "completion_rhs: xi_v must be n x n");
  if ((xi_v - xi_v.transpose()).norm() > 1e-12 * std::max(1.0, xi_v.norm())) {
    throw PreconditionError("completion_rhs: xi_v must be symmetric");
  }

  const Matrix drift = theta_x * F + F.transpose() * theta_x;
  const Matrix field_w = theta_x * G1 * theta_w * G1.transpose() * theta_x;
  const Matrix field_z = theta_x * G2 * theta_z * G2.transpose() * theta_x;

  CMatrix rhs = (-0.25 * kImag) * drift.cast<Complex>() +
                (0.25 * kImag) * (field_w + field_z).cast<Complex>() +
                xi_v.cast<Complex>();
  // Each term is i * (real antisymmetric); symmetrize away roundoff drift.
  rhs = 0.5 * (rhs + rhs.adjoint()).eval();
  return rhs;
}

Matrix choose_xi(const CMatrix& h0) {
  detail::require_dims(h0.rows() == h0.cols(), "choose_xi: input must be square");
  if ((h0 - h0.adjoint()).norm() > 1e-10 * std::max(1.0, h0.norm())) {
    throw PreconditionError("choose_xi: input must be Hermitian");
  }
  const double shift = std::max(0.0, -min_eigenvalue(h0));
  return shift * Matrix::Identity(h0.rows(), h0.cols());
}

double completion_rank_tol(Eigen::Index n, double scale) {
  return 64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
         std::max(1.0, scale);
}

CMatrix factor_lambda(const CMatrix& rhs, std::optional<double> rank_tol) {
  const Eigen::Index n = rhs.rows();
  detail::require_dims(rhs.cols() == n, "factor_lambda: input must be square");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rhs + rhs.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("factor_lambda: eigensolver failed");

  const Vector evals = es.eigenvalues();
  const double tol = rank_tol.value_or(completion_rank_tol(n, evals.cwiseAbs().maxCoeff()));
  if (evals.minCoeff() < -tol) {
    throw NumericalError("factor_lambda: input is not positive semidefinite (min eigenvalue " +
                         std::to_string(evals.minCoeff()) + ")");
  }

  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (evals(i) > tol) ++rank;
  }

  CMatrix lambda(rank, n);
  // Eigen returns ascending eigenvalues; emit rows in descending order.
  for (int r = 0; r < rank; ++r) {
    const Eigen::Index src = n - 1 - r;
    CVector v = es.eigenvectors().col(src);
    // Phase convention: first nonzero component real positive.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(v(i));
      if (mag > 1e-12) {
        v *= std::conj(v(i)) / mag;
        break;
      }
    }
    lambda.row(r) = std::sqrt(evals(src)) * v.adjoint();
  }
  return lambda;
}

Matrix compute_g3(const CMatrix& lambda_v, MatrixRef theta_x, const GammaMap& gamma) {
  const Eigen::Index n = theta_x.rows();
  detail::require_dims(lambda_v.cols() == n || lambda_v.rows() == 0,
                       "compute_g3: lambda_v column count != n_x");
  if (lambda_v.rows() == 0) return Matrix::Zero(n, 0);

  const Eigen::Index n_v = 2 * lambda_v.rows();
  detail::require_dims(gamma.n == n_v, "compute_g3: gamma built for wrong n_v");

  CMatrix stacked(n, n_v);
  stacked.leftCols(n_v / 2) = -lambda_v.adjoint();
  stacked.rightCols(n_v / 2) = lambda_v.transpose();

  const CMatrix product = (2.0 * kImag) * theta_x.cast<Complex>() * stacked * gamma.gamma;
  const double imag_residue = product.imag().norm();
  if (imag_residue > 1e-12 * std::max(1.0, product.real().norm())) {
    throw NumericalError("compute_g3: product has imaginary residue " +
                         std::to_string(imag_residue) +
                         "; ladder-block convention is inconsistent");
  }
  return product.real();
}

NoiseCompletion complete_realization(MatrixRef F, MatrixRef G1, MatrixRef G2,
                                     std::optional<Matrix> xi_override) {
  const int n_x = static_cast<int>(F.rows());
  const int n_w = static_cast<int>(G1.cols());
  const int n_z = static_cast<int>(G2.cols());

  const Matrix tx = theta_matrix(n_x);
  const Matrix tw = theta_matrix(n_w);
  const Matrix tz = theta_matrix(n_z);

  const CMatrix h0 = completion_rhs(F, G1, G2, tx, tw, tz, Matrix::Zero(n_x, n_x));

  NoiseCompletion out;
  out.psd_shift = std::max(0.0, -min_eigenvalue(h0));
  out.xi_v = xi_override ? *xi_override : choose_xi(h0);
  const CMatrix rhs = h0 + out.xi_v.cast<Complex>();
  out.lambda_v = factor_lambda(rhs);
  out.n_v = 2 * static_cast<int>(out.lambda_v.rows());
  if (out.n_v > 0) {
    out.g3 = compute_g3(out.lambda_v, tx, make_gamma(out.n_v));
  } else {
    out.g3 = Matrix::Zero(n_x, 0);
  }
  return out;
}

}  // namespace qctl
