#include "qctl/systems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <string>
#include <utility>

#include "qctl/errors.hpp"
#include "qctl/quadrature.hpp"

namespace qctl {
namespace {

void check_even(int n, const char* name) {
  if (n <= 0 || n % 2 != 0) {
    throw PreconditionError(std::string(name) + " must be even and positive, got " +
                            std::to_string(n));
  }
}

int svd_rank(const Matrix& m, std::optional<double> rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff =
      rank_tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

int svd_rank_complex(const CMatrix& m, std::optional<double> rank_tol) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff =
      rank_tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

QuadraturePlant::QuadraturePlant(Matrix A_in, Matrix B1_in, Matrix B2_in, Matrix C_in)
    : A(std::move(A_in)), B1(std::move(B1_in)), B2(std::move(B2_in)), C(std::move(C_in)) {
  n_x = static_cast<int>(A.rows());
  n_w = static_cast<int>(B1.cols());
  n_u = static_cast<int>(B2.cols());
  n_y = static_cast<int>(C.rows());
  detail::require_dims(A.rows() == A.cols(), "plant: A must be square");
  detail::require_dims(B1.rows() == n_x && B2.rows() == n_x && C.cols() == n_x,
                       "plant: B1, B2, C must have n_x rows/columns");
  check_even(n_x, "n_x");
  check_even(n_w, "n_w");
  check_even(n_u, "n_u");
  check_even(n_y, "n_y");
  // dy = C x dt + dw only makes sense when y and w share a dimension.
  if (n_y != n_w) {
    throw DimensionError("plant: n_y (" + std::to_string(n_y) + ") must equal n_w (" +
                         std::to_string(n_w) + ")");
  }
}

ObserverController::ObserverController(Matrix F_in, Matrix G1_in, Matrix G2_in, Matrix G3_in,
                                       Matrix H_in)
    : F(std::move(F_in)),
      G1(std::move(G1_in)),
      G2(std::move(G2_in)),
      G3(std::move(G3_in)),
      H(std::move(H_in)) {
  n_x = static_cast<int>(F.rows());
  n_y = static_cast<int>(G1.cols());
  n_z = static_cast<int>(G2.cols());
  n_v = static_cast<int>(G3.cols());
  detail::require_dims(F.rows() == F.cols(), "controller: F must be square");
  detail::require_dims(G1.rows() == n_x && G2.rows() == n_x, "controller: gain rows != n_x");
  detail::require_dims(G3.size() == 0 || G3.rows() == n_x, "controller: G3 rows != n_x");
  detail::require_dims(H.cols() == n_x && static_cast<int>(H.rows()) == n_z,
                       "controller: H must be n_z x n_x");
  check_even(n_x, "n_x");
  check_even(n_y, "n_y");
  check_even(n_z, "n_z");
  if (n_v < 0 || n_v % 2 != 0) {
    throw PreconditionError("controller: n_v must be even and nonnegative");
  }
}

DirectCoupling::DirectCoupling(Matrix Rc_in) : Rc(std::move(Rc_in)) {
  detail::require_dims(Rc.rows() == Rc.cols(), "direct coupling: Rc must be square");
}

DirectCoupling DirectCoupling::zero(int n_x) { return DirectCoupling(Matrix::Zero(n_x, n_x)); }

bool DirectCoupling::symmetric(double tol) const { return asymmetry() <= tol; }

double DirectCoupling::asymmetry() const { return (Rc - Rc.transpose()).norm(); }

RealizabilityReport check_plant_realizability(const QuadraturePlant& plant, double tol) {
  if (tol < 0) throw PreconditionError("tolerance must be nonnegative");
  const Matrix tx = theta_matrix(plant.n_x);
  const Matrix tw = theta_matrix(plant.n_w);
  const Matrix tu = theta_matrix(plant.n_u);

  const Matrix lhs = plant.A * tx + tx * plant.A.transpose() +
                     plant.B1 * tw * plant.B1.transpose() +
                     plant.B2 * tu * plant.B2.transpose();
  const Matrix coupl = plant.B1 - tx * plant.C.transpose() * tw;

  RealizabilityReport report;
  report.residual_a = lhs.norm();
  report.residual_b = coupl.norm();
  report.physical = report.residual_a <= tol && report.residual_b <= tol;
  return report;
}

RealizabilityReport check_controller_realizability(const ObserverController& ctrl, double tol) {
  if (tol < 0) throw PreconditionError("tolerance must be nonnegative");
  const Matrix tx = theta_matrix(ctrl.n_x);
  const Matrix tw = theta_matrix(ctrl.n_y);  // controller sees the plant output field
  const Matrix tz = theta_matrix(ctrl.n_z);

  Matrix lhs = ctrl.F * tx + tx * ctrl.F.transpose() + ctrl.G1 * tw * ctrl.G1.transpose() +
               ctrl.G2 * tz * ctrl.G2.transpose();
  if (ctrl.n_v > 0) {
    const Matrix tv = theta_matrix(ctrl.n_v);
    lhs += ctrl.G3 * tv * ctrl.G3.transpose();
  }
  const Matrix coupl = ctrl.G2 - tx * ctrl.H.transpose() * tz;

  RealizabilityReport report;
  report.residual_a = lhs.norm();
  report.residual_b = coupl.norm();
  report.physical = report.residual_a <= tol && report.residual_b <= tol;
  return report;
}

bool is_controllable(MatrixRef A, MatrixRef B, std::optional<double> rank_tol) {
  const Eigen::Index n = A.rows();
  detail::require_dims(A.cols() == n, "is_controllable: A must be square");
  detail::require_dims(B.rows() == n, "is_controllable: B row count != n");
  if (B.cols() == 0) return false;

  Matrix ctrb(n, n * B.cols());
  ctrb.leftCols(B.cols()) = B;
  for (Eigen::Index k = 1; k < n; ++k) {
    ctrb.middleCols(k * B.cols(), B.cols()) = A * ctrb.middleCols((k - 1) * B.cols(), B.cols());
  }
  return svd_rank(ctrb, rank_tol) == n;
}

bool is_detectable(MatrixRef A, MatrixRef C, std::optional<double> rank_tol) {
  const Eigen::Index n = A.rows();
  detail::require_dims(A.cols() == n, "is_detectable: A must be square");
  detail::require_dims(C.cols() == n, "is_detectable: C column count != n");

  Eigen::EigenSolver<Matrix> es(A);
  if (es.info() != Eigen::Success) throw NumericalError("is_detectable: eigensolver failed");

  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lambda = es.eigenvalues()(i);
    if (lambda.real() < 0.0) continue;
    CMatrix pbh(n + C.rows(), n);
    pbh.topRows(n) = A.cast<Complex>() - lambda * CMatrix::Identity(n, n);
    pbh.bottomRows(C.rows()) = C.cast<Complex>();
    if (svd_rank_complex(pbh, rank_tol) < n) return false;
  }
  return true;
}

}  // namespace qctl
