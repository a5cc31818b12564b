#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qctl {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;
using CMatrixRef = Eigen::Ref<const Eigen::MatrixXcd>;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

// Default absolute tolerance (Frobenius) for realizability residuals.
inline constexpr double kRealizabilityTol = 1e-9;

}  // namespace qctl
