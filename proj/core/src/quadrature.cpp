#include "qctl/quadrature.hpp"

#include <string>

#include "qctl/errors.hpp"

namespace qctl {
namespace {

void check_even_positive(int n, const char* name) {
  if (n < 2 || n % 2 != 0) {
    throw PreconditionError(std::string(name) + " must be an even integer >= 2, got " +
                            std::to_string(n));
  }
}

}  // namespace

Matrix theta_matrix(int n) {
  check_even_positive(n, "n");
  Matrix theta = Matrix::Zero(n, n);
  for (int k = 0; k < n / 2; ++k) {
    theta(2 * k, 2 * k + 1) = 1.0;
    theta(2 * k + 1, 2 * k) = -1.0;
  }
  return theta;
}

SymplecticStructure make_theta(int n) {
  return SymplecticStructure{n, theta_matrix(n)};
}

QuadraturePermutation make_quadrature_permutation(int n) {
  check_even_positive(n, "n");
  QuadraturePermutation p;
  p.n = n;
  p.perm.resize(n);
  for (int i = 0; i < n / 2; ++i) p.perm[i] = 2 * i;          // odd positions first
  for (int i = 0; i < n / 2; ++i) p.perm[n / 2 + i] = 2 * i + 1;
  return p;
}

Matrix QuadraturePermutation::matrix() const {
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, perm[i]) = 1.0;
  return m;
}

CMatrix ladder_block() {
  // a = (q + i p)/2, a* = (q - i p)/2 under [q, p] = 2i.
  CMatrix m(2, 2);
  m << Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.5, 0.0), Complex(0.0, -0.5);
  return m;
}

GammaMap make_gamma(int n_v) {
  check_even_positive(n_v, "n_v");
  const CMatrix m = ladder_block();
  CMatrix kron = CMatrix::Zero(n_v, n_v);
  for (int k = 0; k < n_v / 2; ++k) kron.block(2 * k, 2 * k, 2, 2) = m;
  const Matrix p = make_quadrature_permutation(n_v).matrix();
  return GammaMap{n_v, p.cast<Complex>() * kron};
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw DimensionError("block_diag expects square blocks");
    total += b.rows();
  }
  Matrix out = Matrix::Zero(total, total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace qctl
