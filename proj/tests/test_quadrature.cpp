#include <doctest.h>

#include <random>

#include "qctl/errors.hpp"
#include "qctl/quadrature.hpp"
#include "support/matchers.hpp"

using namespace qctl;
using namespace qctl::testing;

TEST_CASE("make_theta builds the canonical skew form") {
  SUBCASE("n = 2 is the elementary block") {
    Matrix j(2, 2);
    j << 0, 1, -1, 0;
    CHECK(max_abs_diff(make_theta(2).theta, j) == 0.0);
  }

  SUBCASE("n = 4 is blkdiag(J, J)") {
    const Matrix theta = make_theta(4).theta;
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 1) = 1;
    expected(1, 0) = -1;
    expected(2, 3) = 1;
    expected(3, 2) = -1;
    CHECK(max_abs_diff(theta, expected) == 0.0);
  }

  SUBCASE("theta * theta = -I") {
    const Matrix theta = make_theta(4).theta;
    CHECK(max_abs_diff(theta * theta, -Matrix::Identity(4, 4)) == 0.0);
  }

  SUBCASE("rejects odd or non-positive dimensions") {
    CHECK_THROWS_AS(make_theta(3), PreconditionError);
    CHECK_THROWS_AS(make_theta(0), PreconditionError);
    CHECK_THROWS_AS(make_theta(-2), PreconditionError);
  }
}

TEST_CASE("skew form algebra holds for all small even n") {
  for (int n = 2; n <= 12; n += 2) {
    const Matrix theta = theta_matrix(n);
    CHECK(max_abs_diff(theta.transpose(), -theta) == 0.0);
    CHECK(max_abs_diff(theta * theta, -Matrix::Identity(n, n)) == 0.0);
    CHECK(theta.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("quadrature permutation interleaves odd then even slots") {
  const QuadraturePermutation p = make_quadrature_permutation(4);
  Vector a(4);
  a << 1, 2, 3, 4;
  const Vector reordered = p.matrix() * a;
  Vector expected(4);
  expected << 1, 3, 2, 4;
  CHECK(max_abs_diff(reordered, expected) == 0.0);

  SUBCASE("permutation matrices are orthogonal") {
    for (int n = 2; n <= 10; n += 2) {
      const Matrix pm = make_quadrature_permutation(n).matrix();
      CHECK(max_abs_diff(pm.transpose() * pm, Matrix::Identity(n, n)) == 0.0);
    }
  }
}

TEST_CASE("gamma map") {
  SUBCASE("n_v = 2 reduces to the ladder block") {
    CHECK(max_abs_diff_c(make_gamma(2).gamma, ladder_block()) == 0.0);
  }

  SUBCASE("rejects odd n_v") { CHECK_THROWS_AS(make_gamma(3), PreconditionError); }

  SUBCASE("round-trip through the inverse is the identity") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n : {2, 4, 6}) {
      const GammaMap gamma = make_gamma(n);
      CVector quad(n);
      for (int i = 0; i < n; ++i) quad(i) = Complex(gauss(rng), 0.0);
      // ladder coordinates and back, inverse obtained by direct solve
      const CVector ladder = gamma.gamma * quad;
      const CVector back = gamma.gamma.partialPivLu().solve(ladder);
      CHECK((back - quad).norm() <= 1e-14);
    }
  }

  SUBCASE("exactly one nonzero block per channel and invertible") {
    const GammaMap gamma = make_gamma(6);
    CHECK(std::abs(gamma.gamma.determinant()) > 0.1);
    // row for channel k only touches quadrature pair k
    for (int ch = 0; ch < 3; ++ch) {
      for (int col = 0; col < 6; ++col) {
        const bool in_block = col / 2 == ch;
        const double a_mag = std::abs(gamma.gamma(ch, col));        // annihilation rows
        const double c_mag = std::abs(gamma.gamma(3 + ch, col));    // creation rows
        if (!in_block) {
          CHECK(a_mag == 0.0);
          CHECK(c_mag == 0.0);
        }
      }
    }
  }
}

TEST_CASE("block_diag skips empty blocks") {
  const Matrix d = block_diag({theta_matrix(2), Matrix::Zero(0, 0), theta_matrix(2)});
  CHECK(d.rows() == 4);
  CHECK(max_abs_diff(d, theta_matrix(4)) == 0.0);
}
