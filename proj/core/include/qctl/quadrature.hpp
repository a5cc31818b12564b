#pragma once

#include <vector>

#include "qctl/types.hpp"

namespace qctl {

// Symplectic/quadrature bookkeeping shared by every other module.
//
// State vectors are ordered (q1, p1, q2, p2, ...); the canonical commutation
// relations are encoded by the block-diagonal skew form theta = I_{n/2} (x) J
// with J = [[0, 1], [-1, 0]].

struct SymplecticStructure {
  int n = 0;        // quadrature dimension, even, >= 2
  Matrix theta;     // n x n, theta^T = -theta, theta^2 = -I
};

// Reorders (a1, a2, ..., an) into (a1, a3, ..., a_{n-1}, a2, a4, ..., an).
struct QuadraturePermutation {
  int n = 0;
  std::vector<int> perm;  // perm[i] = index selected into slot i

  Matrix matrix() const;
};

// Maps interleaved quadrature pairs to stacked annihilation/creation pairs:
// gamma = P_n (I_{n/2} (x) M) with M the fixed 2x2 quadrature-to-ladder block.
struct GammaMap {
  int n = 0;
  CMatrix gamma;  // n x n complex, invertible
};

SymplecticStructure make_theta(int n);
QuadraturePermutation make_quadrature_permutation(int n);
GammaMap make_gamma(int n_v);

// Bare skew form I_{n/2} (x) J, for callers that only need the matrix.
Matrix theta_matrix(int n);

// The 2x2 quadrature-to-ladder block used by make_gamma.
CMatrix ladder_block();

// blkdiag of the given square blocks; empty blocks are skipped.
Matrix block_diag(const std::vector<Matrix>& blocks);

}  // namespace qctl
