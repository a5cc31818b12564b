#pragma once

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qctl/systems.hpp"
#include "qctl/types.hpp"

namespace qctl {

// Pole-region constraint: |z| <= r_max, Re z <= -alpha_min, |arg(-z)| <= theta_max.
struct PoleRegion {
  double r_max = 0.0;
  double alpha_min = 0.0;
  double theta_max = 0.0;  // radians
};

// Desired pole multiset (closed under conjugation) and/or a region used for
// verification.
struct PoleSpec {
  std::vector<Complex> poles;
  std::optional<PoleRegion> region;

  bool has_poles() const { return !poles.empty(); }
};

struct PlacementOptions {
  double cond_limit = 1e8;   // retry threshold on the similarity solution
  int max_attempts = 20;     // fresh parameter draws before giving up
  double pairing_tol = 1e-8; // max pole pairing distance accepted as a match
};

struct PlacementResult {
  Matrix gain;
  std::vector<Complex> achieved;
  double residual = 0.0;
  int attempts = 0;
};

// Eigenvalues of a real matrix, sorted by (Re, Im).
std::vector<Complex> eigenvalues_of(MatrixRef m);

// Greedy minimal-distance matching; returns the largest matched distance.
double pole_pairing_distance(std::vector<Complex> a, std::vector<Complex> b);

bool conjugate_closed(const std::vector<Complex>& poles, double tol = 1e-8);

// Finds H such that eig(A_eff + B H) equals spec.poles, via the
// Sylvester-equation method: draw a random parameter G, solve
// A_eff X - X L = -B G with L the real block form of the spec, set H = G X^{-1},
// and retry with a fresh G while X is ill-conditioned.
PlacementResult place_state_feedback(MatrixRef A_eff, MatrixRef B, const PoleSpec& spec,
                                     std::mt19937_64& rng,
                                     const PlacementOptions& options = {});

// Dual problem: G1 with eig(A_eff - G1 C) = spec.poles, obtained from
// place_state_feedback on the transposed pair.
PlacementResult place_observer_gain(MatrixRef A_eff, MatrixRef C, const PoleSpec& spec,
                                    std::mt19937_64& rng,
                                    const PlacementOptions& options = {});

struct ScalarSearchOptions {
  double lo = -20.0;
  double hi = 20.0;
  int samples = 2001;     // coarse grid before local refinement
  int refine_iters = 160; // golden-section iterations
};

struct ScalarPlacement {
  double scalar = 0.0;
  std::vector<Complex> poles;
  double residual = 0.0;
};

// One-parameter structured placement: minimizes the pole pairing distance of
// eig(A_eff + s M) against spec.poles over the scalar s.  Never throws on an
// unreachable spec; the caller inspects residual.
ScalarPlacement place_structured_scalar(MatrixRef A_eff, MatrixRef M, const PoleSpec& spec,
                                        const ScalarSearchOptions& options = {});

struct ScalarScanPoint {
  double scalar = 0.0;
  std::vector<Complex> poles;
  bool in_region = false;
};

struct ScalarScan {
  std::vector<ScalarScanPoint> points;
  std::optional<double> chosen;  // midpoint of the widest feasible run
  std::optional<std::pair<double, double>> feasible_interval;
  // Pole-magnitude spread across feasible samples; a near-zero spread means
  // the reachable poles are confined to a circular arc.
  double feasible_radius_min = 0.0;
  double feasible_radius_max = 0.0;
};

// Region-only structured design: samples s over a grid and reports which
// values keep every pole of A_eff + s M inside the region.
ScalarScan scan_scalar_gain(MatrixRef A_eff, MatrixRef M, const PoleRegion& region,
                            const ScalarSearchOptions& options = {});

// Monic characteristic polynomial, descending powers, via Faddeev-LeVerrier.
std::vector<double> char_poly(MatrixRef m);

std::vector<double> poly_multiply(const std::vector<double>& a, const std::vector<double>& b);

// Roots of a monic real polynomial (closed form through degree 2, companion
// matrix above).
std::vector<Complex> poly_roots(const std::vector<double>& monic_coeffs);

struct CharPolyPair {
  std::vector<double> regulator;  // det(sI - A - B2 H - 2 theta Rc)
  std::vector<double> observer;   // det(sI - A + G1 C + 2 theta Rc)
};

// The two factors of the closed-loop polynomial.  Requires symmetric Rc; the
// product form is not valid otherwise.
CharPolyPair closed_loop_char_poly(const QuadraturePlant& plant, MatrixRef H, MatrixRef G1,
                                   const DirectCoupling& coupling);

struct PoleRegionCheck {
  Complex pole;
  bool radius_ok = false;
  bool decay_ok = false;
  bool damping_ok = false;
  bool pass = false;
};

struct RegionReport {
  bool all_pass = false;
  std::vector<PoleRegionCheck> checks;
};

RegionReport poles_in_region(const std::vector<Complex>& poles, const PoleRegion& region);

}  // namespace qctl
