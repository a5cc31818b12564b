#include "qctl/pole_placement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qctl/errors.hpp"
#include "qctl/quadrature.hpp"

namespace qctl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void sort_canonical(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

// Real block-diagonal form of a conjugate-closed pole multiset: 1x1 blocks
// for real poles, [[a, b], [-b, a]] for pairs a +/- ib.
Matrix real_block_form(const std::vector<Complex>& poles, double tol) {
  const int n = static_cast<int>(poles.size());
  std::vector<bool> used(n, false);
  Matrix block = Matrix::Zero(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    const Complex z = poles[i];
    if (std::abs(z.imag()) <= tol) {
      block(at, at) = z.real();
      used[i] = true;
      at += 1;
      continue;
    }
    int partner = -1;
    double best = kInf;
    for (int j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(std::conj(z) - poles[j]);
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner < 0 || best > tol * std::max(1.0, std::abs(z))) {
      throw PreconditionError("pole multiset is not closed under conjugation");
    }
    const double a = 0.5 * (z.real() + poles[partner].real());
    const double b = std::abs(z.imag());
    block.block(at, at, 2, 2) << a, b, -b, a;
    used[i] = used[partner] = true;
    at += 2;
  }
  return block;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Solves A X - X L = -B G by vectorization; returns nullopt when the solution
// is invalid or ill-conditioned.
std::optional<Matrix> solve_sylvester(const Matrix& A, const Matrix& L, const Matrix& BG,
                                      double cond_limit) {
  const Eigen::Index n = A.rows();
  const Matrix op =
      kron(Matrix::Identity(n, n), A) - kron(L.transpose(), Matrix::Identity(n, n));
  Eigen::PartialPivLU<Matrix> lu(op);
  Vector rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -BG.col(j);
  const Vector x = lu.solve(rhs);
  Matrix X(n, n);
  for (Eigen::Index j = 0; j < n; ++j) X.col(j) = x.segment(j * n, n);

  const double res = (A * X - X * L + BG).norm();
  if (!X.allFinite() || res > 1e-8 * std::max(1.0, X.norm() * A.norm())) return std::nullopt;

  Eigen::JacobiSVD<Matrix> svd(X);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > cond_limit) return std::nullopt;
  return X;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b, int iters,
                       double& best_x, double& best_f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  auto track = [&](double x, double fx) {
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  };
  track(x1, f1);
  track(x2, f2);
  for (int k = 0; k < iters && (b - a) > 0.0; ++k) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
      track(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
      track(x2, f2);
    }
  }
  return best_x;
}

bool region_pass(const PoleRegionCheck& c) { return c.radius_ok && c.decay_ok && c.damping_ok; }

PoleRegionCheck check_one_pole(const Complex& z, const PoleRegion& region) {
  // Boundary membership decided with a 1e-12 slack.
  auto leq = [](double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); };
  PoleRegionCheck c;
  c.pole = z;
  c.radius_ok = leq(std::abs(z), region.r_max);
  c.decay_ok = leq(z.real(), -region.alpha_min);
  c.damping_ok = leq(std::abs(std::arg(-z)), region.theta_max);
  c.pass = region_pass(c);
  return c;
}

}  // namespace

std::vector<Complex> eigenvalues_of(MatrixRef m) {
  detail::require_dims(m.rows() == m.cols(), "eigenvalues_of: matrix must be square");
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  std::vector<Complex> out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = es.eigenvalues()(i);
  sort_canonical(out);
  return out;
}

double pole_pairing_distance(std::vector<Complex> a, std::vector<Complex> b) {
  detail::require_dims(a.size() == b.size(), "pole_pairing_distance: size mismatch");
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = kInf;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

bool conjugate_closed(const std::vector<Complex>& poles, double tol) {
  std::vector<Complex> conj(poles.size());
  std::transform(poles.begin(), poles.end(), conj.begin(),
                 [](const Complex& z) { return std::conj(z); });
  return pole_pairing_distance(poles, conj) <= tol;
}

PlacementResult place_state_feedback(MatrixRef A_eff, MatrixRef B, const PoleSpec& spec,
                                     std::mt19937_64& rng, const PlacementOptions& options) {
  const Eigen::Index n = A_eff.rows();
  const Eigen::Index m = B.cols();
  detail::require_dims(A_eff.cols() == n && B.rows() == n,
                       "place_state_feedback: dimension mismatch");
  if (static_cast<Eigen::Index>(spec.poles.size()) != n) {
    throw PreconditionError("place_state_feedback: spec must contain exactly n poles");
  }
  if (!conjugate_closed(spec.poles)) {
    throw PreconditionError("place_state_feedback: pole multiset is not conjugate-closed");
  }

  PlacementResult result;
  result.gain = Matrix::Zero(m, n);

  // No-motion fast path: the open-loop spectrum already matches.
  const std::vector<Complex> open_loop = eigenvalues_of(A_eff);
  const double open_res = pole_pairing_distance(open_loop, spec.poles);
  if (open_res <= options.pairing_tol) {
    result.achieved = open_loop;
    result.residual = open_res;
    return result;
  }

  if (!is_controllable(A_eff, B)) {
    throw PreconditionError("place_state_feedback: (A, B) is not controllable");
  }

  const Matrix target_block = real_block_form(spec.poles, 1e-8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&]() {
    Matrix G(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) G(i, j) = gauss(rng);
    return G;
  };

  double best_residual = kInf;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    result.attempts = attempt + 1;
    const Matrix G = draw();
    const auto X = solve_sylvester(A_eff, target_block, B * G, options.cond_limit);
    if (!X) continue;
    const Matrix H = X->transpose().partialPivLu().solve(G.transpose()).transpose();
    const std::vector<Complex> achieved = eigenvalues_of(A_eff + B * H);
    const double residual = pole_pairing_distance(achieved, spec.poles);
    if (residual < best_residual) {
      best_residual = residual;
      result.gain = H;
      result.achieved = achieved;
      result.residual = residual;
    }
    if (residual <= options.pairing_tol) return result;
  }

  // Target poles that coincide with open-loop ones make the Sylvester
  // operator singular; route through an intermediate spectrum instead.
  double overlap = kInf;
  for (const Complex& mu : open_loop) {
    for (const Complex& z : spec.poles) overlap = std::min(overlap, std::abs(mu - z));
  }
  if (overlap < 1e-3) {
    std::uniform_real_distribution<double> uni(1.0, 2.0);
    std::vector<Complex> staging(n);
    for (Eigen::Index i = 0; i < n; ++i) staging[i] = Complex(-uni(rng) - 2.0 * double(i), 0.0);
    PoleSpec mid{staging, std::nullopt};
    const PlacementResult first = place_state_feedback(A_eff, B, mid, rng, options);
    const Matrix A_mid = A_eff + B * first.gain;
    const PlacementResult second = place_state_feedback(A_mid, B, spec, rng, options);
    PlacementResult combined;
    combined.gain = first.gain + second.gain;
    combined.achieved = eigenvalues_of(A_eff + B * combined.gain);
    combined.residual = pole_pairing_distance(combined.achieved, spec.poles);
    combined.attempts = first.attempts + second.attempts;
    if (combined.residual <= options.pairing_tol) return combined;
    if (combined.residual < best_residual) {
      best_residual = combined.residual;
      result = combined;
    }
  }

  throw NumericalError("place_state_feedback: placement failed after " +
                       std::to_string(options.max_attempts) +
                       " attempts (best residual " + std::to_string(best_residual) + ")");
}

PlacementResult place_observer_gain(MatrixRef A_eff, MatrixRef C, const PoleSpec& spec,
                                    std::mt19937_64& rng, const PlacementOptions& options) {
  detail::require_dims(C.cols() == A_eff.rows(), "place_observer_gain: C column count != n");
  PlacementResult dual =
      place_state_feedback(A_eff.transpose(), C.transpose(), spec, rng, options);
  PlacementResult result;
  // eig(A - G1 C) = eig(A^T + C^T K) under G1 = -K^T.
  result.gain = -dual.gain.transpose();
  result.achieved = eigenvalues_of(A_eff - result.gain * C);
  result.residual = pole_pairing_distance(result.achieved, spec.poles);
  result.attempts = dual.attempts;
  return result;
}

ScalarPlacement place_structured_scalar(MatrixRef A_eff, MatrixRef M, const PoleSpec& spec,
                                        const ScalarSearchOptions& options) {
  const Eigen::Index n = A_eff.rows();
  detail::require_dims(M.rows() == n && M.cols() == n,
                       "place_structured_scalar: M must match A");
  if (static_cast<Eigen::Index>(spec.poles.size()) != n) {
    throw PreconditionError("place_structured_scalar: spec must contain exactly n poles");
  }
  if (!conjugate_closed(spec.poles)) {
    throw PreconditionError("place_structured_scalar: pole multiset is not conjugate-closed");
  }

  const Matrix A(A_eff);
  const Matrix Mm(M);
  auto objective = [&](double s) {
    return pole_pairing_distance(eigenvalues_of(A + s * Mm), spec.poles);
  };

  double best_x = options.lo;
  double best_f = objective(best_x);
  const double step = (options.hi - options.lo) / (options.samples - 1);
  int best_idx = 0;
  for (int i = 1; i < options.samples; ++i) {
    const double s = options.lo + i * step;
    const double fs = objective(s);
    if (fs < best_f) {
      best_f = fs;
      best_x = s;
      best_idx = i;
    }
  }
  const double lo = options.lo + std::max(0, best_idx - 1) * step;
  const double hi = options.lo + std::min(options.samples - 1, best_idx + 1) * step;
  golden_minimize(objective, lo, hi, options.refine_iters, best_x, best_f);

  ScalarPlacement out;
  out.scalar = best_x;
  out.poles = eigenvalues_of(A + best_x * Mm);
  out.residual = best_f;
  return out;
}

ScalarScan scan_scalar_gain(MatrixRef A_eff, MatrixRef M, const PoleRegion& region,
                            const ScalarSearchOptions& options) {
  const Matrix A(A_eff);
  const Matrix Mm(M);
  ScalarScan scan;
  scan.points.reserve(options.samples);
  const double step = (options.hi - options.lo) / (options.samples - 1);
  for (int i = 0; i < options.samples; ++i) {
    ScalarScanPoint point;
    point.scalar = options.lo + i * step;
    point.poles = eigenvalues_of(A + point.scalar * Mm);
    point.in_region = poles_in_region(point.poles, region).all_pass;
    scan.points.push_back(std::move(point));
  }

  // Widest contiguous feasible run.
  int run_start = -1, best_start = -1, best_len = 0;
  for (int i = 0; i <= options.samples; ++i) {
    const bool ok = i < options.samples && scan.points[i].in_region;
    if (ok && run_start < 0) run_start = i;
    if (!ok && run_start >= 0) {
      if (i - run_start > best_len) {
        best_len = i - run_start;
        best_start = run_start;
      }
      run_start = -1;
    }
  }
  if (best_len > 0) {
    const double a = scan.points[best_start].scalar;
    const double b = scan.points[best_start + best_len - 1].scalar;
    scan.feasible_interval = {a, b};
    scan.chosen = 0.5 * (a + b);
    double rmin = kInf, rmax = 0.0;
    for (int i = best_start; i < best_start + best_len; ++i) {
      for (const Complex& z : scan.points[i].poles) {
        rmin = std::min(rmin, std::abs(z));
        rmax = std::max(rmax, std::abs(z));
      }
    }
    scan.feasible_radius_min = rmin;
    scan.feasible_radius_max = rmax;
  }
  return scan;
}

std::vector<double> char_poly(MatrixRef m) {
  detail::require_dims(m.rows() == m.cols(), "char_poly: matrix must be square");
  const Eigen::Index n = m.rows();
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  coeffs[0] = 1.0;
  Matrix acc = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    acc = (m * acc).eval();
    const double ck = -acc.trace() / static_cast<double>(k);
    coeffs[static_cast<std::size_t>(k)] = ck;
    acc += ck * Matrix::Identity(n, n);
  }
  return coeffs;
}

std::vector<double> poly_multiply(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Complex> poly_roots(const std::vector<double>& monic) {
  detail::require_dims(!monic.empty() && monic[0] == 1.0, "poly_roots: polynomial must be monic");
  const std::size_t deg = monic.size() - 1;
  std::vector<Complex> roots;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(Complex(-monic[1], 0.0));
    return roots;
  }
  if (deg == 2) {
    const double b = monic[1];
    const double c = monic[2];
    const double half = -0.5 * b;
    const double disc = half * half - c;
    if (disc >= 0.0) {
      // Cancellation-safe real pair.
      const double root1 = half >= 0.0 ? half + std::sqrt(disc) : half - std::sqrt(disc);
      const double root2 = root1 != 0.0 ? c / root1 : half;
      roots.push_back(Complex(root1, 0.0));
      roots.push_back(Complex(root2, 0.0));
    } else {
      const double im = std::sqrt(-disc);
      roots.push_back(Complex(half, im));
      roots.push_back(Complex(half, -im));
    }
    sort_canonical(roots);
    return roots;
  }
  Matrix companion = Matrix::Zero(deg, deg);
  for (std::size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -monic[deg - i];
  return eigenvalues_of(companion);
}

CharPolyPair closed_loop_char_poly(const QuadraturePlant& plant, MatrixRef H, MatrixRef G1,
                                   const DirectCoupling& coupling) {
  if (!coupling.symmetric()) {
    throw PreconditionError(
        "closed_loop_char_poly: Rc must be symmetric; the product form is invalid otherwise");
  }
  const Matrix theta = theta_matrix(plant.n_x);
  const Matrix shift = 2.0 * theta * coupling.Rc;
  CharPolyPair pair;
  pair.regulator = char_poly(plant.A + plant.B2 * H + shift);
  pair.observer = char_poly(plant.A - G1 * plant.C - shift);
  return pair;
}

RegionReport poles_in_region(const std::vector<Complex>& poles, const PoleRegion& region) {
  detail::require(region.r_max > 0.0, "poles_in_region: r_max must be positive");
  detail::require(region.alpha_min >= 0.0, "poles_in_region: alpha_min must be nonnegative");
  detail::require(region.theta_max > 0.0 && region.theta_max <= M_PI / 2.0 + 1e-12,
                  "poles_in_region: theta_max must lie in (0, pi/2]");
  RegionReport report;
  report.all_pass = true;
  for (const Complex& z : poles) {
    report.checks.push_back(check_one_pole(z, region));
    report.all_pass = report.all_pass && report.checks.back().pass;
  }
  return report;
}

}  // namespace qctl
