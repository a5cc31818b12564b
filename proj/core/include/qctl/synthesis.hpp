#pragma once

#include <optional>
#include <random>

#include "qctl/completion.hpp"
#include "qctl/pole_placement.hpp"
#include "qctl/systems.hpp"
#include "qctl/types.hpp"

namespace qctl {

// Observer-based coherent controller synthesis: observer gain first, then
// state feedback, then the algebraically forced G2 and F, then the noise
// completion that makes the controller a legitimate quantum system.

// Scalar-multiple structure constraints on the gains (cavity-style designs
// where couplings are proportional to the mode's annihilation operator).
// A fixed value pins the scalar; otherwise it is searched against the spec.
struct StructuredGainSpec {
  bool h_scalar = false;
  bool g1_scalar = false;
  std::optional<double> h_value;
  std::optional<double> g1_value;

  bool any() const { return h_scalar || g1_scalar; }
};

struct SynthesisProblem {
  QuadraturePlant plant;
  DirectCoupling coupling;
  PoleSpec regulator_spec;
  PoleSpec observer_spec;
  StructuredGainSpec structured;
  bool force_asymmetric = false;  // accept non-symmetric Rc (separation will fail)
};

struct ClosedLoopSystem {
  Matrix A_s;  // (x, xh) coordinates
  Matrix B_s;  // noise inputs (w, z, v)
  Matrix A_e;  // (x, e = x - xh) coordinates
  ObserverController ctrl;
  DirectCoupling coupling;

  int n_x() const { return ctrl.n_x; }
  // blkdiag of the skew forms of the (w, z, v) channels.
  Matrix noise_theta() const;
};

struct SeparationReport {
  bool triangular = false;
  double spectrum_union_residual = 0.0;  // Hausdorff distance, see verify_separation
};

// Per-gain design record: how the gain was obtained and how well it hit the
// requested poles.
struct GainDesignInfo {
  std::vector<Complex> poles;
  double residual = 0.0;             // pairing distance to the spec (0 when no spec poles)
  std::optional<double> scalar;      // structured designs only
  std::optional<ScalarScan> scan;    // region-only structured designs only
};

struct SynthesisDetails {
  ClosedLoopSystem system;
  GainDesignInfo regulator;
  GainDesignInfo observer;
  NoiseCompletion completion;
  SeparationReport separation;
};

// Runs the full pipeline.  Throws PreconditionError naming the violated
// hypothesis when the plant fails detectability/controllability, and
// NumericalError when placement or completion fails.
ClosedLoopSystem synthesize(const SynthesisProblem& problem, std::mt19937_64& rng);
SynthesisDetails synthesize_detailed(const SynthesisProblem& problem, std::mt19937_64& rng);

// Combined (plant, controller) system with field and direct couplings.
ClosedLoopSystem assemble_closed_loop(const QuadraturePlant& plant,
                                      const ObserverController& ctrl,
                                      const DirectCoupling& coupling);

// triangular: the error-form lower-left block vanishes (<= 1e-12), i.e. the
// observer and regulator designs decouple.  spectrum_union_residual: Hausdorff
// distance between eig(A_s) and the union of the two diagonal-block spectra.
SeparationReport verify_separation(const ClosedLoopSystem& cls);

}  // namespace qctl
