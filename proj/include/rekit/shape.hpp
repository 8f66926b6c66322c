#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rekit/eigen.hpp"
#include "rekit/matrix.hpp"
#include "rekit/symmetrize.hpp"

namespace rekit {

enum class ShapeClass {
  convex_certified,
  concave_certified,
  linear_certified,
  violation_found,
  inconclusive,
};

enum class ViolationMode { convexity, concavity };

/// A replayable witness: R_e(theta eta0 + (1-theta) eta1) is above (convexity
/// mode) or below (concavity mode) the chord by `gap`.
struct ShapeViolation {
  ViolationMode mode;
  Strategy eta0, eta1;
  double theta = 0.5;
  double gap = 0.0;  // |midpoint - chord| in the violating direction
  std::uint64_t sample_index = 0;
};

struct ShapeVerdict {
  ShapeClass classification = ShapeClass::inconclusive;
  std::optional<SymmetrizationCertificate> certificate;
  std::optional<Inertia> spectrum_inertia;
  std::vector<ShapeViolation> violations;  // at most one per mode
};

/// Certification by symmetrizability + inertia: n = 0 gives convexity, p = 1
/// concavity, both linearity. Non-certifiable inputs fall back to sampling;
/// absent violations the verdict stays honest: inconclusive.
ShapeVerdict classify_shape(const NextGenMatrix& m, int samples = 10000, std::uint64_t seed = 0);

/// Randomized chord-vs-midpoint search over mixtures of box-uniform, sparse
/// and simplex-plane strategy pairs. Returns the earliest violating sample.
std::optional<ShapeViolation> find_shape_violation(const NextGenMatrix& m, ViolationMode mode,
                                                   int samples, std::uint64_t seed);

/// Closed-form second derivative of alpha -> R_e((1-alpha) eta0 + alpha eta1)
/// for a certified matrix with p = 1, plus a central finite-difference
/// cross-check (Richardson-refined).
struct SecondDerivativeReport {
  double alpha = 0.0;
  double r_alpha = 0.0;
  double r_second = 0.0;
  /// Summands (lambda_n, a_n^2 <u_n,u_n>_alpha); the value of each term is
  /// lambda_n / (r_alpha - lambda_n) * coefficient.
  std::vector<std::pair<double, double>> terms;
  double fd_estimate = 0.0;
  double fd_step = 0.0;
};

SecondDerivativeReport second_derivative(const NextGenMatrix& m,
                                         const SymmetrizationCertificate& cert,
                                         const Strategy& eta0, const Strategy& eta1, double alpha,
                                         double fd_step = 1e-4, double eta_floor = 1e-6);

/// R_e sampled over the plane eta_1 + eta_2 + eta_3 = 1/3 on an N x N grid
/// (rows with eta_3 < 0 are skipped). Only defined for 3x3 matrices.
struct PlaneSample {
  double eta1, eta2, value;
};
std::vector<PlaneSample> sample_simplex_plane(const NextGenMatrix& m, int grid);

}  // namespace rekit
