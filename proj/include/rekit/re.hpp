#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rekit/eigen.hpp"
#include "rekit/matrix.hpp"

namespace rekit {

/// Effective reproduction number R_e(eta) = rho(K Diag(eta)) together with
/// the effective spectrum and the baseline R_0 = R_e(1).
struct ReReport {
  double value = 0.0;
  Spectrum effective_spectrum;
  double r0 = 0.0;
};

ReReport re(const NextGenMatrix& m, const Strategy& eta);

/// One failed randomized assertion; empty vector means all trials passed.
struct PropertyViolation {
  std::uint64_t trial = 0;
  std::string property;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyReport {
  int trials = 0;
  std::vector<PropertyViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Randomized check of monotonicity (eta1 <= eta2 implies Re(eta1) <= Re(eta2))
/// and positive homogeneity (Re(lambda eta) = lambda Re(eta)) over seeded
/// trials. Violations are reported as data, never thrown.
PropertyReport check_elementary_properties(const NextGenMatrix& m, int trials,
                                           std::uint64_t seed, double tol = 1e-9);

/// Spectrum-preserving transformation checks for a fixed (h, eta):
///  (a) Diag(h) M Diag(1/h) vs M,
///  (b) M^T vs M,
///  (c) Diag(h) M Diag(eta) vs M Diag(h) Diag(eta).
struct InvarianceReport {
  bool conjugation_ok = false;
  bool transpose_ok = false;
  bool multiplier_swap_ok = false;
  double max_deviation = 0.0;
  bool ok() const { return conjugation_ok && transpose_ok && multiplier_swap_ok; }
};

InvarianceReport check_transform_invariance(const NextGenMatrix& m, const std::vector<double>& h,
                                            const Strategy& eta, double tol = 1e-8);

}  // namespace rekit
