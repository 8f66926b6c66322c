#pragma once

#include <variant>
#include <vector>

#include "rekit/matrix.hpp"

namespace rekit {

/// Positive diagonal d with d_i K_ij = d_j K_ji, normalized so that
/// min d_i = 1 on every connected component of the support graph.
struct SymmetrizationCertificate {
  std::vector<double> d;
  double residual = 0.0;  // max |d_i K_ij - d_j K_ji|
};

/// Constructive refutation of diagonal symmetrizability.
struct SymmetrizationObstruction {
  enum class Kind { zero_pattern_asymmetry, cycle_inconsistency };
  Kind kind;
  /// zero_pattern_asymmetry: {i, j} with K_ij > 0 and K_ji = 0.
  /// cycle_inconsistency: the cycle i0, i1, ..., ik (= i0 implicitly) whose
  /// ratio product differs from 1.
  std::vector<int> witness;
  double ratio_product = 1.0;  // product of K_ab/K_ba along the cycle
};

using SymmetrizeResult = std::variant<SymmetrizationCertificate, SymmetrizationObstruction>;

/// Decide diagonal symmetrizability. Entries with |K_ij| <= tol * max-entry
/// are treated as structural zeros. Ratios are propagated over a spanning
/// forest of the support graph and every non-tree edge is verified.
SymmetrizeResult symmetrize(const NextGenMatrix& m, double tol = 1e-12);

bool is_certificate(const SymmetrizeResult& r);

/// S_ij = sqrt(d_i / d_j) * K_ij; symmetric and similar to K.
NextGenMatrix symmetric_form(const NextGenMatrix& m, const SymmetrizationCertificate& cert);

/// Recompute max |d_i K_ij - d_j K_ji| for an arbitrary diagonal.
double symmetrization_residual(const NextGenMatrix& m, const std::vector<double>& d);

/// Multiply the entry ratios K_ab/K_ba along a cycle witness.
double replay_cycle_product(const NextGenMatrix& m, const std::vector<int>& cycle);

}  // namespace rekit
