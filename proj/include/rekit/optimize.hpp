#pragma once

#include <cstdint>
#include <vector>

#include "rekit/matrix.hpp"
#include "rekit/shape.hpp"

namespace rekit {

/// Minimize R_e over the box [0,1]^n under the linear vaccination budget
/// sum_i c_i (1 - eta_i) <= budget. Costs default to the matrix weights.
struct BudgetProblem {
  BudgetProblem(NextGenMatrix matrix, double budget,
                std::optional<std::vector<double>> cost_weights = std::nullopt);

  NextGenMatrix matrix;
  std::vector<double> cost_weights;
  double budget;

  double total_cost() const;
  /// Cost of the vaccination part of eta: sum c_i (1 - eta_i).
  double cost(const Strategy& eta) const;
  bool feasible(const Strategy& eta, double slack = 1e-9) const;
};

enum class OptimMethod { gradient, vertex_search, grid_fallback };

struct OptimizationResult {
  Strategy eta_star;
  double value = 0.0;
  OptimMethod method = OptimMethod::grid_fallback;
  int iterations = 0;
  ShapeClass certificate_used = ShapeClass::inconclusive;
  bool converged = true;
  /// True only when the method guarantees a global optimum
  /// (vertex enumeration on certified instances, or a trivial budget).
  bool optimality_claimed = false;
  /// Set when the leading eigenvalue was non-simple at some accepted iterate
  /// and a jittered subgradient was used.
  bool subgradient_fallback = false;
};

OptimizationResult minimize_re(const BudgetProblem& p, const ShapeVerdict& verdict,
                               int max_iter = 500, std::uint64_t seed = 0);

/// Gradient of eta -> R_e(eta) at a point where the leading eigenvalue is
/// simple, from the left/right Perron pair of K Diag(eta). Satisfies
/// <g, eta> = R_e(eta) (Euler's relation for 1-homogeneous functions).
std::vector<double> re_gradient(const NextGenMatrix& m, const Strategy& eta);

}  // namespace rekit
