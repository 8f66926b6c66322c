#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rekit/errors.hpp"

namespace rekit {

/// Dense nonnegative next-generation matrix together with the positive
/// quadrature weights of the underlying measure (all ones for plain
/// metapopulation matrices). Immutable after construction.
class NextGenMatrix {
 public:
  NextGenMatrix(int n, std::vector<double> entries,
                std::optional<std::vector<double>> weights = std::nullopt);

  /// Build from nested rows, e.g. {{16,12,11},{1,12,12},{8,1,1}}.
  static NextGenMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                 std::optional<std::vector<double>> weights = std::nullopt);
  static NextGenMatrix zero(int n);
  static NextGenMatrix identity(int n);

  int size() const { return n_; }
  double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }
  const std::vector<double>& weights() const { return weights_; }
  double max_entry() const;

  NextGenMatrix transposed() const;

  /// M[rows, rows] as a dense matrix of its own (weights sliced accordingly).
  NextGenMatrix submatrix(const std::vector<int>& rows) const;

 private:
  int n_;
  std::vector<double> entries_;  // row-major n x n
  std::vector<double> weights_;  // length n, all positive
};

/// Vaccination strategy: fraction of each group left non-vaccinated.
class Strategy {
 public:
  explicit Strategy(std::vector<double> eta);
  static Strategy ones(int n);
  static Strategy zeros(int n);
  /// Indicator of an index set, 1 on `support`, 0 elsewhere.
  static Strategy indicator(int n, const std::vector<int>& support);

  int size() const { return static_cast<int>(eta_.size()); }
  double operator[](int i) const { return eta_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return eta_; }

  Strategy scaled(double lambda) const;

 private:
  std::vector<double> eta_;
};

/// K * Diag(eta): column j scaled by eta_j. Weights carried over unchanged.
NextGenMatrix scale_columns(const NextGenMatrix& m, const Strategy& eta);

/// Diag(h) * K * Diag(g) for arbitrary nonnegative h, g.
NextGenMatrix scale_both(const NextGenMatrix& m, const std::vector<double>& h,
                         const std::vector<double>& g);

}  // namespace rekit
