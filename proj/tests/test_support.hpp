#pragma once

#include <cmath>
#include <vector>

#include "rekit/matrix.hpp"
#include "rekit/rng.hpp"

namespace rekit::test {

inline NextGenMatrix random_positive_matrix(TrialRng& rng, int n, double lo = 0.05,
                                            double hi = 1.05) {
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (auto& x : e) x = rng.uniform(lo, hi);
  return NextGenMatrix(n, std::move(e));
}

inline Strategy random_strategy(TrialRng& rng, int n) {
  std::vector<double> eta(static_cast<std::size_t>(n));
  for (auto& x : eta) x = rng.next_double();
  return Strategy(std::move(eta));
}

inline std::vector<double> random_positive_vector(TrialRng& rng, int n, double lo = 0.2,
                                                  double hi = 2.0) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// Independent spectral-radius oracle: plain power iteration on M + sI with
/// s = max row sum, which makes the Perron root strictly dominant.
inline double power_iteration_radius(const NextGenMatrix& m, int max_iter = 200000) {
  const int n = m.size();
  double shift = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += m(i, j);
    shift = std::max(shift, row);
  }
  if (shift == 0.0) return 0.0;
  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = shift * v[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) acc += m(i, j) * v[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    double norm = 0.0;
    for (double x : y) norm += x;
    const double next = norm;  // ||y||_1 with v normalized to ||v||_1 = 1
    for (auto& x : y) x /= norm;
    v = y;
    if (it > 3 && std::abs(next - estimate) <= 1e-13 * next) return next - shift;
    estimate = next;
  }
  return estimate - shift;
}

/// Diagonally symmetrizable matrix with nonnegative spectrum: D * (A^T A)
/// with A entrywise nonnegative, so the product stays nonnegative.
inline NextGenMatrix random_psd_symmetrizable(TrialRng& rng, int n) {
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (auto& x : a) x = rng.next_double();
  std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        s[static_cast<std::size_t>(i) * n + j] +=
            a[static_cast<std::size_t>(k) * n + i] * a[static_cast<std::size_t>(k) * n + j];
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double di = rng.uniform(0.3, 2.0);
    for (int j = 0; j < n; ++j)
      e[static_cast<std::size_t>(i) * n + j] = di * s[static_cast<std::size_t>(i) * n + j];
  }
  return NextGenMatrix(n, std::move(e));
}

/// Diagonally symmetrizable matrix with exactly one eigenvalue of positive
/// real part: D * (rho v v^T - B) with B positive semi-definite and small
/// enough to keep the entries nonnegative (the second Rayleigh quotient is
/// then nonpositive on the orthogonal complement of v).
inline NextGenMatrix random_p1_symmetrizable(TrialRng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double nrm = 0.0;
  for (auto& x : v) {
    x = rng.uniform(0.3, 1.0);
    nrm += x * x;
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  const double rho = rng.uniform(1.0, 3.0);

  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (auto& x : a) x = rng.uniform(-1.0, 1.0);

  for (double scale = 0.2; scale > 1e-6; scale *= 0.5) {
    std::vector<double> s(static_cast<std::size_t>(n) * n);
    bool nonneg = true;
    for (int i = 0; i < n && nonneg; ++i) {
      for (int j = 0; j < n; ++j) {
        double b = 0.0;
        for (int k = 0; k < n; ++k)
          b += a[static_cast<std::size_t>(k) * n + i] * a[static_cast<std::size_t>(k) * n + j];
        const double val = rho * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] - scale * b;
        if (val < 0.0) {
          nonneg = false;
          break;
        }
        s[static_cast<std::size_t>(i) * n + j] = val;
      }
    }
    if (!nonneg) continue;
    std::vector<double> e(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      const double di = rng.uniform(0.3, 2.0);
      for (int j = 0; j < n; ++j)
        e[static_cast<std::size_t>(i) * n + j] = di * s[static_cast<std::size_t>(i) * n + j];
    }
    return NextGenMatrix(n, std::move(e));
  }
  // B shrank to nothing: fall back to the bare rank-one matrix.
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e[static_cast<std::size_t>(i) * n + j] = rho * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return NextGenMatrix(n, std::move(e));
}

/// Random block-triangular matrix with planted diagonal blocks and random
/// upper coupling; the blocks are exactly the non-zero atoms.
inline NextGenMatrix random_block_triangular(TrialRng& rng, int blocks, int max_block = 3,
                                             double coupling = 0.4) {
  std::vector<int> sizes;
  int n = 0;
  for (int b = 0; b < blocks; ++b) {
    sizes.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_block))));
    n += sizes.back();
  }
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  int off = 0;
  for (int b = 0; b < blocks; ++b) {
    const int k = sizes[static_cast<std::size_t>(b)];
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        e[static_cast<std::size_t>(off + i) * n + (off + j)] = rng.uniform(0.1, 1.1);
    for (int i = off; i < off + k; ++i)
      for (int j = off + k; j < n; ++j)
        if (rng.next_double() < coupling) e[static_cast<std::size_t>(i) * n + j] = rng.next_double();
    off += k;
  }
  return NextGenMatrix(n, std::move(e));
}

}  // namespace rekit::test
