#include "rekit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rekit {

NextGenMatrix::NextGenMatrix(int n, std::vector<double> entries,
                             std::optional<std::vector<double>> weights)
    : n_(n), entries_(std::move(entries)) {
  if (n_ < 1) throw input_error("matrix dimension must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(n_) * n_)
    throw input_error("entry count does not match dimension " + std::to_string(n_));
  for (double v : entries_) {
    if (!std::isfinite(v)) throw input_error("matrix entries must be finite");
    if (v < 0.0) throw input_error("matrix entries must be nonnegative");
  }
  if (weights) {
    weights_ = std::move(*weights);
    if (weights_.size() != static_cast<std::size_t>(n_))
      throw input_error("weight count does not match dimension");
    for (double w : weights_)
      if (!(w > 0.0) || !std::isfinite(w))
        throw input_error("weights must be positive and finite");
  } else {
    weights_.assign(static_cast<std::size_t>(n_), 1.0);
  }
}

NextGenMatrix NextGenMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                       std::optional<std::vector<double>> weights) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw input_error("rows must form a square matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return NextGenMatrix(n, std::move(flat), std::move(weights));
}

NextGenMatrix NextGenMatrix::zero(int n) {
  return NextGenMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
}

NextGenMatrix NextGenMatrix::identity(int n) {
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1.0;
  return NextGenMatrix(n, std::move(e));
}

double NextGenMatrix::max_entry() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, v);
  return m;
}

NextGenMatrix NextGenMatrix::transposed() const {
  std::vector<double> t(entries_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      t[static_cast<std::size_t>(j) * n_ + i] = (*this)(i, j);
  return NextGenMatrix(n_, std::move(t), weights_);
}

NextGenMatrix NextGenMatrix::submatrix(const std::vector<int>& rows) const {
  const int k = static_cast<int>(rows.size());
  if (k < 1) throw input_error("submatrix index set must be nonempty");
  std::vector<double> sub(static_cast<std::size_t>(k) * k);
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    const int i = rows[static_cast<std::size_t>(a)];
    if (i < 0 || i >= n_) throw input_error("submatrix index out of range");
    w[static_cast<std::size_t>(a)] = weights_[static_cast<std::size_t>(i)];
    for (int b = 0; b < k; ++b)
      sub[static_cast<std::size_t>(a) * k + b] = (*this)(i, rows[static_cast<std::size_t>(b)]);
  }
  return NextGenMatrix(k, std::move(sub), std::move(w));
}

Strategy::Strategy(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw input_error("strategy must have dimension >= 1");
  for (double v : eta_)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw input_error("strategy entries must lie in [0, 1]");
}

Strategy Strategy::ones(int n) { return Strategy(std::vector<double>(static_cast<std::size_t>(n), 1.0)); }
Strategy Strategy::zeros(int n) { return Strategy(std::vector<double>(static_cast<std::size_t>(n), 0.0)); }

Strategy Strategy::indicator(int n, const std::vector<int>& support) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (int i : support) {
    if (i < 0 || i >= n) throw input_error("indicator index out of range");
    v[static_cast<std::size_t>(i)] = 1.0;
  }
  return Strategy(std::move(v));
}

Strategy Strategy::scaled(double lambda) const {
  if (lambda < 0.0 || lambda > 1.0) throw input_error("scaling factor must lie in [0, 1]");
  std::vector<double> v(eta_);
  for (double& x : v) x *= lambda;
  return Strategy(std::move(v));
}

NextGenMatrix scale_columns(const NextGenMatrix& m, const Strategy& eta) {
  if (eta.size() != m.size()) throw input_error("strategy dimension does not match matrix");
  const int n = m.size();
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e[static_cast<std::size_t>(i) * n + j] = m(i, j) * eta[j];
  return NextGenMatrix(n, std::move(e), m.weights());
}

NextGenMatrix scale_both(const NextGenMatrix& m, const std::vector<double>& h,
                         const std::vector<double>& g) {
  const int n = m.size();
  if (static_cast<int>(h.size()) != n || static_cast<int>(g.size()) != n)
    throw input_error("multiplier dimension does not match matrix");
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e[static_cast<std::size_t>(i) * n + j] = h[static_cast<std::size_t>(i)] * m(i, j) * g[static_cast<std::size_t>(j)];
  return NextGenMatrix(n, std::move(e), m.weights());
}

}  // namespace rekit
