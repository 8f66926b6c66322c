#include "rekit/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rekit {

namespace {

constexpr double kCycleTol = 1e-8;  // relative tolerance on ratio products

// Path from v up to the root of its BFS tree, v first.
std::vector<int> path_to_root(int v, const std::vector<int>& parent) {
  std::vector<int> path{v};
  while (parent[static_cast<std::size_t>(v)] >= 0) {
    v = parent[static_cast<std::size_t>(v)];
    path.push_back(v);
  }
  return path;
}

// Cycle through the non-tree edge (i, j): i -> ... -> lca -> ... -> j,
// closed implicitly by the support edge (j, i).
std::vector<int> build_cycle(int i, int j, const std::vector<int>& parent) {
  auto pi = path_to_root(i, parent);
  auto pj = path_to_root(j, parent);
  std::vector<char> on_pi(parent.size(), 0);
  for (int v : pi) on_pi[static_cast<std::size_t>(v)] = 1;
  int lca = pj.back();
  for (int v : pj) {
    if (on_pi[static_cast<std::size_t>(v)]) {
      lca = v;
      break;
    }
  }
  std::vector<int> cycle;
  for (int v : pi) {
    cycle.push_back(v);
    if (v == lca) break;
  }
  std::vector<int> down;
  for (int v : pj) {
    if (v == lca) break;
    down.push_back(v);
  }
  cycle.insert(cycle.end(), down.rbegin(), down.rend());
  return cycle;
}

}  // namespace

SymmetrizeResult symmetrize(const NextGenMatrix& m, double tol) {
  if (!(tol > 0.0)) throw input_error("support tolerance must be positive");
  const int n = m.size();
  const double thr = tol * m.max_entry();

  auto supported = [&](int i, int j) { return m(i, j) > thr; };

  // Support pattern must be symmetric.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (supported(i, j) != supported(j, i)) {
        SymmetrizationObstruction obs;
        obs.kind = SymmetrizationObstruction::Kind::zero_pattern_asymmetry;
        obs.witness = supported(i, j) ? std::vector<int>{i, j} : std::vector<int>{j, i};
        return obs;
      }
    }
  }

  // Propagate d_j = d_i K_ij / K_ji over a BFS spanning forest.
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int n_components = 0;
  for (int root = 0; root < n; ++root) {
    if (component[static_cast<std::size_t>(root)] >= 0) continue;
    const int comp = n_components++;
    component[static_cast<std::size_t>(root)] = comp;
    d[static_cast<std::size_t>(root)] = 1.0;
    std::queue<int> queue;
    queue.push(root);
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop();
      for (int j = 0; j < n; ++j) {
        if (j == i || !supported(i, j)) continue;
        if (component[static_cast<std::size_t>(j)] >= 0) continue;
        component[static_cast<std::size_t>(j)] = comp;
        parent[static_cast<std::size_t>(j)] = i;
        d[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(i)] * m(i, j) / m(j, i);
        queue.push(j);
      }
    }
  }

  // Every non-tree support edge must be consistent with the forest ratios.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!supported(i, j)) continue;
      if (parent[static_cast<std::size_t>(j)] == i || parent[static_cast<std::size_t>(i)] == j)
        continue;
      const double q = (d[static_cast<std::size_t>(i)] * m(i, j)) /
                       (d[static_cast<std::size_t>(j)] * m(j, i));
      if (std::abs(q - 1.0) > kCycleTol) {
        SymmetrizationObstruction obs;
        obs.kind = SymmetrizationObstruction::Kind::cycle_inconsistency;
        obs.witness = build_cycle(i, j, parent);
        obs.ratio_product = replay_cycle_product(m, obs.witness);
        return obs;
      }
    }
  }

  // Normalize min d = 1 per component.
  std::vector<double> comp_min(static_cast<std::size_t>(n_components),
                               std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    comp_min[static_cast<std::size_t>(component[static_cast<std::size_t>(i)])] =
        std::min(comp_min[static_cast<std::size_t>(component[static_cast<std::size_t>(i)])],
                 d[static_cast<std::size_t>(i)]);
  for (int i = 0; i < n; ++i)
    d[static_cast<std::size_t>(i)] /= comp_min[static_cast<std::size_t>(component[static_cast<std::size_t>(i)])];

  for (double di : d)
    if (!std::isfinite(di) || !(di > 0.0))
      throw numerical_error("ratio propagation over/underflowed; entry magnitudes span "
                            "too many orders for a finite diagonal");

  SymmetrizationCertificate cert;
  cert.d = std::move(d);
  cert.residual = symmetrization_residual(m, cert.d);
  return cert;
}

bool is_certificate(const SymmetrizeResult& r) {
  return std::holds_alternative<SymmetrizationCertificate>(r);
}

NextGenMatrix symmetric_form(const NextGenMatrix& m, const SymmetrizationCertificate& cert) {
  const int n = m.size();
  if (static_cast<int>(cert.d.size()) != n)
    throw input_error("certificate dimension does not match matrix");
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s[static_cast<std::size_t>(i) * n + j] =
          std::sqrt(cert.d[static_cast<std::size_t>(i)] / cert.d[static_cast<std::size_t>(j)]) * m(i, j);
  return NextGenMatrix(n, std::move(s), m.weights());
}

double symmetrization_residual(const NextGenMatrix& m, const std::vector<double>& d) {
  const int n = m.size();
  if (static_cast<int>(d.size()) != n) throw input_error("diagonal dimension mismatch");
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      r = std::max(r, std::abs(d[static_cast<std::size_t>(i)] * m(i, j) -
                               d[static_cast<std::size_t>(j)] * m(j, i)));
  return r;
}

double replay_cycle_product(const NextGenMatrix& m, const std::vector<int>& cycle) {
  const int k = static_cast<int>(cycle.size());
  if (k < 2) throw input_error("cycle witness must have at least two vertices");
  double prod = 1.0;
  for (int t = 0; t < k; ++t) {
    const int a = cycle[static_cast<std::size_t>(t)];
    const int b = cycle[static_cast<std::size_t>((t + 1) % k)];
    if (a < 0 || a >= m.size() || b < 0 || b >= m.size())
      throw input_error("cycle witness index out of range");
    if (m(b, a) == 0.0) throw input_error("cycle witness uses a missing edge");
    prod *= m(a, b) / m(b, a);
  }
  return prod;
}

}  // namespace rekit
