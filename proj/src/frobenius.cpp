#include "rekit/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace rekit {

namespace {

// Iterative Tarjan SCC over the support digraph (edge j -> i iff K_ij > thr:
// group j infects group i).
std::vector<std::vector<int>> strongly_connected_components(const NextGenMatrix& m, double thr) {
  const int n = m.size();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m(i, j) > thr) adj[static_cast<std::size_t>(j)].push_back(i);

  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int start = 0; start < n; ++start) {
    if (index[static_cast<std::size_t>(start)] >= 0) continue;
    std::vector<Frame> call_stack{{start, 0}};
    index[static_cast<std::size_t>(start)] = low[static_cast<std::size_t>(start)] = next_index++;
    stack.push_back(start);
    on_stack[static_cast<std::size_t>(start)] = 1;
    while (!call_stack.empty()) {
      Frame& f = call_stack.back();
      const auto& out = adj[static_cast<std::size_t>(f.v)];
      if (f.child < out.size()) {
        const int w = out[f.child++];
        if (index[static_cast<std::size_t>(w)] < 0) {
          index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          call_stack.push_back({w, 0});
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
        }
      } else {
        if (low[static_cast<std::size_t>(f.v)] == index[static_cast<std::size_t>(f.v)]) {
          std::vector<int> comp;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            comp.push_back(w);
          } while (w != f.v);
          std::sort(comp.begin(), comp.end());
          sccs.push_back(std::move(comp));
        }
        const int v = f.v;
        call_stack.pop_back();
        if (!call_stack.empty())
          low[static_cast<std::size_t>(call_stack.back().v)] =
              std::min(low[static_cast<std::size_t>(call_stack.back().v)],
                       low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return sccs;
}

// Kahn topological order of the condensation, smallest original index first
// among the ready components, so the numbering is canonical.
std::vector<std::vector<int>> topo_order_components(const NextGenMatrix& m, double thr,
                                                    std::vector<std::vector<int>> comps) {
  const int n = m.size();
  const int c = static_cast<int>(comps.size());
  std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < c; ++k)
    for (int v : comps[static_cast<std::size_t>(k)]) comp_of[static_cast<std::size_t>(v)] = k;

  std::vector<std::set<int>> out_edges(static_cast<std::size_t>(c));
  std::vector<int> indegree(static_cast<std::size_t>(c), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) <= thr) continue;
      const int cj = comp_of[static_cast<std::size_t>(j)], ci = comp_of[static_cast<std::size_t>(i)];
      if (cj != ci && out_edges[static_cast<std::size_t>(cj)].insert(ci).second)
        ++indegree[static_cast<std::size_t>(ci)];
    }
  }

  auto cmp = [&](int a, int b) {
    return comps[static_cast<std::size_t>(a)].front() > comps[static_cast<std::size_t>(b)].front();
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
  for (int k = 0; k < c; ++k)
    if (indegree[static_cast<std::size_t>(k)] == 0) ready.push(k);

  std::vector<std::vector<int>> ordered;
  ordered.reserve(static_cast<std::size_t>(c));
  while (!ready.empty()) {
    const int k = ready.top();
    ready.pop();
    ordered.push_back(std::move(comps[static_cast<std::size_t>(k)]));
    for (int to : out_edges[static_cast<std::size_t>(k)])
      if (--indegree[static_cast<std::size_t>(to)] == 0) ready.push(to);
  }
  return ordered;
}

}  // namespace

AtomDecomposition atomic_decomposition(const NextGenMatrix& m, double support_tol) {
  if (!(support_tol > 0.0)) throw input_error("support tolerance must be positive");
  const double thr = support_tol * m.max_entry();

  AtomDecomposition out;
  out.components = topo_order_components(m, thr, strongly_connected_components(m, thr));

  for (std::size_t k = 0; k < out.components.size(); ++k) {
    const auto& comp = out.components[k];
    const bool nonzero =
        comp.size() >= 2 || m(comp.front(), comp.front()) > thr;
    if (nonzero) {
      out.nonzero_atoms.push_back(static_cast<int>(k));
      out.block_radii.push_back(spectral_radius(m.submatrix(comp)));
    } else {
      out.residual.insert(out.residual.end(), comp.begin(), comp.end());
    }
  }
  std::sort(out.residual.begin(), out.residual.end());
  return out;
}

NextGenMatrix atom_restriction(const NextGenMatrix& m, const std::vector<int>& atom) {
  const int n = m.size();
  std::vector<char> in_atom(static_cast<std::size_t>(n), 0);
  for (int v : atom) {
    if (v < 0 || v >= n) throw input_error("atom index out of range");
    in_atom[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    if (in_atom[static_cast<std::size_t>(i)])
      for (int j = 0; j < n; ++j)
        if (in_atom[static_cast<std::size_t>(j)])
          e[static_cast<std::size_t>(i) * n + j] = m(i, j);
  return NextGenMatrix(n, std::move(e), m.weights());
}

NextGenMatrix atom_sum(const NextGenMatrix& m, const AtomDecomposition& decomp) {
  const int n = m.size();
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int a : decomp.nonzero_atoms) {
    const auto& comp = decomp.components[static_cast<std::size_t>(a)];
    for (int i : comp)
      for (int j : comp) e[static_cast<std::size_t>(i) * n + j] = m(i, j);
  }
  return NextGenMatrix(n, std::move(e), m.weights());
}

AtomReValue re_via_atoms(const NextGenMatrix& m, const Strategy& eta) {
  if (eta.size() != m.size()) throw input_error("strategy dimension mismatch");
  const auto decomp = atomic_decomposition(m);

  AtomReValue out;  // max over the empty set = 0, no argmax
  for (std::size_t pos = 0; pos < decomp.nonzero_atoms.size(); ++pos) {
    const auto& comp = decomp.components[static_cast<std::size_t>(decomp.nonzero_atoms[pos])];
    std::vector<double> eta_sub;
    eta_sub.reserve(comp.size());
    for (int v : comp) eta_sub.push_back(eta[v]);
    const double val =
        spectral_radius(scale_columns(m.submatrix(comp), Strategy(std::move(eta_sub))));
    if (val > out.value) {
      out.value = val;
      out.argmax_atom = static_cast<int>(pos);
    }
  }
  return out;
}

MultiplicityCheckReport multiplicity_sum_check(const NextGenMatrix& m, const Strategy& eta) {
  if (eta.size() != m.size()) throw input_error("strategy dimension mismatch");
  const auto decomp = atomic_decomposition(m);
  const Spectrum full = spectrum(scale_columns(m, eta));

  std::vector<Spectrum> block_spectra;
  double match_tol = full.cluster_radius;
  for (int a : decomp.nonzero_atoms) {
    const auto& comp = decomp.components[static_cast<std::size_t>(a)];
    std::vector<double> eta_sub;
    eta_sub.reserve(comp.size());
    for (int v : comp) eta_sub.push_back(eta[v]);
    block_spectra.push_back(spectrum(scale_columns(m.submatrix(comp), Strategy(std::move(eta_sub)))));
    match_tol = std::max(match_tol, block_spectra.back().cluster_radius);
  }
  match_tol *= 2.0;

  const double zero_floor = std::max(full.cluster_radius, 1e-9 * (1.0 + full.radius()));

  MultiplicityCheckReport report;
  for (const auto& entry : full.eigenvalues) {
    if (std::abs(entry.value) <= zero_floor) continue;
    int sum = 0;
    for (const auto& bs : block_spectra) sum += bs.multiplicity_at(entry.value, match_tol);
    if (sum != entry.multiplicity)
      report.mismatches.push_back({entry.value, entry.multiplicity, sum});
  }
  return report;
}

MonatomicEvidence is_monatomic(const NextGenMatrix& m) {
  const auto decomp = atomic_decomposition(m);
  MonatomicEvidence out;
  out.nonzero_atom_count = static_cast<int>(decomp.nonzero_atoms.size());
  out.monatomic = (out.nonzero_atom_count == 1);
  if (!out.monatomic) return out;

  const auto& atom = decomp.components[static_cast<std::size_t>(decomp.nonzero_atoms.front())];
  out.atom = atom;

  const Spectrum s = spectrum(m);
  out.r0_multiplicity = s.multiplicity_at(std::complex<double>(s.radius(), 0.0),
                                          2.0 * s.cluster_radius);

  // Indices the atom can infect (the atom itself included): follow support
  // edges j -> i from the atom.
  const int n = m.size();
  const double thr = 1e-12 * m.max_entry();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> queue;
  for (int v : atom) {
    seen[static_cast<std::size_t>(v)] = 1;
    queue.push(v);
  }
  while (!queue.empty()) {
    const int j = queue.front();
    queue.pop();
    for (int i = 0; i < n; ++i) {
      if (!seen[static_cast<std::size_t>(i)] && m(i, j) > thr) {
        seen[static_cast<std::size_t>(i)] = 1;
        queue.push(i);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (seen[static_cast<std::size_t>(i)]) out.reachable_from_atom.push_back(i);
  return out;
}

std::optional<ConcavityViolationWitness> concavity_implies_monatomic_witness(
    const NextGenMatrix& m) {
  const auto decomp = atomic_decomposition(m);
  if (decomp.nonzero_atoms.size() < 2)
    throw input_error(
        "witness construction requires at least two non-zero atoms (monatomic or "
        "quasi-nilpotent input)");

  int a = 0, b = 1;
  if (decomp.block_radii[static_cast<std::size_t>(a)] > decomp.block_radii[static_cast<std::size_t>(b)])
    std::swap(a, b);
  const double ra = decomp.block_radii[static_cast<std::size_t>(a)];
  const double rb = decomp.block_radii[static_cast<std::size_t>(b)];

  const int n = m.size();
  const Strategy eta1 =
      Strategy::indicator(n, decomp.components[static_cast<std::size_t>(decomp.nonzero_atoms[static_cast<std::size_t>(a)])]);
  const Strategy eta2 =
      Strategy::indicator(n, decomp.components[static_cast<std::size_t>(decomp.nonzero_atoms[static_cast<std::size_t>(b)])])
          .scaled(ra / rb);

  std::vector<double> mid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mid[static_cast<std::size_t>(i)] = 0.5 * eta1[i] + 0.5 * eta2[i];

  ConcavityViolationWitness w{eta1, eta2, 0.0, 0.0, 0.0};
  w.midpoint_value = spectral_radius(scale_columns(m, Strategy(std::move(mid))));
  w.chord_value = 0.5 * (spectral_radius(scale_columns(m, eta1)) +
                         spectral_radius(scale_columns(m, eta2)));
  w.gap = w.chord_value - w.midpoint_value;

  const double margin = 1e-9 * (1.0 + spectral_radius(m));
  if (w.gap <= margin) return std::nullopt;
  return w;
}

}  // namespace rekit
