#include "rekit/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "rekit/frobenius.hpp"
#include "rekit/rng.hpp"

namespace rekit {

namespace {

double effective_value(const NextGenMatrix& m, const Strategy& eta) {
  return spectral_radius(scale_columns(m, eta));
}

}  // namespace

BudgetProblem::BudgetProblem(NextGenMatrix matrix_in, double budget_in,
                             std::optional<std::vector<double>> cost_in)
    : matrix(std::move(matrix_in)),
      cost_weights(cost_in ? std::move(*cost_in) : matrix.weights()),
      budget(budget_in) {
  if (static_cast<int>(cost_weights.size()) != matrix.size())
    throw input_error("cost weights dimension does not match matrix");
  for (double c : cost_weights)
    if (!(c > 0.0) || !std::isfinite(c)) throw input_error("cost weights must be positive");
  if (!(budget >= 0.0) || budget > total_cost() * (1.0 + 1e-12))
    throw input_error("budget must lie in [0, total cost]");
  budget = std::min(budget, total_cost());
}

double BudgetProblem::total_cost() const {
  double t = 0.0;
  for (double c : cost_weights) t += c;
  return t;
}

double BudgetProblem::cost(const Strategy& eta) const {
  double t = 0.0;
  for (int i = 0; i < static_cast<int>(cost_weights.size()); ++i)
    t += cost_weights[static_cast<std::size_t>(i)] * (1.0 - eta[i]);
  return t;
}

bool BudgetProblem::feasible(const Strategy& eta, double slack) const {
  return eta.size() == matrix.size() && cost(eta) <= budget + slack;
}

std::vector<double> re_gradient(const NextGenMatrix& m, const Strategy& eta) {
  if (eta.size() != m.size()) throw input_error("strategy dimension mismatch");
  const int n = m.size();
  const NextGenMatrix a = scale_columns(m, eta);
  const Spectrum s = spectrum(a);
  const double rho = s.radius();
  if (!(rho > 1e-12 * (1.0 + m.max_entry())))
    throw numerical_error("gradient undefined: effective value is zero");
  if (s.multiplicity_at(std::complex<double>(rho, 0.0), 2.0 * s.cluster_radius) != 1)
    throw numerical_error("gradient undefined: leading eigenvalue is not simple");

  const PerronPair pp = perron_pair(a);
  double denom = 0.0;
  for (int i = 0; i < n; ++i)
    denom += pp.left[static_cast<std::size_t>(i)] * pp.right[static_cast<std::size_t>(i)];
  if (!(denom > 1e-14))
    throw numerical_error("gradient undefined: left/right Perron vectors nearly orthogonal");

  // d rho / d eta_j = phi^T (K E_jj) v / (phi^T v) = (K^T phi)_j v_j / (phi^T v).
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double kt_phi = 0.0;
    for (int i = 0; i < n; ++i) kt_phi += m(i, j) * pp.left[static_cast<std::size_t>(i)];
    g[static_cast<std::size_t>(j)] = kt_phi * pp.right[static_cast<std::size_t>(j)] / denom;
  }
  return g;
}

namespace {

// Euclidean projection onto the box [0,1]^n intersected with the feasibility
// halfspace sum c_i eta_i >= t: eta = clip(y + lambda c) with the smallest
// lambda >= 0 making the constraint hold.
std::vector<double> project_feasible(const std::vector<double>& y, const std::vector<double>& c,
                                     double t) {
  const int n = static_cast<int>(y.size());
  auto clipped = [&](double lambda) {
    std::vector<double> eta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      eta[static_cast<std::size_t>(i)] =
          std::clamp(y[static_cast<std::size_t>(i)] + lambda * c[static_cast<std::size_t>(i)], 0.0, 1.0);
    return eta;
  };
  auto constraint = [&](const std::vector<double>& eta) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)];
    return s;
  };

  auto eta0 = clipped(0.0);
  if (constraint(eta0) >= t - 1e-14) return eta0;

  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < n; ++i)
    hi = std::max(hi, (1.0 - y[static_cast<std::size_t>(i)]) / c[static_cast<std::size_t>(i)]);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (constraint(clipped(mid)) >= t)
      hi = mid;
    else
      lo = mid;
  }
  return clipped(hi);
}

struct DescentOutcome {
  std::vector<double> eta;
  double value;
  int iterations;
  bool converged;
  bool used_subgradient;
};

// Projected gradient descent with step halving; monotone in the objective.
DescentOutcome projected_gradient(const BudgetProblem& p, std::vector<double> eta,
                                  int max_iter, std::uint64_t jitter_seed) {
  const int n = p.matrix.size();
  const double t = p.total_cost() - p.budget;
  eta = project_feasible(eta, p.cost_weights, t);

  double value = effective_value(p.matrix, Strategy(eta));
  bool used_subgradient = false;
  int it = 0;
  double step = 1.0 / (1.0 + value);
  for (; it < max_iter; ++it) {
    std::vector<double> grad;
    try {
      grad = re_gradient(p.matrix, Strategy(eta));
    } catch (const numerical_error&) {
      if (value <= 1e-13 * (1.0 + p.matrix.max_entry())) break;  // already at zero
      // Kink of the max-type function: subgradient from a tiny jitter.
      used_subgradient = true;
      TrialRng rng(jitter_seed, static_cast<std::uint64_t>(it));
      std::vector<double> jittered(eta);
      for (auto& x : jittered)
        x = std::clamp(x * (1.0 - 1e-10 * rng.next_double()) + 1e-10 * rng.next_double(), 0.0, 1.0);
      try {
        grad = re_gradient(p.matrix, Strategy(jittered));
      } catch (const numerical_error&) {
        break;
      }
    }

    // Stationarity: unit-step gradient-projection displacement.
    std::vector<double> probe(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      probe[static_cast<std::size_t>(i)] = eta[static_cast<std::size_t>(i)] - grad[static_cast<std::size_t>(i)];
    probe = project_feasible(probe, p.cost_weights, t);
    double gp_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = probe[static_cast<std::size_t>(i)] - eta[static_cast<std::size_t>(i)];
      gp_norm += d * d;
    }
    if (std::sqrt(gp_norm) <= 1e-7) return {eta, value, it, true, used_subgradient};

    bool accepted = false;
    double trial_step = step;
    for (int halving = 0; halving < 40; ++halving) {
      std::vector<double> cand(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        cand[static_cast<std::size_t>(i)] =
            eta[static_cast<std::size_t>(i)] - trial_step * grad[static_cast<std::size_t>(i)];
      cand = project_feasible(cand, p.cost_weights, t);
      const double cand_value = effective_value(p.matrix, Strategy(cand));
      if (cand_value < value - 1e-15) {
        eta = std::move(cand);
        value = cand_value;
        accepted = true;
        step = trial_step * 2.0;  // cautiously re-expand
        break;
      }
      trial_step /= 2.0;
    }
    if (!accepted) return {eta, value, it, true, used_subgradient};
  }
  return {eta, value, it, it < max_iter, used_subgradient};
}

}  // namespace

OptimizationResult minimize_re(const BudgetProblem& p, const ShapeVerdict& verdict,
                               int max_iter, std::uint64_t seed) {
  if (max_iter < 1) throw input_error("max_iter must be positive");
  const int n = p.matrix.size();
  const double total = p.total_cost();
  const double t = total - p.budget;

  auto finish = [&](Strategy eta, OptimMethod method, int iters, bool converged,
                    bool optimal, bool subgrad) {
    OptimizationResult r{std::move(eta), 0.0, method, iters, verdict.classification,
                         converged, optimal, subgrad};
    r.value = effective_value(p.matrix, r.eta_star);
    return r;
  };

  if (p.budget <= 1e-15 * std::max(total, 1.0))
    return finish(Strategy::ones(n), OptimMethod::vertex_search, 0, true, true, false);
  if (p.budget >= total * (1.0 - 1e-15))
    return finish(Strategy::zeros(n), OptimMethod::vertex_search, 0, true, true, false);

  const ShapeClass cls = verdict.classification;

  if (cls == ShapeClass::convex_certified) {
    auto out = projected_gradient(p, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                                  max_iter, seed);
    return finish(Strategy(out.eta), OptimMethod::gradient, out.iterations, out.converged,
                  false, out.used_subgradient);
  }

  if ((cls == ShapeClass::concave_certified || cls == ShapeClass::linear_certified) && n <= 20) {
    // The minimum of a concave (or linear) function over a polytope sits on a
    // vertex: all coordinates 0/1 except at most one fractional where the
    // budget is tight. Coordinates outside every non-zero atom cannot change
    // R_e, so they are pinned to 1 (cheapest for the constraint).
    const auto decomp = atomic_decomposition(p.matrix);
    std::vector<int> active;
    for (int a : decomp.nonzero_atoms)
      for (int v : decomp.components[static_cast<std::size_t>(a)]) active.push_back(v);
    std::sort(active.begin(), active.end());
    const int k = static_cast<int>(active.size());

    double pinned_cost = 0.0;  // contribution of the pinned coordinates to sum c eta
    for (int i = 0, a = 0; i < n; ++i) {
      if (a < k && active[static_cast<std::size_t>(a)] == i) {
        ++a;
        continue;
      }
      pinned_cost += p.cost_weights[static_cast<std::size_t>(i)];
    }

    std::vector<double> best;
    double best_value = std::numeric_limits<double>::infinity();
    int evals = 0;
    auto consider = [&](const std::vector<double>& eta) {
      ++evals;
      const double v = effective_value(p.matrix, Strategy(eta));
      if (v < best_value - 1e-15) {
        best_value = v;
        best = eta;
      }
    };

    std::vector<double> eta(static_cast<std::size_t>(n), 1.0);
    const double t_active = t - pinned_cost;
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
      double sigma = 0.0;
      for (int b = 0; b < k; ++b) {
        const int i = active[static_cast<std::size_t>(b)];
        const double on = (mask >> b) & 1ull ? 1.0 : 0.0;
        eta[static_cast<std::size_t>(i)] = on;
        sigma += on * p.cost_weights[static_cast<std::size_t>(i)];
      }
      if (sigma >= t_active - 1e-12) consider(eta);
      for (int b = 0; b < k; ++b) {
        if ((mask >> b) & 1ull) continue;
        const int i = active[static_cast<std::size_t>(b)];
        const double frac = (t_active - sigma) / p.cost_weights[static_cast<std::size_t>(i)];
        if (frac > 1e-12 && frac < 1.0 - 1e-12) {
          eta[static_cast<std::size_t>(i)] = frac;
          consider(eta);
          eta[static_cast<std::size_t>(i)] = 0.0;
        }
      }
    }
    if (best.empty()) best.assign(static_cast<std::size_t>(n), 1.0);
    return finish(Strategy(best), OptimMethod::vertex_search, evals, true, true, false);
  }

  // No usable certificate: multi-start projected gradient, best-of.
  const int starts = std::max(4, std::min(12, 2 * n));
  std::optional<DescentOutcome> best;
  int total_iters = 0;
  bool any_subgrad = false, all_converged = true;
  for (int s = 0; s < starts; ++s) {
    std::vector<double> start(static_cast<std::size_t>(n));
    if (s == 0) {
      start.assign(static_cast<std::size_t>(n), 1.0);
    } else {
      TrialRng rng(seed, static_cast<std::uint64_t>(s));
      for (auto& x : start) x = rng.next_double();
    }
    auto out = projected_gradient(p, std::move(start), max_iter, seed + 7777 * (s + 1));
    total_iters += out.iterations;
    any_subgrad = any_subgrad || out.used_subgradient;
    all_converged = all_converged && out.converged;
    if (!best || out.value < best->value - 1e-15) best = std::move(out);
  }
  return finish(Strategy(best->eta), OptimMethod::grid_fallback, total_iters, all_converged,
                false, any_subgrad);
}

}  // namespace rekit
