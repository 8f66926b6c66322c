#include "rekit/kernels.hpp"

#include <cmath>
#include <string>

namespace rekit {

QuadratureGrid QuadratureGrid::midpoint(int m) {
  if (m < 1) throw input_error("midpoint grid needs at least one node");
  QuadratureGrid g;
  g.rule = Rule::midpoint;
  g.nodes.resize(static_cast<std::size_t>(m));
  g.weights.assign(static_cast<std::size_t>(m), 1.0 / m);
  for (int i = 0; i < m; ++i) g.nodes[static_cast<std::size_t>(i)] = (i + 0.5) / m;
  return g;
}

QuadratureGrid QuadratureGrid::trapezoid(int m) {
  if (m < 2) throw input_error("trapezoid grid needs at least two nodes");
  QuadratureGrid g;
  g.rule = Rule::trapezoid;
  g.nodes.resize(static_cast<std::size_t>(m));
  g.weights.resize(static_cast<std::size_t>(m));
  const double h = 1.0 / (m - 1);
  for (int i = 0; i < m; ++i) {
    g.nodes[static_cast<std::size_t>(i)] = i * h;
    g.weights[static_cast<std::size_t>(i)] = (i == 0 || i == m - 1) ? h / 2.0 : h;
  }
  return g;
}

KernelSpec GraphonSISParams::kernel() const {
  auto b = beta;
  auto w = W;
  auto th = theta;
  auto ga = gamma;
  return {[b, w, th, ga](double x, double y) {
            const double wxy = w(x, y), wyx = w(y, x);
            if (std::abs(wxy - wyx) > 1e-12 * (1.0 + std::abs(wxy)))
              throw input_error("graphon W is not symmetric at (" + std::to_string(x) + ", " +
                                std::to_string(y) + ")");
            return b(x) * wxy * th(y) / ga(y);
          },
          "graphon-sis"};
}

KernelSpec ConfigurationKernel::kernel() const {
  auto ff = f, gg = g;
  return {[ff, gg](double x, double y) { return ff(x) * gg(y); }, "configuration"};
}

NextGenMatrix discretize(const KernelSpec& k, const QuadratureGrid& grid) {
  if (!k.evaluate) throw input_error("kernel has no evaluate function");
  const int m = grid.size();
  std::vector<double> entries(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x = grid.nodes[static_cast<std::size_t>(i)], y = grid.nodes[static_cast<std::size_t>(j)];
      const double v = k.evaluate(x, y);
      if (!std::isfinite(v) || v < 0.0)
        throw input_error("kernel evaluation invalid at (" + std::to_string(x) + ", " +
                          std::to_string(y) + "): " + std::to_string(v));
      entries[static_cast<std::size_t>(i) * m + j] = v * grid.weights[static_cast<std::size_t>(j)];
    }
  }
  return NextGenMatrix(m, std::move(entries), grid.weights);
}

double double_norm(const KernelSpec& k, double p, const QuadratureGrid& grid) {
  if (!(p > 1.0)) throw input_error("double norm requires p > 1");
  const double q = p / (p - 1.0);
  const int m = grid.size();
  double outer = 0.0;
  for (int i = 0; i < m; ++i) {
    double inner = 0.0;
    for (int j = 0; j < m; ++j) {
      const double v = k.evaluate(grid.nodes[static_cast<std::size_t>(i)], grid.nodes[static_cast<std::size_t>(j)]);
      if (!std::isfinite(v) || v < 0.0) throw input_error("kernel evaluation invalid in double norm");
      inner += std::pow(v, q) * grid.weights[static_cast<std::size_t>(j)];
    }
    outer += std::pow(inner, p / q) * grid.weights[static_cast<std::size_t>(i)];
  }
  return std::pow(outer, 1.0 / p);
}

double configuration_re(const ConfigurationKernel& ck, const QuadratureGrid& grid,
                        const Strategy& eta) {
  const int m = grid.size();
  if (eta.size() != m) throw input_error("strategy dimension does not match grid");
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = grid.nodes[static_cast<std::size_t>(i)];
    const double fx = ck.f(x), gx = ck.g(x);
    if (!std::isfinite(fx) || fx < 0.0 || !std::isfinite(gx) || gx < 0.0)
      throw input_error("configuration profiles must be finite and nonnegative");
    acc += fx * gx * eta[i] * grid.weights[static_cast<std::size_t>(i)];
  }
  return acc;
}

SymmetrizationCertificate kernel_symmetrizability_check(const FactorizedKernel& k,
                                                        const QuadratureGrid& grid,
                                                        double tol) {
  const int m = grid.size();
  std::vector<double> f_at(static_cast<std::size_t>(m)), g_at(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double x = grid.nodes[static_cast<std::size_t>(i)];
    f_at[static_cast<std::size_t>(i)] = k.f(x);
    g_at[static_cast<std::size_t>(i)] = k.g(x);
    if (!(f_at[static_cast<std::size_t>(i)] > 0.0) || !(g_at[static_cast<std::size_t>(i)] > 0.0))
      throw input_error("factor profiles must be positive on the grid nodes");
  }
  auto ff = k.f;
  auto ss = k.s;
  auto gg = k.g;
  const KernelSpec spec{[ff, ss, gg](double x, double y) { return ff(x) * ss(x, y) * gg(y); },
                        "factorized"};
  const NextGenMatrix K = discretize(spec, grid);

  auto result = symmetrize(K);
  if (!is_certificate(result))
    throw numerical_error(
        "kernel declared factorized with symmetric core failed symmetrization; "
        "the symmetric factor is not actually symmetric");
  auto cert = std::get<SymmetrizationCertificate>(result);

  // The certificate must be proportional, per support component, to the
  // discrete measure (g/f) dmu, i.e. to (g_i/f_i) w_i.
  const double thr = 1e-12 * K.max_entry();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j || !(K(i, j) > thr)) continue;
      const double pred_i = g_at[static_cast<std::size_t>(i)] / f_at[static_cast<std::size_t>(i)] *
                            grid.weights[static_cast<std::size_t>(i)];
      const double pred_j = g_at[static_cast<std::size_t>(j)] / f_at[static_cast<std::size_t>(j)] *
                            grid.weights[static_cast<std::size_t>(j)];
      const double ratio = (cert.d[static_cast<std::size_t>(i)] / cert.d[static_cast<std::size_t>(j)]) /
                           (pred_i / pred_j);
      if (std::abs(ratio - 1.0) > tol)
        throw numerical_error("certificate diagonal deviates from (g/f) weights by " +
                              std::to_string(std::abs(ratio - 1.0)));
    }
  }
  return cert;
}

}  // namespace rekit
