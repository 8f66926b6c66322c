#pragma once

#include <functional>
#include <string>

#include "rekit/matrix.hpp"
#include "rekit/symmetrize.hpp"

namespace rekit {

/// Nonnegative kernel k(x, y) on [0,1]^2 defining an integral operator
/// against the grid measure.
struct KernelSpec {
  std::function<double(double, double)> evaluate;
  std::string description;
};

/// Quadrature nodes and positive weights on [0,1], normalized to a
/// probability measure.
struct QuadratureGrid {
  enum class Rule { midpoint, trapezoid };
  std::vector<double> nodes;
  std::vector<double> weights;
  Rule rule = Rule::midpoint;

  static QuadratureGrid midpoint(int m);
  static QuadratureGrid trapezoid(int m);
  int size() const { return static_cast<int>(nodes.size()); }
};

/// SIS-on-graphon kernel k(x,y) = beta(x) W(x,y) theta(y) / gamma(y).
struct GraphonSISParams {
  std::function<double(double)> beta;
  std::function<double(double, double)> W;  // symmetric, [0,1]-valued
  std::function<double(double)> theta;
  std::function<double(double)> gamma;  // bounded away from 0 on the grid

  KernelSpec kernel() const;
};

/// Rank-one (proportionate mixing) kernel k = f (x) g.
struct ConfigurationKernel {
  std::function<double(double)> f;
  std::function<double(double)> g;

  KernelSpec kernel() const;
};

/// Nystrom discretization: K_ij = k(x_i, x_j) w_j, matrix weights = grid
/// weights, so that K eta approximates the integral of k(x, .) eta d(mu).
NextGenMatrix discretize(const KernelSpec& k, const QuadratureGrid& grid);

/// Quadrature approximation of the mixed norm
/// ( int ( int k(x,y)^q dmu(y) )^{p/q} dmu(x) )^{1/p} with q = p/(p-1).
double double_norm(const KernelSpec& k, double p, const QuadratureGrid& grid);

/// Closed form for rank-one kernels: sum_i f(x_i) g(x_i) eta_i w_i.
double configuration_re(const ConfigurationKernel& ck, const QuadratureGrid& grid,
                        const Strategy& eta);

/// Kernel factorized as k(x,y) = f(x) s(x,y) g(y) with s symmetric and f, g
/// positive on the nodes; symmetrizable with diagonal proportional to
/// (g/f) * w per component (the discrete measure (g/f) dmu).
struct FactorizedKernel {
  std::function<double(double)> f;
  std::function<double(double, double)> s;
  std::function<double(double)> g;
};

/// Discretizes, certifies, and checks the certificate against the predicted
/// diagonal; an obstruction means s was not symmetric after all.
SymmetrizationCertificate kernel_symmetrizability_check(const FactorizedKernel& k,
                                                        const QuadratureGrid& grid,
                                                        double tol = 1e-8);

}  // namespace rekit
