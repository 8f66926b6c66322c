#include "rekit/shape.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "rekit/parallel.hpp"
#include "rekit/rng.hpp"

namespace rekit {

namespace {

double effective_value(const NextGenMatrix& m, const Strategy& eta) {
  return spectral_radius(scale_columns(m, eta));
}

// Strategy families for the violation search. R_e is 1-homogeneous, so its
// shape is determined on the plane sum(eta) = 1/3; saddles concentrate
// there, and that family is sampled alongside the box and sparse ones.
std::vector<double> draw_strategy(TrialRng& rng, int n) {
  std::vector<double> eta(static_cast<std::size_t>(n));
  switch (rng.next_below(3)) {
    case 0:  // uniform box
      for (auto& x : eta) x = rng.next_double();
      break;
    case 1:  // coordinate-sparse
      for (auto& x : eta) x = (rng.next_double() < 0.5) ? 0.0 : rng.next_double();
      break;
    default: {  // simplex plane: entries >= 0 summing to 1/3
      double total = 0.0;
      for (auto& x : eta) {
        x = -std::log(1.0 - rng.next_double() + 1e-300);
        total += x;
      }
      for (auto& x : eta) x = x / total / 3.0;
      break;
    }
  }
  return eta;
}

std::uint64_t mode_stream(ViolationMode mode, std::uint64_t seed) {
  return mode == ViolationMode::convexity ? seed : seed ^ 0x517cc1b727220a95ull;
}

}  // namespace

std::optional<ShapeViolation> find_shape_violation(const NextGenMatrix& m, ViolationMode mode,
                                                   int samples, std::uint64_t seed) {
  if (samples < 1) throw input_error("sample count must be positive");
  const int n = m.size();
  const double r0 = spectral_radius(m);
  const double margin = 1e-7 * (1.0 + r0);

  std::optional<ShapeViolation> best;
  std::mutex mu;

  detail::for_each_trial(static_cast<std::uint64_t>(samples), [&](std::uint64_t t) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (best && best->sample_index < t) return;  // an earlier witness already won
    }
    TrialRng rng(mode_stream(mode, seed), t);
    const Strategy eta0(draw_strategy(rng, n));
    const Strategy eta1(draw_strategy(rng, n));
    const double theta_rand = rng.next_double();

    const double v0 = effective_value(m, eta0);
    const double v1 = effective_value(m, eta1);

    for (const double theta : {0.5, theta_rand}) {
      if (theta <= 0.0 || theta >= 1.0) continue;
      std::vector<double> mix(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) mix[static_cast<std::size_t>(i)] = theta * eta0[i] + (1.0 - theta) * eta1[i];
      const double vm = effective_value(m, Strategy(std::move(mix)));
      const double chord = theta * v0 + (1.0 - theta) * v1;
      const bool violated = (mode == ViolationMode::convexity) ? (vm > chord + margin)
                                                               : (vm < chord - margin);
      if (violated) {
        ShapeViolation w{mode, eta0, eta1, theta, vm - chord, t};
        std::lock_guard<std::mutex> lock(mu);
        if (!best || t < best->sample_index) best = std::move(w);
        return;
      }
    }
  });
  return best;
}

ShapeVerdict classify_shape(const NextGenMatrix& m, int samples, std::uint64_t seed) {
  ShapeVerdict verdict;

  auto sym = symmetrize(m);
  if (is_certificate(sym)) {
    verdict.certificate = std::get<SymmetrizationCertificate>(sym);
    const Inertia in = inertia(spectrum(m));
    verdict.spectrum_inertia = in;
    const bool convex = (in.negative_count == 0);
    const bool concave = (in.positive_count == 1);
    if (convex && concave) {
      verdict.classification = ShapeClass::linear_certified;
      return verdict;
    }
    if (convex) {
      verdict.classification = ShapeClass::convex_certified;
      return verdict;
    }
    if (concave) {
      verdict.classification = ShapeClass::concave_certified;
      return verdict;
    }
    // Symmetrizable but neither sufficient condition applies; fall through
    // to sampling.
  }

  for (auto mode : {ViolationMode::convexity, ViolationMode::concavity})
    if (auto v = find_shape_violation(m, mode, samples, seed)) verdict.violations.push_back(*v);

  verdict.classification =
      verdict.violations.empty() ? ShapeClass::inconclusive : ShapeClass::violation_found;
  return verdict;
}

SecondDerivativeReport second_derivative(const NextGenMatrix& m,
                                         const SymmetrizationCertificate& cert,
                                         const Strategy& eta0, const Strategy& eta1, double alpha,
                                         double fd_step, double eta_floor) {
  const int n = m.size();
  if (static_cast<int>(cert.d.size()) != n)
    throw input_error("certificate dimension does not match matrix");
  if (symmetrization_residual(m, cert.d) > 1e-6 * (1.0 + m.max_entry()))
    throw input_error("certificate does not certify this matrix");
  if (eta0.size() != n || eta1.size() != n) throw input_error("strategy dimension mismatch");
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
  if (!(fd_step > 0.0)) throw input_error("finite-difference step must be positive");
  for (int i = 0; i < n; ++i)
    if (eta0[i] < eta_floor || eta1[i] < eta_floor)
      throw input_error("strategies must be bounded away from 0 (floor " +
                        std::to_string(eta_floor) + "): the formula holds on the interior set");

  const Inertia in = inertia(spectrum(m));
  if (in.positive_count != 1)
    throw input_error("second-derivative formula requires p = 1 (found p = " +
                      std::to_string(in.positive_count) + ")");

  auto eta_at = [&](double a) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (1.0 - a) * eta0[i] + a * eta1[i];
    return Strategy(std::move(v));
  };

  const Strategy eta_alpha = eta_at(alpha);

  // T_alpha = K Diag(eta_alpha) is self-adjoint for <u,v> = sum nu_i u_i v_i
  // with nu = d * eta_alpha (the certificate diagonal is the measure).
  // Conjugating by Diag(nu)^(1/2) turns it into a plain symmetric matrix.
  std::vector<double> nu(static_cast<std::size_t>(n)), sqrt_nu(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nu[static_cast<std::size_t>(i)] = cert.d[static_cast<std::size_t>(i)] * eta_alpha[i];
    sqrt_nu[static_cast<std::size_t>(i)] = std::sqrt(nu[static_cast<std::size_t>(i)]);
  }
  std::vector<double> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s[static_cast<std::size_t>(i) * n + j] = sqrt_nu[static_cast<std::size_t>(i)] * m(i, j) *
                                               eta_alpha[j] / sqrt_nu[static_cast<std::size_t>(j)];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (s[static_cast<std::size_t>(i) * n + j] + s[static_cast<std::size_t>(j) * n + i]);
      s[static_cast<std::size_t>(i) * n + j] = s[static_cast<std::size_t>(j) * n + i] = avg;
    }

  const auto eig = detail::symmetric_eigen(s, n);
  const double r_alpha = eig.values.front();
  if (!(r_alpha > 0.0)) throw numerical_error("leading eigenvalue is not positive");
  if (n > 1 && r_alpha - eig.values[1] < 1e-8 * (1.0 + r_alpha))
    throw numerical_error("near-degenerate leading eigenvalue: gap " +
                          std::to_string(r_alpha - eig.values[1]) + " is below tolerance");

  // v_alpha in the nu inner product maps back as u = Diag(nu)^(-1/2) y, and
  // a_n = <N v, u_n>_nu = (Diag(nu)^(1/2) N v)^T y_n for orthonormal y_n.
  std::vector<double> ratio(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    ratio[static_cast<std::size_t>(i)] = (eta1[i] - eta0[i]) / eta_alpha[i];
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v_i = eig.vectors[static_cast<std::size_t>(i) * n + 0] / sqrt_nu[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(i)] = sqrt_nu[static_cast<std::size_t>(i)] * ratio[static_cast<std::size_t>(i)] * v_i;
  }

  SecondDerivativeReport report;
  report.alpha = alpha;
  report.r_alpha = r_alpha;

  const double zero_tol = 1e-9 * (1.0 + r_alpha);
  double sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const double lambda = eig.values[static_cast<std::size_t>(k)];
    if (std::abs(lambda) <= zero_tol) continue;  // only the non-zero eigenvalues enter
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += w[static_cast<std::size_t>(i)] * eig.vectors[static_cast<std::size_t>(i) * n + k];
    const double coeff = a * a;  // a_n^2 <u_n,u_n>, with orthonormal u_n
    report.terms.emplace_back(lambda, coeff);
    sum += lambda / (r_alpha - lambda) * coeff;
  }
  report.r_second = 2.0 * r_alpha * sum;

  // Independent cross-check: central differences through the QR path,
  // Richardson-refined with steps h and h/2.
  double h = std::min({fd_step, alpha / 2.0, (1.0 - alpha) / 2.0});
  report.fd_step = h;
  auto r_of = [&](double a) { return effective_value(m, eta_at(a)); };
  const double rc = r_of(alpha);
  auto second_diff = [&](double step) {
    return (r_of(alpha + step) - 2.0 * rc + r_of(alpha - step)) / (step * step);
  };
  const double d1 = second_diff(h), d2 = second_diff(h / 2.0);
  report.fd_estimate = (4.0 * d2 - d1) / 3.0;
  return report;
}

std::vector<PlaneSample> sample_simplex_plane(const NextGenMatrix& m, int grid) {
  if (m.size() != 3) throw input_error("the simplex-plane demo is defined for 3x3 matrices");
  if (grid < 2) throw input_error("grid must have at least 2 points per axis");
  std::vector<PlaneSample> samples;
  samples.reserve(static_cast<std::size_t>(grid) * grid / 2);
  const double third = 1.0 / 3.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double e1 = third * i / (grid - 1);
      const double e2 = third * j / (grid - 1);
      const double e3 = third - e1 - e2;
      if (e3 < -1e-12) continue;
      const Strategy eta({e1, e2, std::max(e3, 0.0)});
      samples.push_back({e1, e2, effective_value(m, eta)});
    }
  }
  return samples;
}

}  // namespace rekit
