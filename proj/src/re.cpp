#include "rekit/re.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>

#include "rekit/parallel.hpp"
#include "rekit/rng.hpp"

namespace rekit {

ReReport re(const NextGenMatrix& m, const Strategy& eta) {
  ReReport out;
  out.effective_spectrum = spectrum(scale_columns(m, eta));
  out.value = out.effective_spectrum.radius();
  out.r0 = spectral_radius(m);
  return out;
}

PropertyReport check_elementary_properties(const NextGenMatrix& m, int trials,
                                           std::uint64_t seed, double tol) {
  if (trials < 1) throw input_error("trial count must be positive");
  const int n = m.size();

  PropertyReport report;
  report.trials = trials;
  std::mutex mu;

  detail::for_each_trial(static_cast<std::uint64_t>(trials), [&](std::uint64_t t) {
    TrialRng rng(seed, t);
    std::vector<double> upper(static_cast<std::size_t>(n)), lower(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      upper[static_cast<std::size_t>(i)] = rng.next_double();
      lower[static_cast<std::size_t>(i)] = upper[static_cast<std::size_t>(i)] * rng.next_double();
    }
    const double lambda = rng.next_double();
    const Strategy eta2(upper), eta1(lower);

    const double r2 = spectral_radius(scale_columns(m, eta2));
    const double r1 = spectral_radius(scale_columns(m, eta1));
    const double r_scaled = spectral_radius(scale_columns(m, eta2.scaled(lambda)));

    std::vector<PropertyViolation> local;
    if (r1 > r2 + tol) local.push_back({t, "monotonicity", r1, r2});
    if (std::abs(r_scaled - lambda * r2) > tol)
      local.push_back({t, "homogeneity", r_scaled, lambda * r2});
    if (!local.empty()) {
      std::lock_guard<std::mutex> lock(mu);
      report.violations.insert(report.violations.end(), local.begin(), local.end());
    }
  });

  std::sort(report.violations.begin(), report.violations.end(),
            [](const PropertyViolation& a, const PropertyViolation& b) {
              return std::tie(a.trial, a.property) < std::tie(b.trial, b.property);
            });
  return report;
}

namespace {

double spectra_deviation(const Spectrum& a, const Spectrum& b) {
  // Greedy matched distance; crude but monotone in the actual mismatch.
  double dev = 0.0;
  for (const auto& ea : a.eigenvalues) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& eb : b.eigenvalues) best = std::min(best, std::abs(ea.value - eb.value));
    dev = std::max(dev, best);
  }
  return dev;
}

}  // namespace

InvarianceReport check_transform_invariance(const NextGenMatrix& m, const std::vector<double>& h,
                                            const Strategy& eta, double tol) {
  const int n = m.size();
  if (static_cast<int>(h.size()) != n) throw input_error("multiplier dimension mismatch");
  std::vector<double> inv_h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!(h[static_cast<std::size_t>(i)] > 0.0))
      throw input_error("multiplier entries must be positive");
    inv_h[static_cast<std::size_t>(i)] = 1.0 / h[static_cast<std::size_t>(i)];
  }

  const Spectrum base = spectrum(scale_columns(m, eta));
  const double match_tol = tol * (1.0 + base.radius());

  InvarianceReport out;

  const Spectrum conj = spectrum(scale_columns(scale_both(m, h, inv_h), eta));
  out.conjugation_ok = spectra_match(base, conj, match_tol);
  out.max_deviation = spectra_deviation(base, conj);

  const Spectrum transp = spectrum(scale_columns(m.transposed(), eta));
  out.transpose_ok = spectra_match(base, transp, match_tol);
  out.max_deviation = std::max(out.max_deviation, spectra_deviation(base, transp));

  std::vector<double> ones_vec(static_cast<std::size_t>(n), 1.0);
  const Spectrum left = spectrum(scale_columns(scale_both(m, h, ones_vec), eta));
  const Spectrum right = spectrum(scale_columns(scale_both(m, ones_vec, h), eta));
  out.multiplier_swap_ok = spectra_match(left, right, tol * (1.0 + left.radius()));
  out.max_deviation = std::max(out.max_deviation, spectra_deviation(left, right));

  return out;
}

}  // namespace rekit
