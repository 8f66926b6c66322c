#include "rekit/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "rekit/frobenius.hpp"
#include "rekit/io.hpp"
#include "rekit/kernels.hpp"
#include "rekit/re.hpp"
#include "rekit/rng.hpp"
#include "rekit/shape.hpp"
#include "rekit/symmetrize.hpp"

namespace rekit {

namespace {

NextGenMatrix random_positive_matrix(TrialRng& rng, int n, double scale = 1.0) {
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (auto& x : e) x = scale * (0.05 + rng.next_double());
  return NextGenMatrix(n, std::move(e));
}

Strategy random_strategy(TrialRng& rng, int n) {
  std::vector<double> eta(static_cast<std::size_t>(n));
  for (auto& x : eta) x = rng.next_double();
  return Strategy(std::move(eta));
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "ok" : "FAIL") << ": " << name << note << "\n";
    if (!ok) ++failures;
  };

  const auto conv = io::builtin_matrix("counter-conv");
  const auto conc = io::builtin_matrix("counter-conc");
  const auto friedland = io::builtin_matrix("friedland");

  check("counterexample spectra match the published values", [&] {
    const auto sc = spectrum(conv);
    const auto ss = spectrum(conc);
    auto near = [](const Spectrum& s, double a, double b, double c) {
      if (s.eigenvalues.size() != 3) return false;
      for (double expected : {a, b, c})
        if (s.multiplicity_at({expected, 0.0}, 0.05) != 1) return false;
      return true;
    };
    return near(sc, 24.8, 2.9, 1.3) && near(ss, 26.3, -1.4, -3.9);
  });

  check("R_e(0) = 0 and R_e(1) = R_0 on the fixtures", [&] {
    for (const auto& m : {conv, conc, friedland}) {
      const auto r0 = re(m, Strategy::zeros(3));
      const auto r1 = re(m, Strategy::ones(3));
      if (r0.value != 0.0 || std::abs(r1.value - spectral_radius(m)) > 1e-12) return false;
    }
    return true;
  });

  check("elementary properties hold over 200 seeded trials", [&] {
    return check_elementary_properties(conv, 200, 20250901).ok();
  });

  check("transform invariances on random matrices", [&] {
    for (int t = 0; t < 20; ++t) {
      TrialRng rng(31, static_cast<std::uint64_t>(t));
      const int n = 2 + static_cast<int>(rng.next_below(5));
      const auto m = random_positive_matrix(rng, n);
      std::vector<double> h(static_cast<std::size_t>(n));
      for (auto& x : h) x = 0.25 + rng.next_double();
      if (!check_transform_invariance(m, h, random_strategy(rng, n)).ok()) return false;
    }
    return true;
  });

  check("symmetrization round-trip on planted D*S inputs", [&] {
    for (int t = 0; t < 20; ++t) {
      TrialRng rng(47, static_cast<std::uint64_t>(t));
      const int n = 2 + static_cast<int>(rng.next_below(5));
      std::vector<double> s(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          s[static_cast<std::size_t>(i) * n + j] = s[static_cast<std::size_t>(j) * n + i] =
              0.1 + rng.next_double();
      std::vector<double> e(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i) {
        const double di = 0.2 + 2.0 * rng.next_double();
        for (int j = 0; j < n; ++j)
          e[static_cast<std::size_t>(i) * n + j] = di * s[static_cast<std::size_t>(i) * n + j];
      }
      const NextGenMatrix m(n, e);
      auto res = symmetrize(m);
      if (!is_certificate(res)) return false;
      const auto sym = symmetric_form(m, std::get<SymmetrizationCertificate>(res));
      if (!spectra_match(spectrum(m), spectrum(sym), 1e-6 * (1.0 + spectral_radius(m))))
        return false;
    }
    return true;
  });

  check("atom-max identity on random block-triangular matrices", [&] {
    for (int t = 0; t < 50; ++t) {
      TrialRng rng(59, static_cast<std::uint64_t>(t));
      const int blocks = 2 + static_cast<int>(rng.next_below(3));
      std::vector<int> sizes;
      int n = 0;
      for (int b = 0; b < blocks; ++b) {
        sizes.push_back(1 + static_cast<int>(rng.next_below(3)));
        n += sizes.back();
      }
      std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
      int off = 0;
      for (int b = 0; b < blocks; ++b) {
        for (int i = 0; i < sizes[static_cast<std::size_t>(b)]; ++i)
          for (int j = 0; j < sizes[static_cast<std::size_t>(b)]; ++j)
            e[static_cast<std::size_t>(off + i) * n + (off + j)] = 0.1 + rng.next_double();
        for (int j = off + sizes[static_cast<std::size_t>(b)]; j < n; ++j)
          for (int i = off; i < off + sizes[static_cast<std::size_t>(b)]; ++i)
            if (rng.next_double() < 0.4) e[static_cast<std::size_t>(i) * n + j] = rng.next_double();
        off += sizes[static_cast<std::size_t>(b)];
      }
      const NextGenMatrix m(n, e);
      TrialRng eta_rng(60, static_cast<std::uint64_t>(t));
      const auto eta = random_strategy(eta_rng, n);
      const double direct = re(m, eta).value;
      const double atoms = re_via_atoms(m, eta).value;
      if (std::abs(direct - atoms) > 1e-8 * (1.0 + spectral_radius(m))) return false;
    }
    return true;
  });

  check("rank-one kernel closed form matches the discretized solver", [&] {
    const auto grid = QuadratureGrid::midpoint(32);
    ConfigurationKernel ck{[](double x) { return 1.0 + x; }, [](double y) { return 2.0 * y; }};
    TrialRng rng(61, 0);
    const auto eta = random_strategy(rng, grid.size());
    const double closed = configuration_re(ck, grid, eta);
    const double solved = re(discretize(ck.kernel(), grid), eta).value;
    return std::abs(closed - solved) <= 1e-10 * (1.0 + closed);
  });

  check("Friedland inverse reproduced by linear solves to 1e-9", [&] {
    const std::vector<std::vector<double>> expected{{1.4, -1.6, 0.4}, {-1.6, 2.4, -0.6}, {0.4, -0.6, 0.4}};
    for (int col = 0; col < 3; ++col) {
      std::vector<double> rhs(3, 0.0);
      rhs[static_cast<std::size_t>(col)] = 1.0;
      const auto x = detail::solve_linear(friedland.entries(), 3, rhs);
      for (int row = 0; row < 3; ++row)
        if (std::abs(x[static_cast<std::size_t>(row)] - expected[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]) > 1e-9)
          return false;
    }
    return true;
  });

  check("classify: friedland convex, counterexamples violate", [&] {
    if (classify_shape(friedland, 2000, 7).classification != ShapeClass::convex_certified)
      return false;
    const auto v = classify_shape(conc, 5000, 7);
    return v.classification == ShapeClass::violation_found;
  });

  check("monatomicity evidence on the fixtures", [&] {
    const auto ev = is_monatomic(conv);
    if (!ev.monatomic || ev.r0_multiplicity.value_or(0) != 1) return false;
    const auto two = is_monatomic(NextGenMatrix::from_rows({{1, 0}, {0, 2}}));
    return !two.monatomic && two.nonzero_atom_count == 2;
  });

  return failures;
}

}  // namespace rekit
