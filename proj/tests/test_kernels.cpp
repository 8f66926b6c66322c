#include <doctest.h>

#include <numeric>

#include "rekit/kernels.hpp"
#include "rekit/re.hpp"
#include "test_support.hpp"

using namespace rekit;

TEST_CASE("quadrature grids are probability measures") {
  for (int m : {1, 2, 7, 64}) {
    if (m >= 1) {
      const auto g = QuadratureGrid::midpoint(m);
      CHECK(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) == doctest::Approx(1.0));
      CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    }
    if (m >= 2) {
      const auto g = QuadratureGrid::trapezoid(m);
      CHECK(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) == doctest::Approx(1.0));
      for (double w : g.weights) CHECK(w > 0.0);
    }
  }
  CHECK_THROWS_AS(QuadratureGrid::midpoint(0), input_error);
  CHECK_THROWS_AS(QuadratureGrid::trapezoid(1), input_error);
}

TEST_CASE("constant kernel discretizes to the rank-one row-sum matrix") {
  const double c = 2.5;
  const auto grid = QuadratureGrid::midpoint(16);
  const KernelSpec k{[c](double, double) { return c; }, "constant"};
  const auto m = discretize(k, grid);
  CHECK(m.size() == 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) CHECK(m(i, j) == doctest::Approx(c / 16));
  CHECK(spectral_radius(m) == doctest::Approx(c).epsilon(1e-12));
  CHECK(m.weights() == grid.weights);
}

TEST_CASE("configuration kernels are rank one after discretization") {
  TrialRng rng(601, 0);
  const auto grid = QuadratureGrid::midpoint(24);
  ConfigurationKernel ck{[](double x) { return 0.5 + x; }, [](double y) { return 2.0 - y; }};
  const auto m = discretize(ck.kernel(), grid);
  const auto s = spectrum(m);
  const double rho = s.radius();
  // all non-leading eigenvalues vanish
  for (const auto& e : s.eigenvalues)
    if (std::abs(std::abs(e.value) - rho) > 1e-12) CHECK(std::abs(e.value) <= 1e-9 * rho);
}

TEST_CASE("graphon SIS kernel with W = xy: radius approximates 1/3") {
  GraphonSISParams params;
  params.beta = [](double) { return 1.0; };
  params.theta = [](double) { return 1.0; };
  params.gamma = [](double) { return 1.0; };
  params.W = [](double x, double y) { return x * y; };

  const auto m64 = discretize(params.kernel(), QuadratureGrid::midpoint(64));
  const double rho64 = spectral_radius(m64);
  CHECK(std::abs(rho64 - 1.0 / 3.0) <= 1e-3);

  // rank-one closed-form oracle at m = 4096
  const auto g4096 = QuadratureGrid::midpoint(4096);
  double oracle = 0.0;
  for (int i = 0; i < 4096; ++i)
    oracle += g4096.nodes[static_cast<std::size_t>(i)] * g4096.nodes[static_cast<std::size_t>(i)] *
              g4096.weights[static_cast<std::size_t>(i)];
  CHECK(std::abs(rho64 - oracle) <= 1e-3);
}

TEST_CASE("quadrature refinement converges monotonically on the SIS kernel") {
  GraphonSISParams params;
  params.beta = [](double x) { return 1.0 + 0.5 * x; };
  params.theta = [](double x) { return 1.0 - 0.25 * x; };
  params.gamma = [](double x) { return 1.0 + 0.1 * x * x; };
  params.W = [](double x, double y) { return 0.5 + 0.5 * x * y; };
  const auto k = params.kernel();

  std::vector<double> radii;
  for (int m : {16, 32, 64, 128}) radii.push_back(spectral_radius(discretize(k, QuadratureGrid::midpoint(m))));
  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) diffs.push_back(std::abs(radii[i] - radii[i + 1]));
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) CHECK(diffs[i + 1] < diffs[i]);

  // large-grid guard through a finer (still affordable) dense solve
  const double rho512 = spectral_radius(discretize(k, QuadratureGrid::midpoint(512)));
  CHECK(std::abs(radii.back() - rho512) <= 1e-3);

  // m = 4096 reference on the rank-one SIS kernel, where the radius has the
  // closed form sum x^2 w and needs no dense solve
  GraphonSISParams rank_one;
  rank_one.beta = [](double) { return 1.0; };
  rank_one.theta = [](double) { return 1.0; };
  rank_one.gamma = [](double) { return 1.0; };
  rank_one.W = [](double x, double y) { return x * y; };
  const double rho128 = spectral_radius(discretize(rank_one.kernel(), QuadratureGrid::midpoint(128)));
  const auto g4096 = QuadratureGrid::midpoint(4096);
  double rho4096 = 0.0;
  for (int i = 0; i < g4096.size(); ++i)
    rho4096 += g4096.nodes[static_cast<std::size_t>(i)] * g4096.nodes[static_cast<std::size_t>(i)] *
               g4096.weights[static_cast<std::size_t>(i)];
  CHECK(std::abs(rho128 - rho4096) <= 1e-3);
}

TEST_CASE("double norm") {
  const auto grid = QuadratureGrid::midpoint(32);
  SUBCASE("constant kernel has norm 1 for every p") {
    const KernelSpec one{[](double, double) { return 1.0; }, "one"};
    for (double p : {1.5, 2.0, 3.0, 10.0}) CHECK(double_norm(one, p, grid) == doctest::Approx(1.0));
  }
  SUBCASE("factorized kernel: ||f||_p ||g||_q on the grid") {
    auto f = [](double x) { return 1.0 + x; };
    auto g = [](double y) { return 2.0 - y * y; };
    const KernelSpec k{[f, g](double x, double y) { return f(x) * g(y); }, "fg"};
    for (double p : {1.5, 2.0, 4.0}) {
      const double q = p / (p - 1.0);
      double fp = 0.0, gq = 0.0;
      for (int i = 0; i < grid.size(); ++i) {
        fp += std::pow(f(grid.nodes[static_cast<std::size_t>(i)]), p) * grid.weights[static_cast<std::size_t>(i)];
        gq += std::pow(g(grid.nodes[static_cast<std::size_t>(i)]), q) * grid.weights[static_cast<std::size_t>(i)];
      }
      const double expected = std::pow(fp, 1.0 / p) * std::pow(gq, 1.0 / q);
      CHECK(double_norm(k, p, grid) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("p = 2 with k(x,y) = xy is about 1/3") {
    const KernelSpec k{[](double x, double y) { return x * y; }, "xy"};
    CHECK(std::abs(double_norm(k, 2.0, grid) - 1.0 / 3.0) < 1e-3);
  }
  SUBCASE("p <= 1 is rejected") {
    const KernelSpec one{[](double, double) { return 1.0; }, "one"};
    CHECK_THROWS_AS(double_norm(one, 1.0, grid), input_error);
    CHECK_THROWS_AS(double_norm(one, 0.5, grid), input_error);
  }
}

TEST_CASE("configuration closed form") {
  const auto grid = QuadratureGrid::midpoint(32);
  SUBCASE("all ones") {
    ConfigurationKernel ck{[](double) { return 1.0; }, [](double) { return 1.0; }};
    CHECK(configuration_re(ck, grid, Strategy::ones(32)) == doctest::Approx(1.0));
  }
  SUBCASE("midpoint rule integrates 2y exactly") {
    ConfigurationKernel ck{[](double) { return 1.0; }, [](double y) { return 2.0 * y; }};
    CHECK(configuration_re(ck, grid, Strategy::ones(32)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("vanishing product") {
    ConfigurationKernel ck{[](double x) { return x < 0.5 ? 1.0 : 0.0; },
                           [](double) { return 1.0; }};
    std::vector<double> eta(32, 0.0);
    for (int i = 16; i < 32; ++i) eta[static_cast<std::size_t>(i)] = 1.0;  // disjoint support
    CHECK(configuration_re(ck, grid, Strategy(eta)) == 0.0);
  }
  SUBCASE("matches the discretized eigensolver to 1e-10") {
    for (int t = 0; t < 25; ++t) {
      TrialRng rng(602, static_cast<std::uint64_t>(t));
      const double a = rng.uniform(0.1, 2.0), b = rng.uniform(0.0, 1.5);
      const double c = rng.uniform(0.1, 2.0), d = rng.uniform(0.0, 1.5);
      ConfigurationKernel ck{[a, b](double x) { return a + b * x; },
                             [c, d](double y) { return c + d * y; }};
      const int msize = 4 + static_cast<int>(rng.next_below(28));
      const auto grid2 = (t % 2 == 0) ? QuadratureGrid::midpoint(msize)
                                      : QuadratureGrid::trapezoid(std::max(2, msize));
      const auto eta = test::random_strategy(rng, grid2.size());
      const double closed = configuration_re(ck, grid2, eta);
      const double solved = re(discretize(ck.kernel(), grid2), eta).value;
      CHECK(std::abs(closed - solved) <= 1e-10 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("symmetric kernels satisfy detailed balance after discretization") {
  const auto grid = QuadratureGrid::midpoint(20);
  const KernelSpec k{[](double x, double y) { return 0.3 + x * y; }, "sym"};
  const auto m = discretize(k, grid);
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      CHECK(m(i, j) * m.weights()[static_cast<std::size_t>(i)] ==
            m(j, i) * m.weights()[static_cast<std::size_t>(j)]);
}

TEST_CASE("kernel symmetrizability certificates") {
  SUBCASE("trivial factors give a flat diagonal") {
    FactorizedKernel k{[](double) { return 1.0; },
                       [](double x, double y) { return 1.0 + x * y; },
                       [](double) { return 1.0; }};
    const auto cert = kernel_symmetrizability_check(k, QuadratureGrid::midpoint(16));
    for (double d : cert.d) CHECK(d == doctest::Approx(1.0));
  }
  SUBCASE("graphon SIS: diagonal proportional to (theta/gamma)/beta") {
    auto beta = [](double x) { return 1.0 + x; };
    auto theta = [](double x) { return 2.0 - x; };
    auto gamma = [](double x) { return 1.0 + 0.5 * x; };
    FactorizedKernel k{beta, [](double x, double y) { return 0.5 + 0.5 * std::min(x, y); },
                       [theta, gamma](double x) { return theta(x) / gamma(x); }};
    const auto grid = QuadratureGrid::midpoint(24);
    const auto cert = kernel_symmetrizability_check(k, grid);
    // uniform weights: d_i * beta_i * gamma_i / theta_i must be constant
    std::vector<double> ratio;
    for (int i = 0; i < grid.size(); ++i) {
      const double x = grid.nodes[static_cast<std::size_t>(i)];
      ratio.push_back(cert.d[static_cast<std::size_t>(i)] * beta(x) * gamma(x) / theta(x));
    }
    for (double r : ratio) CHECK(r == doctest::Approx(ratio.front()).epsilon(1e-8));
  }
  SUBCASE("f = 1+x with trivial core: d proportional to 1/(1+x)") {
    FactorizedKernel k{[](double x) { return 1.0 + x; }, [](double, double) { return 1.0; },
                       [](double) { return 1.0; }};
    const auto grid = QuadratureGrid::midpoint(12);
    const auto cert = kernel_symmetrizability_check(k, grid);
    std::vector<double> ratio;
    for (int i = 0; i < grid.size(); ++i)
      ratio.push_back(cert.d[static_cast<std::size_t>(i)] * (1.0 + grid.nodes[static_cast<std::size_t>(i)]));
    for (double r : ratio) CHECK(r == doctest::Approx(ratio.front()).epsilon(1e-8));
  }
  SUBCASE("asymmetric core is detected") {
    FactorizedKernel k{[](double) { return 1.0; },
                       [](double x, double y) { return 1.0 + x + 2.0 * y; },
                       [](double) { return 1.0; }};
    CHECK_THROWS_AS(kernel_symmetrizability_check(k, QuadratureGrid::midpoint(8)),
                    numerical_error);
  }
}

TEST_CASE("asymmetric graphons and vanishing recovery rates are rejected") {
  GraphonSISParams params;
  params.beta = [](double) { return 1.0; };
  params.theta = [](double) { return 1.0; };
  params.gamma = [](double) { return 1.0; };
  params.W = [](double x, double y) { return x + 2.0 * y; };  // not symmetric
  CHECK_THROWS_AS(discretize(params.kernel(), QuadratureGrid::midpoint(4)), input_error);

  params.W = [](double x, double y) { return x * y; };
  params.gamma = [](double) { return 0.0; };  // k blows up, caught at discretization
  CHECK_THROWS_AS(discretize(params.kernel(), QuadratureGrid::midpoint(4)), input_error);
}

TEST_CASE("invalid kernel evaluations carry the offending point") {
  const KernelSpec bad{[](double x, double y) { return x > 0.5 ? -1.0 : x * y; }, "bad"};
  try {
    discretize(bad, QuadratureGrid::midpoint(8));
    FAIL("expected input_error");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("kernel evaluation invalid") != std::string::npos);
  }
}
