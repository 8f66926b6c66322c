#include <doctest.h>

#include "rekit/optimize.hpp"
#include "rekit/re.hpp"
#include "test_support.hpp"

using namespace rekit;

namespace {

// Brute-force oracle on the cost-tight surface: eta_1..eta_{n-1} over a
// uniform grid, the last coordinate solved from the budget (R_e increases
// in eta, so the optimum uses the full budget).
double grid_oracle(const BudgetProblem& p, int resolution) {
  const int n = p.matrix.size();
  REQUIRE(n >= 2);
  const double t = p.total_cost() - p.budget;
  std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> eta(static_cast<std::size_t>(n));
    double partial = 0.0;
    for (int i = 0; i < n - 1; ++i) {
      eta[static_cast<std::size_t>(i)] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / resolution;
      partial += p.cost_weights[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)];
    }
    const double needed = (t - partial) / p.cost_weights[static_cast<std::size_t>(n - 1)];
    if (needed <= 1.0 + 1e-12) {
      eta[static_cast<std::size_t>(n - 1)] = std::clamp(needed, 0.0, 1.0);
      best = std::min(best, spectral_radius(scale_columns(p.matrix, Strategy(eta))));
    }
    int k = 0;
    while (k < n - 1 && ++idx[static_cast<std::size_t>(k)] > resolution) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == n - 1) break;
  }
  return best;
}

}  // namespace

TEST_CASE("budget problem validation") {
  const auto m = NextGenMatrix::identity(3);
  CHECK_THROWS_AS(BudgetProblem(m, -0.5), input_error);
  CHECK_THROWS_AS(BudgetProblem(m, 100.0), input_error);
  CHECK_THROWS_AS(BudgetProblem(m, 1.0, std::vector<double>{1.0, 2.0}), input_error);
  CHECK_THROWS_AS(BudgetProblem(m, 1.0, std::vector<double>{1.0, 0.0, 1.0}), input_error);
  const BudgetProblem p(m, 1.5);
  CHECK(p.total_cost() == 3.0);
  CHECK(p.cost(Strategy::ones(3)) == 0.0);
  CHECK(p.cost(Strategy::zeros(3)) == 3.0);
  CHECK(p.feasible(Strategy::ones(3)));
  CHECK(!p.feasible(Strategy::zeros(3)));
}

TEST_CASE("trivial budgets") {
  const auto m = NextGenMatrix::from_rows({{16, 12, 11}, {1, 12, 12}, {8, 1, 1}});
  const auto verdict = classify_shape(m, 200, 1);

  const auto zero_budget = minimize_re(BudgetProblem(m, 0.0), verdict);
  CHECK(zero_budget.eta_star.values() == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(zero_budget.value == doctest::Approx(spectral_radius(m)));
  CHECK(zero_budget.optimality_claimed);

  const auto full_budget = minimize_re(BudgetProblem(m, 3.0), verdict);
  CHECK(full_budget.eta_star.values() == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(full_budget.value == 0.0);
  CHECK(full_budget.optimality_claimed);
}

TEST_CASE("re_gradient") {
  SUBCASE("rank-one: gradient is f_i g_i, constant in eta") {
    const auto m = NextGenMatrix::from_rows({{3, 1}, {6, 2}});  // f=(1,2), g=(3,1)
    const auto g1 = re_gradient(m, Strategy({0.8, 0.6}));
    const auto g2 = re_gradient(m, Strategy({0.3, 0.9}));
    CHECK(g1[0] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(g1[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(g2[0] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(g2[1] == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("diagonal: gradient picks the active coordinate") {
    const auto m = NextGenMatrix::from_rows({{2, 0}, {0, 1}});
    const auto g = re_gradient(m, Strategy({0.9, 0.3}));  // 2*0.9 > 1*0.3
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-8));
  }
  SUBCASE("non-simple leading eigenvalue fails") {
    CHECK_THROWS_AS(re_gradient(NextGenMatrix::identity(2), Strategy::ones(2)), numerical_error);
    CHECK_THROWS_AS(re_gradient(NextGenMatrix::from_rows({{0, 1}, {0, 0}}), Strategy::ones(2)),
                    numerical_error);
  }
  SUBCASE("finite differences and the Euler relation") {
    for (int t = 0; t < 30; ++t) {
      TrialRng rng(701, static_cast<std::uint64_t>(t));
      const int n = 2 + static_cast<int>(rng.next_below(5));
      const auto m = test::random_positive_matrix(rng, n);
      std::vector<double> eta(static_cast<std::size_t>(n));
      for (auto& x : eta) x = rng.uniform(0.2, 0.8);
      const Strategy s(eta);
      const auto g = re_gradient(m, s);

      double euler = 0.0;
      for (int i = 0; i < n; ++i) euler += g[static_cast<std::size_t>(i)] * s[i];
      const double value = spectral_radius(scale_columns(m, s));
      CHECK(euler == doctest::Approx(value).epsilon(1e-9));

      std::vector<double> dir(static_cast<std::size_t>(n));
      for (auto& x : dir) x = rng.uniform(-1.0, 1.0);
      const double h = 1e-5;
      auto shifted = [&](double sgn) {
        std::vector<double> v(eta);
        for (int i = 0; i < n; ++i)
          v[static_cast<std::size_t>(i)] =
              std::clamp(v[static_cast<std::size_t>(i)] + sgn * h * dir[static_cast<std::size_t>(i)], 0.0, 1.0);
        return spectral_radius(scale_columns(m, Strategy(v)));
      };
      const double fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
      double analytic = 0.0;
      for (int i = 0; i < n; ++i) analytic += g[static_cast<std::size_t>(i)] * dir[static_cast<std::size_t>(i)];
      CHECK(std::abs(fd - analytic) <= 1e-5 * (1.0 + std::abs(analytic)));
    }
  }
}

TEST_CASE("rank-one instances match the exhaustive grid oracle") {
  for (int t = 0; t < 3; ++t) {
    TrialRng rng(702, static_cast<std::uint64_t>(t));
    std::vector<double> f = test::random_positive_vector(rng, 4, 0.3, 1.5);
    std::vector<double> g = test::random_positive_vector(rng, 4, 0.3, 1.5);
    std::vector<double> e(16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        e[static_cast<std::size_t>(i) * 4 + j] = f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
    const NextGenMatrix m(4, e);
    const BudgetProblem p(m, rng.uniform(0.8, 3.2));
    const auto verdict = classify_shape(m, 500, t);
    CHECK(verdict.classification == ShapeClass::linear_certified);

    const auto result = minimize_re(p, verdict);
    CHECK(p.feasible(result.eta_star));
    CHECK(result.method == OptimMethod::vertex_search);
    const double oracle = grid_oracle(p, 50);
    CHECK(result.value <= oracle + 1e-6);
  }
}

TEST_CASE("concave-certified: vertex search beats random feasible sampling") {
  int done = 0;
  for (int t = 0; done < 3 && t < 40; ++t) {
    TrialRng rng(703, static_cast<std::uint64_t>(t));
    const auto m = test::random_p1_symmetrizable(rng, 4);
    const auto verdict = classify_shape(m, 500, t);
    if (verdict.classification != ShapeClass::concave_certified) continue;

    const BudgetProblem p(m, rng.uniform(1.0, 3.0));
    const auto result = minimize_re(p, verdict);
    CHECK(p.feasible(result.eta_star));
    CHECK(result.optimality_claimed);

    const double t_cost = p.total_cost() - p.budget;
    for (int s = 0; s < 1000; ++s) {
      TrialRng srng(9000 + t, static_cast<std::uint64_t>(s));
      std::vector<double> eta(4);
      for (auto& x : eta) x = srng.next_double();
      double c = 0.0;
      for (int i = 0; i < 4; ++i) c += p.cost_weights[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)];
      if (c < t_cost) continue;  // infeasible draw
      const double v = spectral_radius(scale_columns(m, Strategy(eta)));
      CHECK(result.value <= v + 1e-9);
    }
    ++done;
  }
  CHECK(done == 3);
}

TEST_CASE("convex-certified: projected gradient stays feasible and descends") {
  int done = 0;
  for (int t = 0; done < 3 && t < 30; ++t) {
    TrialRng rng(704, static_cast<std::uint64_t>(t));
    const auto m = test::random_psd_symmetrizable(rng, 4);
    const auto verdict = classify_shape(m, 200, t);
    if (verdict.classification != ShapeClass::convex_certified) continue;

    const BudgetProblem p(m, 2.0);  // half of the unit-cost total
    const auto result = minimize_re(p, verdict, 500, t);
    CHECK(result.method == OptimMethod::gradient);
    CHECK(p.feasible(result.eta_star));
    CHECK(result.value <= spectral_radius(m) + 1e-12);  // no worse than eta = 1
    ++done;
  }
  CHECK(done == 3);
}

TEST_CASE("iteration starvation is reported, best iterate returned") {
  TrialRng rng(705, 0);
  const auto m = test::random_psd_symmetrizable(rng, 5);
  const auto verdict = classify_shape(m, 200, 1);
  REQUIRE(verdict.classification == ShapeClass::convex_certified);
  const BudgetProblem p(m, 2.5);
  const auto rushed = minimize_re(p, verdict, /*max_iter=*/1, 1);
  CHECK(p.feasible(rushed.eta_star));
  const auto relaxed = minimize_re(p, verdict, 500, 1);
  CHECK(relaxed.converged);
  CHECK(relaxed.value <= rushed.value + 1e-12);
}

TEST_CASE("grid fallback on uncertifiable instances") {
  const auto m = NextGenMatrix::from_rows({{9, 13, 14}, {18, 6, 5}, {1, 6, 6}});
  const auto verdict = classify_shape(m, 2000, 5);
  REQUIRE(verdict.classification == ShapeClass::violation_found);
  const BudgetProblem p(m, 1.5);
  const auto result = minimize_re(p, verdict, 300, 5);
  CHECK(result.method == OptimMethod::grid_fallback);
  CHECK(p.feasible(result.eta_star));
  CHECK(!result.optimality_claimed);
  CHECK(result.value < spectral_radius(m));
}
