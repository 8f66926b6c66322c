#include <doctest.h>

#include "rekit/re.hpp"
#include "rekit/shape.hpp"
#include "test_support.hpp"

using namespace rekit;

namespace {
const NextGenMatrix kCounterConv = NextGenMatrix::from_rows({{16, 12, 11}, {1, 12, 12}, {8, 1, 1}});
const NextGenMatrix kCounterConc = NextGenMatrix::from_rows({{9, 13, 14}, {18, 6, 5}, {1, 6, 6}});
const NextGenMatrix kFriedland = NextGenMatrix::from_rows({{3, 2, 0}, {2, 2, 1}, {0, 1, 4}});
}  // namespace

TEST_CASE("classification of the fixture matrices") {
  SUBCASE("symmetric positive definite is convex-certified") {
    const auto v = classify_shape(kFriedland, 100, 1);
    CHECK(v.classification == ShapeClass::convex_certified);
    REQUIRE(v.spectrum_inertia.has_value());
    CHECK(v.spectrum_inertia->negative_count == 0);
    CHECK(v.certificate.has_value());
  }
  SUBCASE("swap matrix has p=1 and is concave-certified") {
    const auto v = classify_shape(NextGenMatrix::from_rows({{0, 1}, {1, 0}}), 100, 1);
    CHECK(v.classification == ShapeClass::concave_certified);
    CHECK(v.spectrum_inertia->positive_count == 1);
  }
  SUBCASE("rank-one is linear-certified") {
    const auto v = classify_shape(NextGenMatrix::from_rows({{3, 1}, {6, 2}}), 100, 1);
    CHECK(v.classification == ShapeClass::linear_certified);
  }
  SUBCASE("concave-side counterexample violates both modes") {
    const auto v = classify_shape(kCounterConc, 10000, 1);
    REQUIRE(v.classification == ShapeClass::violation_found);
    bool has_conv = false, has_conc = false;
    for (const auto& w : v.violations) {
      has_conv = has_conv || w.mode == ViolationMode::convexity;
      has_conc = has_conc || w.mode == ViolationMode::concavity;
    }
    CHECK(has_conv);
    CHECK(has_conc);
  }
}

TEST_CASE("violation search: counterexample vs certified matrices") {
  CHECK(find_shape_violation(kCounterConv, ViolationMode::convexity, 10000, 3).has_value());
  CHECK(!find_shape_violation(kFriedland, ViolationMode::convexity, 10000, 3).has_value());
  const auto rank_one = NextGenMatrix::from_rows({{3, 1}, {6, 2}});
  CHECK(!find_shape_violation(rank_one, ViolationMode::convexity, 10000, 3).has_value());
  CHECK(!find_shape_violation(rank_one, ViolationMode::concavity, 10000, 3).has_value());
}

TEST_CASE("violations are replayable to 1e-10") {
  const auto v = find_shape_violation(kCounterConv, ViolationMode::convexity, 10000, 9);
  REQUIRE(v.has_value());
  const double r0 = re(kCounterConv, v->eta0).value;
  const double r1 = re(kCounterConv, v->eta1).value;
  std::vector<double> mix(3);
  for (int i = 0; i < 3; ++i) mix[i] = v->theta * v->eta0[i] + (1.0 - v->theta) * v->eta1[i];
  const double vm = re(kCounterConv, Strategy(mix)).value;
  const double gap = vm - (v->theta * r0 + (1.0 - v->theta) * r1);
  CHECK(gap == doctest::Approx(v->gap).epsilon(1e-10));
  CHECK(gap > 1e-7 * (1.0 + re(kCounterConv, Strategy::ones(3)).r0));
}

TEST_CASE("violation search is deterministic in the seed") {
  const auto a = find_shape_violation(kCounterConv, ViolationMode::convexity, 5000, 11);
  const auto b = find_shape_violation(kCounterConv, ViolationMode::convexity, 5000, 11);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->sample_index == b->sample_index);
  CHECK(a->theta == b->theta);
  CHECK(a->gap == b->gap);
}

TEST_CASE("certified shapes survive sampling") {
  for (int t = 0; t < 10; ++t) {
    TrialRng rng(501, static_cast<std::uint64_t>(t));
    const int n = 2 + static_cast<int>(rng.next_below(4));
    const auto convex = test::random_psd_symmetrizable(rng, n);
    CHECK(!find_shape_violation(convex, ViolationMode::convexity, 2000, t).has_value());
    const auto concave = test::random_p1_symmetrizable(rng, n);
    CHECK(!find_shape_violation(concave, ViolationMode::concavity, 2000, t).has_value());
  }
}

TEST_CASE("second derivative: rank-one has an empty sum") {
  const auto m = NextGenMatrix::from_rows({{3, 1}, {6, 2}});
  const auto cert = std::get<SymmetrizationCertificate>(symmetrize(m));
  const auto rep = second_derivative(m, cert, Strategy({1.0, 0.5}), Strategy({0.5, 1.0}), 0.4);
  CHECK(rep.terms.empty());
  CHECK(rep.r_second == 0.0);
  CHECK(std::abs(rep.fd_estimate) < 1e-6);
}

TEST_CASE("second derivative: swap matrix hand oracle") {
  // R(alpha) = sqrt(eta_1 eta_2) for K = [[0,1],[1,0]]; with eta0 = (1, 1/2),
  // eta1 = (1/2, 1), R(alpha)^2 = 1/2 + alpha/4 - alpha^2/4 and R''(1/2) = -1/3.
  const auto m = NextGenMatrix::from_rows({{0, 1}, {1, 0}});
  const auto cert = std::get<SymmetrizationCertificate>(symmetrize(m));
  const auto rep = second_derivative(m, cert, Strategy({1.0, 0.5}), Strategy({0.5, 1.0}), 0.5);
  CHECK(rep.r_alpha == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rep.r_second == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  CHECK(rep.r_second < 0.0);
  CHECK(std::abs(rep.r_second - rep.fd_estimate) <= 1e-5 * (1.0 + std::abs(rep.r_second)));
  REQUIRE(rep.terms.size() == 1);
  CHECK(rep.terms[0].first == doctest::Approx(-0.75));  // the negative eigenvalue
}

TEST_CASE("second derivative is nonpositive and matches finite differences (p=1)") {
  int done = 0;
  for (int t = 0; done < 25 && t < 200; ++t) {
    TrialRng rng(502, static_cast<std::uint64_t>(t));
    const int n = 2 + static_cast<int>(rng.next_below(4));
    const auto m = test::random_p1_symmetrizable(rng, n);
    const auto sym = symmetrize(m);
    if (!is_certificate(sym)) continue;
    const auto& cert = std::get<SymmetrizationCertificate>(sym);
    if (inertia(spectrum(m)).positive_count != 1) continue;

    std::vector<double> e0(static_cast<std::size_t>(n)), e1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      e0[static_cast<std::size_t>(i)] = rng.uniform(0.05, 1.0);
      e1[static_cast<std::size_t>(i)] = rng.uniform(0.05, 1.0);
    }
    const double alpha = rng.uniform(0.15, 0.85);
    SecondDerivativeReport rep;
    try {
      rep = second_derivative(m, cert, Strategy(e0), Strategy(e1), alpha);
    } catch (const numerical_error&) {
      continue;  // degenerate gap; the construction occasionally collapses
    }
    CHECK(rep.r_second <= 1e-9);
    CHECK(std::abs(rep.r_second - rep.fd_estimate) <= 1e-5 * (1.0 + std::abs(rep.r_second)));
    for (const auto& [lambda, coeff] : rep.terms) {
      CHECK(lambda < 0.0);  // p = 1: every other non-zero eigenvalue is negative
      CHECK(coeff >= 0.0);
    }
    ++done;
  }
  CHECK(done == 25);
}

TEST_CASE("second derivative preconditions") {
  const auto m = NextGenMatrix::from_rows({{0, 1}, {1, 0}});
  const auto cert = std::get<SymmetrizationCertificate>(symmetrize(m));
  CHECK_THROWS_AS(second_derivative(m, cert, Strategy({1.0, 0.0}), Strategy({0.5, 1.0}), 0.5),
                  input_error);  // eta touches 0
  CHECK_THROWS_AS(second_derivative(m, cert, Strategy({1.0, 0.5}), Strategy({0.5, 1.0}), 1.0),
                  input_error);  // alpha boundary
  const auto fried_cert = std::get<SymmetrizationCertificate>(symmetrize(kFriedland));
  CHECK_THROWS_AS(second_derivative(kFriedland, fried_cert, Strategy({1, 1, 1}),
                                    Strategy({0.5, 0.5, 0.5}), 0.5),
                  input_error);  // p = 3
  CHECK_THROWS_AS(second_derivative(m, fried_cert, Strategy({1.0, 0.5}), Strategy({0.5, 1.0}), 0.5),
                  input_error);  // dimension mismatch
}

TEST_CASE("simplex-plane sampling grid") {
  const auto samples = sample_simplex_plane(kCounterConv, 40);
  CHECK(samples.size() > 700);  // roughly half of 40*40, the triangle part
  for (const auto& s : samples) {
    CHECK(s.eta1 >= 0.0);
    CHECK(s.eta2 >= 0.0);
    CHECK(s.eta1 + s.eta2 <= 1.0 / 3.0 + 1e-9);
    CHECK(s.value >= 0.0);
  }
  CHECK_THROWS_AS(sample_simplex_plane(NextGenMatrix::identity(2), 10), input_error);
}
