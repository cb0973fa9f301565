#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shortsum/errors.hpp"
#include "shortsum/quadrature.hpp"

using namespace shortsum;

TEST_CASE("Gauss-Legendre rules") {
  for (const int n : {1, 2, 5, 10, 33, 96}) {
    const GaussRule& r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int i = 1; i < n; ++i) CHECK(r.nodes[i - 1] < r.nodes[i]);
    // Exact for x^k, k <= 2n - 1.
    for (int k = 0; k <= 2 * n - 1 && k <= 40; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
      REQUIRE(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK(gauss_legendre(3).nodes[1] == 0.0);
  CHECK(gauss_legendre(2).nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
}

TEST_CASE("oscillatory integrals against closed forms") {
  for (const double k : {0.0, 1.0, 37.0, 1000.0, 123456.0}) {
    const auto f = [k](double a) { return std::polar(1.0, 2.0 * std::numbers::pi * k * a); };
    for (const double b : {0.5, 0.125, 0.3}) {
      const QuadResult r = integrate_graded(f, 0.0, b, k, 1e-3);
      const cplx exact = k == 0.0 ? cplx{b, 0.0}
                                  : (std::polar(1.0, 2.0 * std::numbers::pi * k * b) - 1.0) /
                                        cplx{0.0, 2.0 * std::numbers::pi * k};
      REQUIRE(std::abs(r.value - exact) <= 1e-10 * std::max(b, 1e-3));
      REQUIRE(r.mass == doctest::Approx(b).epsilon(1e-10));
    }
  }
}

TEST_CASE("peaked integrand near zero") {
  // int_0^{1/2} 1 / (1/N^2 + a^2) da = N atan(N / 2).
  for (const double N : {10.0, 1e4, 1e6}) {
    const auto f = [N](double a) { return cplx{1.0 / (1.0 / (N * N) + a * a), 0.0}; };
    const QuadResult r = integrate_graded(f, 0.0, 0.5, 1.0, 1.0 / N);
    CHECK(r.value.real() == doctest::Approx(N * std::atan(N / 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("sub-interval away from zero") {
  const auto f = [](double a) { return cplx{std::cos(a), 0.0}; };
  const QuadResult r = integrate_graded(f, 0.2, 0.4, 1.0, 1e-4);
  CHECK(r.value.real() == doctest::Approx(std::sin(0.4) - std::sin(0.2)).epsilon(1e-14));
}

TEST_CASE("non-convergence raises an accuracy error carrying both estimates") {
  // Bandwidth understated by orders of magnitude and a shallow refinement budget.
  const auto f = [](double a) { return std::polar(1.0, 2.0 * std::numbers::pi * 1e7 * a * a); };
  QuadSettings s;
  s.max_depth = 1;
  try {
    integrate_graded(f, 0.0, 0.5, 1.0, 0.1, s);
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(e.coarse() != e.fine());
  }
}

TEST_CASE("argument checks") {
  const auto f = [](double) { return cplx{1.0, 0.0}; };
  CHECK_THROWS_AS(integrate_graded(f, 0.5, 0.5, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(integrate_graded(f, -0.1, 0.5, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(integrate_graded(f, 0.0, 0.5, 1.0, 0.0), InvalidArgument);
  QuadSettings s;
  s.max_depth = 0;
  CHECK_THROWS_AS(integrate_graded(f, 0.0, 0.5, 1.0, 0.1, s), InvalidArgument);
}
