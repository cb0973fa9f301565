#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "shortsum/arith.hpp"
#include "shortsum/errors.hpp"
#include "shortsum/meanvalue.hpp"
#include "shortsum/report_json.hpp"

using namespace shortsum;
using Coeffs = std::vector<std::pair<std::uint64_t, double>>;

namespace {

Coeffs t_coeffs(int ell, std::uint64_t N) { return GeneratingFunction({Family::kT, ell, N}).coefficients(); }
Coeffs s_coeffs(int ell, std::uint64_t N) { return GeneratingFunction({Family::kS, ell, N}).coefficients(); }

double sum_sq(const Coeffs& c) {
  double s = 0.0;
  for (const auto& [f, a] : c) s += a * a;
  return s;
}

}  // namespace

TEST_CASE("exact_l2 examples") {
  const Coeffs one{{7, 1.0}};
  for (const double xi : {0.01, 0.25, 0.5}) CHECK(exact_l2(one, xi) == doctest::Approx(2.0 * xi));
  const Coeffs pair{{0, 1.0}, {1, 1.0}};
  CHECK(exact_l2(pair, 0.25) == doctest::Approx(1.0 + 2.0 / std::numbers::pi).epsilon(1e-15));
  const Coeffs some{{1, 0.5}, {4, -2.0}, {9, 3.0}, {100, 0.25}};
  CHECK(exact_l2(some, 0.5) == sum_sq(some));
}

TEST_CASE("exact_l2 against direct integration of |f|^2") {
  // Midpoint rule with many nodes on a low-degree polynomial.
  const Coeffs c{{0, 0.3}, {2, -1.0}, {3, 0.7}, {11, 2.0}};
  const double xi = 0.21;
  const int n = 200'000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = -xi + (i + 0.5) * 2.0 * xi / n;
    cplx v{0.0, 0.0};
    for (const auto& [f, amp] : c) v += amp * std::polar(1.0, 2.0 * std::numbers::pi * f * a);
    s += std::norm(v);
  }
  CHECK(exact_l2(c, xi) == doctest::Approx(s * 2.0 * xi / n).epsilon(1e-8));
}

TEST_CASE("exact_l2 properties") {
  const Coeffs s = s_coeffs(2, 10'000);
  double prev = 0.0;
  for (const double xi : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const double v = exact_l2(s, xi);
    CHECK(v >= prev);
    prev = v;
  }
  Coeffs doubled = s;
  for (auto& c : doubled) c.second *= 2.0;
  for (const double xi : {0.125, 0.3}) CHECK(exact_l2(doubled, xi) == 4.0 * exact_l2(s, xi));
  for (const std::uint64_t N : {100ULL, 10'000ULL, 1'000'000ULL}) {
    CHECK(exact_l2(t_coeffs(2, N), 0.5) == doctest::Approx(static_cast<double>(isqrt(N))).epsilon(1e-9));
  }
}

TEST_CASE("exact_l2 rejects bad input") {
  const Coeffs dup{{3, 1.0}, {3, 2.0}};
  CHECK_THROWS_AS(exact_l2(dup, 0.25), InvalidArgument);
  const Coeffs ok{{3, 1.0}};
  CHECK_THROWS_AS(exact_l2(ok, 0.0), InvalidArgument);
  CHECK_THROWS_AS(exact_l2(ok, 0.51), InvalidArgument);
  const Coeffs big(kExactL2MaxTerms + 1, {1, 1.0});
  CHECK_THROWS_AS(exact_l2(big, 0.25), CapacityError);
}

TEST_CASE("quad_l2 Parseval cases") {
  CHECK(quad_l2({Family::kT, 2, 100}, 0.5) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(quad_l2({Family::kU, 1, 0, 4}, 0.5) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(quad_l2({Family::kT, 3, 10'000}, 0.5) == doctest::Approx(21.0).epsilon(1e-6));
  const Coeffs s = s_coeffs(2, 10'000);
  CHECK(quad_l2({Family::kS, 2, 10'000}, 0.5) == doctest::Approx(sum_sq(s)).epsilon(1e-6));
  const Coeffs e = GeneratingFunction({Family::kE, 1, 2000}).coefficients();
  CHECK(quad_l2({Family::kE, 1, 2000}, 0.5) == doctest::Approx(sum_sq(e)).epsilon(1e-6));
  CHECK(quad_l2({Family::kF2, 1, 500}, 0.5) ==
        doctest::Approx(sum_sq(GeneratingFunction({Family::kF2, 1, 500}).coefficients())).epsilon(1e-6));
  CHECK_THROWS_AS(quad_l2({Family::kT, 2, 100}, 0.5, 3), InvalidArgument);
}

TEST_CASE("quad_l2 agrees with exact_l2") {
  for (const Family f : {Family::kT, Family::kS}) {
    const ExpSumSpec spec{f, 2, 10'000};
    const Coeffs c = GeneratingFunction(spec).coefficients();
    for (const double xi : {0.125, 0.25, 0.5}) {
      CHECK(quad_l2(spec, xi) == doctest::Approx(exact_l2(c, xi)).epsilon(1e-6));
    }
  }
  const ExpSumSpec e1{Family::kE, 1, 3000};
  CHECK(quad_l2(e1, 0.01) == doctest::Approx(exact_l2(GeneratingFunction(e1).coefficients(), 0.01)).epsilon(1e-6));
}

TEST_CASE("Lemma 2.1 reports") {
  auto [t, s] = lemma21_check(2, 100, 0.5);
  CHECK(*t.exact_value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(*t.predicted_main == 10.0);
  CHECK(std::fabs(*t.residual) <= 1e-9);
  CHECK(*s.predicted_main == doctest::Approx(0.5 * 10.0 * std::log(100.0)));
  CHECK(*s.secondary_term == doctest::Approx(5.0));

  std::tie(t, s) = lemma21_check(2, 1'000'000, 0.25);
  const double L = std::log(1e6);
  CHECK(*t.predicted_main == doctest::Approx(500.0));
  CHECK(std::fabs(*t.residual) <= 20.0 * L);
  CHECK(*t.envelope == doctest::Approx(L));
  CHECK(*s.envelope == doctest::Approx(L * L));

  std::tie(t, s) = lemma21_check(3, 1'000'000, 0.25);
  CHECK(*t.predicted_main == doctest::Approx(50.0));
  CHECK(*t.envelope == 1.0);
  MESSAGE("l=3, N=1e6, xi=1/4: T residual " << *t.residual << ", S residual " << *s.residual);

  std::tie(t, s) = lemma21_check(1, 1000, 0.25, true);
  CHECK(!t.predicted_main.has_value());
  CHECK(!s.residual.has_value());
  CHECK(*t.quad_value == doctest::Approx(*t.exact_value).epsilon(1e-6));
  CHECK(*s.quad_value == doctest::Approx(*s.exact_value).epsilon(1e-6));
  CHECK(*t.exact_value >= 0.0);

  CHECK_THROWS_AS(lemma21_check(0, 100, 0.25), InvalidArgument);
  CHECK_THROWS_AS(lemma21_check(2, 100, 0.0), InvalidArgument);
}

TEST_CASE("error sums") {
  const Integrand zero = [](double) { return cplx{0.0, 0.0}; };
  CHECK(error_sum_l2(1, 100, 2, false, &zero).value == 0.0);

  const ErrorSumMeasurement m = error_sum_l2(2, 10'000, 100, false);
  const double L = std::log(1e4);
  CHECK(m.rh_envelope == doctest::Approx(L * L + 1e-2 * L * L));
  const Coeffs e = GeneratingFunction({Family::kE, 2, 10'000}).coefficients();
  CHECK(m.value == doctest::Approx(exact_l2(e, 0.01)).epsilon(1e-6));

  const ErrorSumMeasurement w = error_sum_l2(2, 10'000, 100, true);
  CHECK(w.value > 0.0);
  CHECK(std::isfinite(w.value));
  CHECK_THROWS_AS(error_sum_l2(2, 10'000, 1, false), InvalidArgument);
}

TEST_CASE("JSON export") {
  const auto [t, s] = lemma21_check(1, 100, 0.25);
  const nlohmann::json j = t;
  CHECK(j["spec"]["family"] == "T");
  CHECK(j["predicted_main"].is_null());
  CHECK(j["exact_value"].get<double>() == *t.exact_value);
  for (const char* key : {"xi", "quad_value", "residual", "runtime_ms", "envelope"}) CHECK(j.contains(key));
}
