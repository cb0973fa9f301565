#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "shortsum/errors.hpp"
#include "shortsum/representations.hpp"

using namespace shortsum;

namespace {

// Trial-division tables, no sieve involved.
struct Oracle {
  std::vector<double> lam;   // Lambda(n)
  std::vector<bool> prime;

  explicit Oracle(std::uint64_t n) : lam(n + 1, 0.0), prime(n + 1, false) {
    for (std::uint64_t m = 2; m <= n; ++m) {
      std::uint64_t p = 2;
      while (p * p <= m && m % p != 0) ++p;
      if (p * p > m) p = m;
      std::uint64_t r = m;
      while (r % p == 0) r /= p;
      if (r == 1) lam[m] = std::log(static_cast<double>(p));
      prime[m] = p == m;
    }
  }

  // Double loop over m1 + m2^2 = n with both variables >= 1.
  double value(RepKind kind, std::uint64_t n) const {
    double s = 0.0;
    for (std::uint64_t m2 = 1; m2 * m2 < n; ++m2) {
      const std::uint64_t m1 = n - m2 * m2;
      switch (kind.tag) {
        case RepTag::kPrime:
          if (prime[m1]) s += std::log(static_cast<double>(m1));
          break;
        case RepTag::kDoublePrime:
          if (prime[m1] && prime[m2]) s += std::log(static_cast<double>(m1)) * std::log(static_cast<double>(m2));
          break;
        case RepTag::kCapPrime:
          if (m1 <= kind.cap && m2 * m2 <= kind.cap) s += lam[m1];
          break;
        case RepTag::kCapDoublePrime:
          if (m1 <= kind.cap && m2 * m2 <= kind.cap) s += lam[m1] * lam[m2];
          break;
        case RepTag::kTildeDoublePrime:
          s += lam[m1] * lam[m2];
          break;
      }
    }
    return s;
  }
};

double total(const RepProfile& p) {
  double s = 0.0;
  for (double v : p.values) s += v;
  return s;
}

}  // namespace

TEST_CASE("rep_value examples") {
  CHECK(rep_value(RepKind::prime(), 3) == doctest::Approx(std::log(2.0)));
  CHECK(rep_value(RepKind::prime(), 5) == 0.0);
  CHECK(rep_value(RepKind::double_prime(), 11) ==
        doctest::Approx(std::log(7.0) * std::log(2.0) + std::log(2.0) * std::log(3.0)));
  CHECK(rep_value(RepKind::cap_prime(10), 10) == doctest::Approx(std::log(3.0)));
  CHECK_THROWS_AS(rep_value(RepKind::prime(), 1), InvalidArgument);
  CHECK_THROWS_AS(rep_value(RepKind::cap_prime(0), 10), InvalidArgument);
}

TEST_CASE("rep_value matches the double-loop oracle for n <= 10^4") {
  const std::uint64_t N = 10'000;
  const Oracle o(N);
  const SieveTable t = build_sieve(1, N);
  double worst = 0.0;
  for (std::uint64_t n = 2; n <= N; ++n) {
    for (const RepKind k : {RepKind::prime(), RepKind::double_prime(), RepKind::cap_prime(n / 2 + 1),
                            RepKind::cap_double_prime(n / 3 + 1), RepKind::tilde_double_prime()}) {
      worst = std::max(worst, std::fabs(rep_value(t, k, n) - o.value(k, n)));
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(rep_value(RepKind::tilde_double_prime(), 9999) == rep_value(t, RepKind::tilde_double_prime(), 9999));
}

TEST_CASE("tilde kind equals the vacuously capped kind") {
  const SieveTable t = build_sieve(1, 10'000);
  for (std::uint64_t n = 2; n <= 10'000; ++n) {
    REQUIRE(rep_value(t, RepKind::tilde_double_prime(), n) ==
            doctest::Approx(rep_value(t, RepKind::cap_double_prime(n), n)).epsilon(1e-15));
  }
}

TEST_CASE("capped value is nondecreasing in the cap") {
  const SieveTable t = build_sieve(1, 5000);
  for (std::uint64_t n = 2; n <= 5000; n += 37) {
    double prev = -1.0;
    for (std::uint64_t cap = 1; cap <= n + 1; cap += 1 + cap / 8) {
      const double v = rep_value(t, RepKind::cap_prime(cap), n);
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("profiles") {
  auto p = rep_profile(RepKind::prime(), 4, 2);
  REQUIRE(p.values.size() == 2);
  CHECK(p.values[0] == 0.0);
  CHECK(p.values[1] == doctest::Approx(std::log(5.0) + std::log(2.0)));

  p = rep_profile(RepKind::double_prime(), 3, 1);
  CHECK(p.values == std::vector<double>{0.0});

  const Oracle o(100);
  p = rep_profile(RepKind::cap_prime(20), 20, 5);
  REQUIRE(p.values.size() == 5);
  for (std::uint64_t i = 0; i < 5; ++i) {
    CHECK(p.values[i] == doctest::Approx(o.value(RepKind::cap_prime(20), 21 + i)).epsilon(1e-14));
  }
  // m1 = 23 at n = 24 exceeds the cap, leaving only Lambda(8).
  CHECK(p.values[3] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("profile values agree with rep_value") {
  const SieveTable t = build_sieve(1, 20'000);
  for (const RepKind k : {RepKind::prime(), RepKind::double_prime(), RepKind::cap_prime(15'000),
                          RepKind::cap_double_prime(15'000), RepKind::tilde_double_prime()}) {
    const RepProfile p = rep_profile(t, k, 19'000, 500);
    for (std::uint64_t i = 0; i < 500; ++i) REQUIRE(p.values[i] == rep_value(t, k, 19'001 + i));
    for (double v : p.values) REQUIRE(v >= 0.0);
  }
}

TEST_CASE("interval_sum_fast examples") {
  CHECK(interval_sum_fast(RepKind::prime(), 4, 2) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
  const Oracle o(100);
  double expect = 0.0;
  for (std::uint64_t n = 21; n <= 25; ++n) expect += o.value(RepKind::cap_prime(20), n);
  CHECK(interval_sum_fast(RepKind::cap_prime(20), 20, 5) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(expect == doctest::Approx(std::log(1763580.0)).epsilon(1e-14));
  CHECK_THROWS_AS(interval_sum_fast(RepKind::tilde_double_prime(), 20, 5), InvalidArgument);
}

TEST_CASE("interval_sum_fast equals the profile sum") {
  struct Case { std::uint64_t N, H; };
  for (const Case c : {Case{10'000, 100}, Case{1'000'000, 1000}, Case{5, 300}}) {
    for (const RepKind k : {RepKind::prime(), RepKind::double_prime(), RepKind::cap_prime(c.N),
                            RepKind::cap_double_prime(c.N), RepKind::cap_prime(c.N / 3 + 1)}) {
      const double fast = interval_sum_fast(k, c.N, c.H);
      const double slow = total(rep_profile(k, c.N, c.H));
      CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
    }
  }
}

TEST_CASE("prime power gap") {
  CHECK(prime_power_gap(8, 1).per_n[0] == doctest::Approx(std::log(2.0)));
  CHECK(prime_power_gap(4, 1).per_n[0] == doctest::Approx(std::log(2.0)));
  CHECK(prime_power_gap(2, 1).per_n[0] == 0.0);

  // Capped value minus its prime-only part, by the oracle.
  const std::uint64_t N = 3000, H = 200;
  const Oracle o(N + H);
  const auto gap = prime_power_gap(N, H);
  double max_abs = 0.0;
  for (std::uint64_t i = 0; i < H; ++i) {
    const std::uint64_t n = N + 1 + i;
    double prime_only = 0.0;
    for (std::uint64_t m = 1; m * m < n; ++m) {
      const std::uint64_t p = n - m * m;
      if (p <= N && m * m <= N && o.prime[p]) prime_only += std::log(static_cast<double>(p));
    }
    const double expect = o.value(RepKind::cap_prime(N), n) - prime_only;
    REQUIRE(gap.per_n[i] == doctest::Approx(expect).epsilon(1e-12));
    max_abs = std::max(max_abs, std::fabs(expect));
  }
  CHECK(gap.max_abs == doctest::Approx(max_abs));
  CHECK(gap.max_envelope_ratio > 0.0);
}

TEST_CASE("profile CSV") {
  std::ostringstream s;
  write_profile_csv(s, rep_profile(RepKind::prime(), 4, 2));
  CHECK(s.str() == "n,value\n5,0\n6,2.30258509299\n");
}

TEST_CASE("interval validation") {
  CHECK_THROWS_AS(rep_profile(RepKind::prime(), 1, 5), InvalidArgument);
  CHECK_THROWS_AS(rep_profile(RepKind::prime(), 10, 0), InvalidArgument);
  CHECK_THROWS_AS(interval_sum_fast(RepKind::prime(), 1000, 10, SieveLimits{500}), CapacityError);
  CHECK_THROWS_AS(parse_rep_tag("nope"), InvalidArgument);
  CHECK(parse_rep_tag("cap-rdprime") == RepTag::kCapDoublePrime);
}
