#pragma once

// Exact representation functions for "prime + square" and
// "prime + prime square", with short-interval sums.
//
// All variables m, m1, m2 range over positive integers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "shortsum/arith.hpp"

namespace shortsum {

enum class RepTag {
  kPrime,         // sum of log p over p + m^2 = n
  kDoublePrime,   // sum of log p1 log p2 over p1 + p2^2 = n
  kCapPrime,      // sum of Lambda(m1) over m1 + m2^2 = n, m1 and m2^2 <= cap
  kCapDoublePrime,// sum of Lambda(m1) Lambda(m2), same caps
  kTildeDoublePrime,  // sum of Lambda(m1) Lambda(m2) over m1 + m2^2 = n, no cap
};

struct RepKind {
  RepTag tag = RepTag::kPrime;
  std::uint64_t cap = 0;  // only read by the capped tags

  static RepKind prime() { return {RepTag::kPrime, 0}; }
  static RepKind double_prime() { return {RepTag::kDoublePrime, 0}; }
  static RepKind cap_prime(std::uint64_t cap) { return {RepTag::kCapPrime, cap}; }
  static RepKind cap_double_prime(std::uint64_t cap) { return {RepTag::kCapDoublePrime, cap}; }
  static RepKind tilde_double_prime() { return {RepTag::kTildeDoublePrime, 0}; }

  bool capped() const noexcept {
    return tag == RepTag::kCapPrime || tag == RepTag::kCapDoublePrime;
  }
};

/// CLI spelling: rprime, rdprime, cap-rprime, cap-rdprime, tilde-rdprime.
std::string_view to_string(RepTag tag);
RepTag parse_rep_tag(std::string_view name);

struct RepProfile {
  std::uint64_t N = 0;
  std::uint64_t H = 0;
  RepKind kind;
  std::vector<double> values;  // values[i] is the function at n = N + 1 + i
};

/// Value at a single n >= 2, sieving [1, n] internally.
double rep_value(const RepKind& kind, std::uint64_t n);

/// Value at n using a caller-provided table covering [1, n].
double rep_value(const SieveTable& table, const RepKind& kind, std::uint64_t n);

/// Per-n values over (N, N + H] from one shared sieve.
RepProfile rep_profile(const RepKind& kind, std::uint64_t N, std::uint64_t H,
                       const SieveLimits& limits = {});
RepProfile rep_profile(const SieveTable& table, const RepKind& kind, std::uint64_t N,
                       std::uint64_t H);

/// Sum of the profile over (N, N + H], computed from theta/psi window
/// differences in a single segmented pass. The tilde kind is not supported.
double interval_sum_fast(const RepKind& kind, std::uint64_t N, std::uint64_t H,
                         const SieveLimits& limits = {});

struct PrimePowerGap {
  std::vector<double> per_n;  // capped R'(n) minus its prime-only part, cap = N
  double max_abs = 0.0;
  double max_envelope_ratio = 0.0;  // max of |gap(n)| / (n^{1/3} log n + H^{1/2} log n)
};

/// Contribution of prime powers p^k (k >= 2) to the capped prime + square
/// count over (N, N + H].
PrimePowerGap prime_power_gap(std::uint64_t N, std::uint64_t H, const SieveLimits& limits = {});

/// CSV with header `n,value`, 12 significant digits.
void write_profile_csv(std::ostream& out, const RepProfile& profile);

}  // namespace shortsum
