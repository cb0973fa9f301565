#pragma once

// Prime and von Mangoldt infrastructure: segmented sieve, prime-power
// detection, sums of two squares and Chebyshev theta/psi prefix queries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace shortsum {

inline constexpr std::uint64_t kDefaultSieveCap = 20'000'000'000ULL;
inline constexpr std::uint64_t kDefaultSegment = 1ULL << 18;

struct SieveLimits {
  std::uint64_t hard_cap = kDefaultSieveCap;
};

/// One nonzero value of the von Mangoldt function, Lambda(n) = log p.
struct LambdaEntry {
  std::uint64_t n;
  double value;

  friend bool operator==(const LambdaEntry&, const LambdaEntry&) = default;
};

struct PrimePower {
  std::uint64_t p;
  int k;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primality flags and von Mangoldt support over the inclusive range [lo, hi].
///
/// Immutable once built; all queries are const and safe to share across
/// threads.
class SieveTable {
 public:
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }
  bool contains(std::uint64_t n) const noexcept { return n >= lo_ && n <= hi_; }

  /// Requires contains(n).
  bool is_prime(std::uint64_t n) const noexcept {
    const std::uint64_t i = n - lo_;
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }

  /// Lambda(n) for n in range; 0 when n is not a prime power.
  double lambda(std::uint64_t n) const;

  /// Entries sorted by n, one per prime power in range.
  std::span<const LambdaEntry> lambda_support() const noexcept { return support_; }

  std::size_t prime_count() const noexcept { return prime_count_; }

  /// Bit i of the packed words flags n = lo + i.
  std::span<const std::uint64_t> prime_words() const noexcept { return words_; }

  friend bool operator==(const SieveTable& a, const SieveTable& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.words_ == b.words_ && a.support_ == b.support_;
  }

 private:
  friend SieveTable build_sieve(std::uint64_t, std::uint64_t, std::uint64_t, const SieveLimits&);
  friend SieveTable load_sieve(const std::filesystem::path&);

  void index_higher_powers();

  std::uint64_t lo_ = 1;
  std::uint64_t hi_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<LambdaEntry> support_;
  std::vector<LambdaEntry> higher_powers_;  // p^k with k >= 2
  std::size_t prime_count_ = 0;
};

/// Segmented sieve of [lo, hi]. Working memory is O(segment_len + sqrt(hi))
/// on top of the returned table.
SieveTable build_sieve(std::uint64_t lo, std::uint64_t hi,
                       std::uint64_t segment_len = kDefaultSegment,
                       const SieveLimits& limits = {});

/// Writes the "PSL1" binary cache: magic, u64 lo, u64 hi (little endian),
/// the packed prime bitset, then (u64 n, f64 value) pairs up to EOF.
void save_sieve(const SieveTable& table, const std::filesystem::path& path);
SieveTable load_sieve(const std::filesystem::path& path);

/// Primes up to `limit` by a plain sieve of Eratosthenes.
std::vector<std::uint64_t> small_primes(std::uint64_t limit);

/// Lambda(n) by trial division; Lambda(1) = 0.
double von_mangoldt(std::uint64_t n);

/// (p, k) with p^k = n, or nullopt when n is not a prime power (n = 1 included).
std::optional<PrimePower> prime_power_decompose(std::uint64_t n);

/// Number of ordered pairs (a, b) of integers, signs and zero allowed,
/// with a^2 + b^2 = m.
std::uint64_t two_square_representations(std::uint64_t m);

struct IntRange {
  std::uint64_t lo;
  std::uint64_t hi;
};

struct ThetaQueryResult {
  std::vector<std::uint64_t> points;
  std::vector<double> theta;  // sum_{p <= x} log p
  std::vector<double> psi;    // sum_{n <= x} Lambda(n)
};

/// Exact theta(x) and psi(x) at each of the non-decreasing `points`, all of
/// which must lie in `range`, computed in one segmented pass over [1, max point].
ThetaQueryResult theta_psi_at(IntRange range, std::span<const std::uint64_t> points,
                              std::uint64_t segment_len = kDefaultSegment,
                              const SieveLimits& limits = {});

}  // namespace shortsum
