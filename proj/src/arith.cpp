#include "shortsum/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shortsum/errors.hpp"
#include "shortsum/numeric.hpp"

namespace shortsum {

std::uint64_t ipow_saturating(std::uint64_t m, int k) noexcept {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (m != 0 && r > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= m;
  }
  return r;
}

std::uint64_t iroot(std::uint64_t n, int k) noexcept {
  if (k <= 1 || n <= 1) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
  while (r > 0 && ipow_saturating(r, k) > n) --r;
  while (ipow_saturating(r + 1, k) <= n) ++r;
  return r;
}

namespace {

void check_cap(std::uint64_t hi, const SieveLimits& limits) {
  if (hi > limits.hard_cap) {
    throw CapacityError("sieve limit " + std::to_string(hi) + " exceeds the configured cap " +
                        std::to_string(limits.hard_cap));
  }
}

/// Prime powers p^k (k >= 2) in [lo, hi], sorted by value.
std::vector<LambdaEntry> higher_prime_powers(std::uint64_t lo, std::uint64_t hi,
                                             const std::vector<std::uint64_t>& base) {
  std::vector<LambdaEntry> out;
  for (const std::uint64_t p : base) {
    if (p > hi / p) break;
    const double lg = std::log(static_cast<double>(p));
    for (std::uint64_t q = p * p;; q *= p) {
      if (q >= lo) out.push_back({q, lg});
      if (q > hi / p) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

/// Walks [lo, hi] in segments, exposing a byte flag per integer (1 = prime).
class SegmentWalker {
 public:
  SegmentWalker(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_len)
      : next_lo_(lo), hi_(hi), len_(segment_len), base_(small_primes(isqrt(hi))) {}

  const std::vector<std::uint64_t>& base_primes() const noexcept { return base_; }

  /// Fills `flags` for the next segment; returns false once the range is exhausted.
  bool next(std::uint64_t& seg_lo, std::vector<std::uint8_t>& flags) {
    if (next_lo_ > hi_ || next_lo_ == 0) return false;
    seg_lo = next_lo_;
    const std::uint64_t seg_hi = std::min(hi_, seg_lo + (len_ - 1));
    flags.assign(seg_hi - seg_lo + 1, 1);
    if (seg_lo <= 1) flags[1 - seg_lo] = 0;
    for (const std::uint64_t p : base_) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
      for (std::uint64_t m = start; m <= seg_hi; m += p) flags[m - seg_lo] = 0;
    }
    next_lo_ = seg_hi == std::numeric_limits<std::uint64_t>::max() ? 0 : seg_hi + 1;
    return true;
  }

 private:
  std::uint64_t next_lo_;
  std::uint64_t hi_;
  std::uint64_t len_;
  std::vector<std::uint64_t> base_;
};

}  // namespace

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

double SieveTable::lambda(std::uint64_t n) const {
  if (!contains(n)) {
    throw InvalidArgument("lambda query " + std::to_string(n) + " outside sieve range [" +
                          std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  if (is_prime(n)) return std::log(static_cast<double>(n));
  const auto it = std::lower_bound(higher_powers_.begin(), higher_powers_.end(), n,
                                   [](const LambdaEntry& e, std::uint64_t v) { return e.n < v; });
  return (it != higher_powers_.end() && it->n == n) ? it->value : 0.0;
}

void SieveTable::index_higher_powers() {
  higher_powers_.clear();
  prime_count_ = 0;
  for (const auto& e : support_) {
    if (is_prime(e.n)) {
      ++prime_count_;
    } else {
      higher_powers_.push_back(e);
    }
  }
}

SieveTable build_sieve(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_len,
                       const SieveLimits& limits) {
  if (lo < 1) throw InvalidArgument("sieve range must start at 1 or above");
  if (hi < lo) throw InvalidArgument("sieve range end lies below its start");
  if (segment_len < 2) throw InvalidArgument("segment length must be at least 2");
  check_cap(hi, limits);

  SieveTable table;
  table.lo_ = lo;
  table.hi_ = hi;
  table.words_.assign((hi - lo + 1 + 63) / 64, 0);

  SegmentWalker walker(lo, hi, segment_len);
  const auto powers = higher_prime_powers(lo, hi, walker.base_primes());
  std::size_t next_power = 0;

  std::vector<std::uint8_t> flags;
  std::uint64_t seg_lo = 0;
  while (walker.next(seg_lo, flags)) {
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::uint64_t n = seg_lo + i;
      if (flags[i]) {
        const std::uint64_t bit = n - lo;
        table.words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
        table.support_.push_back({n, std::log(static_cast<double>(n))});
      } else if (next_power < powers.size() && powers[next_power].n == n) {
        table.support_.push_back(powers[next_power++]);
      }
    }
  }
  table.index_higher_powers();
  return table;
}

std::optional<PrimePower> prime_power_decompose(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  std::uint64_t p = 0;
  if (n % 2 == 0) {
    p = 2;
  } else {
    for (std::uint64_t d = 3; d <= n / d; d += 2) {
      if (n % d == 0) {
        p = d;
        break;
      }
    }
  }
  if (p == 0) return PrimePower{n, 1};
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  if (n != 1) return std::nullopt;
  return PrimePower{p, k};
}

double von_mangoldt(std::uint64_t n) {
  const auto pk = prime_power_decompose(n);
  return pk ? std::log(static_cast<double>(pk->p)) : 0.0;
}

std::uint64_t two_square_representations(std::uint64_t m) {
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a * a <= m; ++a) {
    const std::uint64_t rest = m - a * a;
    const std::uint64_t b = isqrt(rest);
    if (b * b != rest) continue;
    count += (a == 0 ? 1 : 2) * (b == 0 ? 1 : 2);
  }
  return count;
}

ThetaQueryResult theta_psi_at(IntRange range, std::span<const std::uint64_t> points,
                              std::uint64_t segment_len, const SieveLimits& limits) {
  if (range.lo < 1 || range.hi < range.lo) throw InvalidArgument("invalid theta/psi query range");
  if (segment_len < 2) throw InvalidArgument("segment length must be at least 2");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < range.lo || points[i] > range.hi) {
      throw InvalidArgument("query point " + std::to_string(points[i]) + " outside range");
    }
    if (i > 0 && points[i] < points[i - 1]) throw InvalidArgument("query points are not sorted");
  }

  ThetaQueryResult out;
  out.points.assign(points.begin(), points.end());
  out.theta.resize(points.size());
  out.psi.resize(points.size());
  if (points.empty()) return out;

  const std::uint64_t top = points.back();
  check_cap(top, limits);

  SegmentWalker walker(1, top, segment_len);
  const auto powers = higher_prime_powers(1, top, walker.base_primes());
  std::size_t next_power = 0;
  std::size_t q = 0;
  CompensatedSum theta;
  CompensatedSum powers_sum;

  std::vector<std::uint8_t> flags;
  std::uint64_t seg_lo = 0;
  while (q < points.size() && walker.next(seg_lo, flags)) {
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::uint64_t n = seg_lo + i;
      if (flags[i]) {
        theta.add(std::log(static_cast<double>(n)));
      } else if (next_power < powers.size() && powers[next_power].n == n) {
        powers_sum.add(powers[next_power++].value);
      }
      while (q < points.size() && points[q] == n) {
        out.theta[q] = theta.value();
        out.psi[q] = theta.value() + powers_sum.value();
        ++q;
      }
      if (q == points.size()) break;
    }
  }
  return out;
}

}  // namespace shortsum
