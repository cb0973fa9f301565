#include "shortsum/representations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "shortsum/errors.hpp"
#include "shortsum/numeric.hpp"

namespace shortsum {

std::string_view to_string(RepTag tag) {
  switch (tag) {
    case RepTag::kPrime: return "rprime";
    case RepTag::kDoublePrime: return "rdprime";
    case RepTag::kCapPrime: return "cap-rprime";
    case RepTag::kCapDoublePrime: return "cap-rdprime";
    case RepTag::kTildeDoublePrime: return "tilde-rdprime";
  }
  return "?";
}

RepTag parse_rep_tag(std::string_view name) {
  for (const RepTag t : {RepTag::kPrime, RepTag::kDoublePrime, RepTag::kCapPrime,
                         RepTag::kCapDoublePrime, RepTag::kTildeDoublePrime}) {
    if (name == to_string(t)) return t;
  }
  throw InvalidArgument("unknown representation kind '" + std::string(name) + "'");
}

namespace {

void check_kind(const RepKind& kind) {
  if (kind.capped() && kind.cap < 1) throw InvalidArgument("capped kinds need cap >= 1");
}

void check_interval(std::uint64_t N, std::uint64_t H, const SieveLimits& limits) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  if (H < 1) throw InvalidArgument("H must be at least 1");
  if (N + H > limits.hard_cap) {
    throw CapacityError("N + H = " + std::to_string(N + H) + " exceeds the sieve cap");
  }
}

/// Weight carried by the square variable m, or 0 when m does not take part.
double outer_weight(const SieveTable& table, const RepKind& kind, std::uint64_t m) {
  switch (kind.tag) {
    case RepTag::kPrime:
    case RepTag::kCapPrime:
      return 1.0;
    case RepTag::kDoublePrime:
      return table.is_prime(m) ? std::log(static_cast<double>(m)) : 0.0;
    case RepTag::kCapDoublePrime:
    case RepTag::kTildeDoublePrime:
      return table.lambda(m);
  }
  return 0.0;
}

bool uses_primes_only(const RepKind& kind) {
  return kind.tag == RepTag::kPrime || kind.tag == RepTag::kDoublePrime;
}

bool weighted_outer(const RepKind& kind) {
  return kind.tag == RepTag::kDoublePrime || kind.tag == RepTag::kCapDoublePrime ||
         kind.tag == RepTag::kTildeDoublePrime;
}

/// Largest admissible m for target values up to n_max (m^2 < n_max, and m^2 <= cap when capped).
std::uint64_t max_square_root(const RepKind& kind, std::uint64_t n_max) {
  std::uint64_t m = isqrt(n_max - 1);
  if (kind.capped()) m = std::min(m, isqrt(kind.cap));
  return m;
}

}  // namespace

double rep_value(const SieveTable& table, const RepKind& kind, std::uint64_t n) {
  if (n < 2) throw InvalidArgument("representation functions need n >= 2");
  check_kind(kind);
  if (table.lo() != 1 || table.hi() < n) throw InvalidArgument("sieve table does not cover [1, n]");

  CompensatedSum acc;
  const std::uint64_t m_max = max_square_root(kind, n);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::uint64_t m1 = n - m * m;
    if (kind.capped() && m1 > kind.cap) continue;
    const double w = outer_weight(table, kind, m);
    if (w == 0.0) continue;
    double inner = 0.0;
    if (uses_primes_only(kind)) {
      if (!table.is_prime(m1)) continue;
      inner = std::log(static_cast<double>(m1));
    } else {
      inner = table.lambda(m1);
      if (inner == 0.0) continue;
    }
    acc.add(weighted_outer(kind) ? inner * w : inner);
  }
  return acc.value();
}

double rep_value(const RepKind& kind, std::uint64_t n) {
  if (n < 2) throw InvalidArgument("representation functions need n >= 2");
  return rep_value(build_sieve(1, n), kind, n);
}

RepProfile rep_profile(const SieveTable& table, const RepKind& kind, std::uint64_t N,
                       std::uint64_t H) {
  check_interval(N, H, SieveLimits{});
  check_kind(kind);
  if (table.lo() != 1 || table.hi() < N + H) {
    throw InvalidArgument("sieve table does not cover [1, N + H]");
  }

  std::vector<CompensatedSum> acc(H);
  const auto support = table.lambda_support();
  const std::uint64_t m_max = max_square_root(kind, N + H);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::uint64_t sq = m * m;
    const double w = outer_weight(table, kind, m);
    if (w == 0.0) continue;
    // m1 ranges over [N + 1 - m^2, N + H - m^2], clipped to m1 >= 1 and the cap.
    const std::uint64_t lo = sq >= N + 1 ? 1 : N + 1 - sq;
    std::uint64_t hi = N + H - sq;
    if (kind.capped()) hi = std::min(hi, kind.cap);
    if (hi < lo) continue;
    auto it = std::lower_bound(support.begin(), support.end(), lo,
                               [](const LambdaEntry& e, std::uint64_t v) { return e.n < v; });
    for (; it != support.end() && it->n <= hi; ++it) {
      if (uses_primes_only(kind) && !table.is_prime(it->n)) continue;
      const std::uint64_t n = it->n + sq;
      acc[n - N - 1].add(weighted_outer(kind) ? it->value * w : it->value);
    }
  }

  RepProfile profile{N, H, kind, {}};
  profile.values.reserve(H);
  for (const auto& a : acc) profile.values.push_back(a.value());
  return profile;
}

RepProfile rep_profile(const RepKind& kind, std::uint64_t N, std::uint64_t H,
                       const SieveLimits& limits) {
  check_interval(N, H, limits);
  return rep_profile(build_sieve(1, N + H, kDefaultSegment, limits), kind, N, H);
}

double interval_sum_fast(const RepKind& kind, std::uint64_t N, std::uint64_t H,
                         const SieveLimits& limits) {
  check_interval(N, H, limits);
  check_kind(kind);
  if (kind.tag == RepTag::kTildeDoublePrime) {
    throw InvalidArgument("interval_sum_fast does not support the uncapped tilde kind");
  }

  struct Window {
    double weight;
    std::uint64_t below;  // F(top) - F(below) with F = theta or psi; below = 0 means F = 0
    std::uint64_t top;
  };

  const std::uint64_t m_max = max_square_root(kind, N + H);
  const SieveTable outer = build_sieve(1, std::max<std::uint64_t>(m_max, 2));
  std::vector<Window> windows;
  std::vector<std::uint64_t> points;
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::uint64_t sq = m * m;
    const double w = outer_weight(outer, kind, m);
    if (w == 0.0) continue;
    std::uint64_t below = sq >= N ? 0 : N - sq;
    std::uint64_t top = N + H - sq;
    if (kind.capped()) {
      top = std::min(top, kind.cap);
      below = std::min(below, kind.cap);
    }
    if (top <= below) continue;
    windows.push_back({w, below, top});
    points.push_back(top);
    if (below > 0) points.push_back(below);
  }
  if (windows.empty()) return 0.0;

  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const auto prefix = theta_psi_at({1, points.back()}, points, kDefaultSegment, limits);
  const auto& values = uses_primes_only(kind) ? prefix.theta : prefix.psi;
  const auto at = [&](std::uint64_t x) {
    if (x == 0) return 0.0;
    const auto it = std::lower_bound(points.begin(), points.end(), x);
    return values[static_cast<std::size_t>(it - points.begin())];
  };

  CompensatedSum total;
  for (const auto& win : windows) {
    const double diff = at(win.top) - at(win.below);
    total.add(weighted_outer(kind) ? diff * win.weight : diff);
  }
  return total.value();
}

PrimePowerGap prime_power_gap(std::uint64_t N, std::uint64_t H, const SieveLimits& limits) {
  check_interval(N, H, limits);

  std::vector<LambdaEntry> powers;  // p^k <= N with k >= 2
  for (const std::uint64_t p : small_primes(isqrt(N))) {
    const double lg = std::log(static_cast<double>(p));
    for (std::uint64_t q = p * p; q <= N; q *= p) {
      powers.push_back({q, lg});
      if (q > N / p) break;
    }
  }
  std::sort(powers.begin(), powers.end(), [](const auto& a, const auto& b) { return a.n < b.n; });

  std::vector<CompensatedSum> acc(H);
  for (std::uint64_t m = 1; m * m <= N; ++m) {
    const std::uint64_t sq = m * m;
    for (const auto& q : powers) {
      const std::uint64_t n = q.n + sq;
      if (n <= N) continue;
      if (n > N + H) break;
      acc[n - N - 1].add(q.value);
    }
  }

  PrimePowerGap gap;
  gap.per_n.reserve(H);
  const double root_h = std::sqrt(static_cast<double>(H));
  for (std::uint64_t i = 0; i < H; ++i) {
    const double v = acc[i].value();
    const double n = static_cast<double>(N + 1 + i);
    const double envelope = (std::cbrt(n) + root_h) * std::log(n);
    gap.per_n.push_back(v);
    gap.max_abs = std::max(gap.max_abs, std::fabs(v));
    gap.max_envelope_ratio = std::max(gap.max_envelope_ratio, std::fabs(v) / envelope);
  }
  return gap;
}

void write_profile_csv(std::ostream& out, const RepProfile& profile) {
  out << "n,value\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%llu,%.12g\n",
                  static_cast<unsigned long long>(profile.N + 1 + i), profile.values[i]);
    out << buf;
  }
}

}  // namespace shortsum
