#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace shortsum {

using cplx = std::complex<double>;

/// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(cplx z) noexcept {
    add(z);
    return *this;
  }
  cplx value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// floor(sqrt(n)) computed exactly.
inline std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// floor(n^(1/k)) computed exactly, k >= 1.
std::uint64_t iroot(std::uint64_t n, int k) noexcept;

/// m^k, saturating at UINT64_MAX.
std::uint64_t ipow_saturating(std::uint64_t m, int k) noexcept;

/// e(x) = exp(2 pi i x) after reducing x to [-1/2, 1/2].
inline cplx unit_phase(double cycles) noexcept {
  const double r = cycles - std::nearbyint(cycles);
  const double t = 2.0 * std::numbers::pi * r;
  return {std::cos(t), std::sin(t)};
}

/// e(k * alpha) with the product reduced mod 1 using an error-free
/// transformation, so large integer frequencies keep full phase accuracy.
inline cplx phase_of(std::uint64_t k, double alpha) noexcept {
  const double kd = static_cast<double>(k);
  const double p = kd * alpha;
  const double err = std::fma(kd, alpha, -p);
  const double r = (p - std::nearbyint(p)) + err;
  const double t = 2.0 * std::numbers::pi * r;
  return {std::cos(t), std::sin(t)};
}

/// sin(2 pi x) with exact reduction of x mod 1.
inline double sin_2pi(double x) noexcept {
  const double r = x - std::nearbyint(x);
  if (r == 0.0 || std::fabs(r) == 0.5) return 0.0;
  return std::sin(2.0 * std::numbers::pi * r);
}

}  // namespace shortsum
