#pragma once

// Generating functions of the circle method, evaluated pointwise and on
// uniform frequency grids:
//
//   S_l(a) = sum_{1 <= m^l <= N} Lambda(m) e(m^l a)
//   T_l(a) = sum_{1 <= m^l <= N} e(m^l a)
//   E_l    = S_l - T_l
//   f_2(a) = (1/2) sum_{1 <= m <= N} m^{-1/2} e(m a)
//   U(a,H) = sum_{1 <= m <= H} e(m a)
//   S~_l(a) = sum_{n >= 1} Lambda(n) exp(-n^l / N) e(n^l a)     (truncated)
//   E~_l   = S~_l - Gamma(1/l) / (l z^{1/l}),   z = 1/N - 2 pi i a
//
// with e(x) = exp(2 pi i x).

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "shortsum/numeric.hpp"

namespace shortsum {

enum class Family { kS, kT, kE, kF2, kU, kSTilde, kETilde };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

struct ExpSumSpec {
  Family family = Family::kS;
  int ell = 1;                  // ignored by F2 and U
  std::uint64_t N = 0;          // ignored by U
  std::uint64_t H = 0;          // U only
  double trunc_eps = 1e-16;     // tilde families only
};

/// Inclusive range of frequencies carrying non-negligible weight.
struct FreqBand {
  double lo = 0.0;
  double hi = 0.0;
};

/// Largest n kept in the tilde series: n^l <= N ln(1/eps) + l N ln N.
std::uint64_t tilde_length(int ell, std::uint64_t N, double trunc_eps);

/// z = 1/N - 2 pi i alpha.
inline cplx z_kernel(std::uint64_t N, double alpha) noexcept {
  return {1.0 / static_cast<double>(N), -2.0 * std::numbers::pi * alpha};
}

/// Gamma(1/l), exact for l = 1, 2.
double gamma_reciprocal(int ell);

/// |U(alpha, H)| = |sin(pi H alpha) / sin(pi alpha)|.
double u_modulus(double alpha, std::uint64_t H) noexcept;

/// sum_{m=1}^{count} e(m alpha) in closed form.
cplx geometric_sum(std::uint64_t count, double alpha) noexcept;

/// Precomputed generating function; construct once, evaluate many times.
class GeneratingFunction {
 public:
  explicit GeneratingFunction(const ExpSumSpec& spec);

  /// Requires alpha in [-1/2, 1/2].
  cplx operator()(double alpha) const;

  /// Unchecked evaluation; integer-frequency families are 1-periodic.
  cplx at(double alpha) const noexcept;

  const ExpSumSpec& spec() const noexcept { return spec_; }
  FreqBand band() const noexcept { return band_; }

  /// (frequency, amplitude) pairs of a finite integer-frequency family,
  /// zero amplitudes dropped. Tilde families are rejected.
  std::vector<std::pair<std::uint64_t, double>> coefficients() const;

 private:
  struct PowerSeries {
    int ell = 1;
    std::vector<double> amp;  // amp[m - 1] multiplies e(m^ell alpha)
    cplx at(double alpha) const noexcept;
  };

  ExpSumSpec spec_;
  FreqBand band_;
  PowerSeries primary_;        // S, F2 or the tilde series
  PowerSeries secondary_;      // T_l for l >= 2 (used by T and E)
  std::uint64_t geometric_ = 0;  // T_1 length or H
  double gamma_over_ell_ = 0.0;

  friend class GridBuilder;
};

/// One-shot pointwise evaluation.
cplx eval(const ExpSumSpec& spec, double alpha);

inline constexpr std::uint64_t kDefaultGridCap = std::uint64_t{1} << 26;

struct ExpSumGrid {
  ExpSumSpec spec;
  std::uint64_t M = 0;
  std::vector<cplx> values;  // values[j] = family(alpha_j)
};

/// alpha_j = j/M mapped into (-1/2, 1/2].
double grid_alpha(std::uint64_t j, std::uint64_t M) noexcept;

/// S, T, E and the tilde families fold coefficients at m^l mod M and apply
/// a length-M transform; U and F2 are evaluated pointwise.
ExpSumGrid grid_eval(const ExpSumSpec& spec, std::uint64_t M,
                     std::uint64_t grid_cap = kDefaultGridCap);

/// CSV `j,alpha,re,im`, 12 significant digits.
void write_grid_csv(std::ostream& out, const ExpSumGrid& grid);

struct BoundCheck {
  double max_ratio = 0.0;
  double witness_alpha = 0.0;  // alpha attaining max_ratio
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;  // samples with ratio > ceiling
  double ceiling = 1.0;
  bool flagged() const noexcept { return max_ratio > ceiling; }
};

/// |U(alpha, H)| <= min(H, 1/|alpha|) at `samples` random alpha in [-1/2, 1/2] \ {0}.
BoundCheck check_u_bound(std::uint64_t H, std::uint64_t samples, std::uint64_t seed);

/// |T_2 - f_2| / (1 + |alpha| N)^{1/2} at one alpha.
double t2_f2_gap_ratio(std::uint64_t N, double alpha);

/// Max of t2_f2_gap_ratio over random alpha; flagged above `ceiling`.
BoundCheck check_t2_f2_gap(std::uint64_t N, std::uint64_t samples, std::uint64_t seed,
                           double ceiling = 10.0);

}  // namespace shortsum
