#pragma once

// L2 mean values  int_{-xi}^{xi} |F(alpha)|^2 d alpha  of the generating
// functions, by an exact pairwise closed form and by quadrature.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "shortsum/expsums.hpp"
#include "shortsum/quadrature.hpp"

namespace shortsum {

/// Largest coefficient count accepted by exact_l2 (O(R^2) pair work).
inline constexpr std::size_t kExactL2MaxTerms = 100'000;

struct MeanValueReport {
  ExpSumSpec spec;
  double xi = 0.0;
  std::optional<double> exact_value;
  std::optional<double> quad_value;
  std::optional<double> predicted_main;  // absent when the lemma does not apply (l = 1)
  std::optional<double> residual;        // exact_value - predicted_main
  std::optional<double> envelope;        // size of the lemma's error term, constant 1
  std::optional<double> secondary_term;  // xi N^{1/l}, displayed for S only
  double runtime_ms = 0.0;
};

/// Exact value of int_{-xi}^{xi} |sum_r a_r e(lambda_r alpha)|^2 d alpha:
///   2 xi sum a_r^2 + sum_{r != s} a_r a_s sin(2 pi xi (l_r - l_s)) / (pi (l_r - l_s)).
double exact_l2(std::span<const std::pair<std::uint64_t, double>> coeffs, double xi);

/// Quadrature estimate of int_{-xi}^{xi} |f|^2 for a generating function.
/// `panels` is the minimum number of base panels (>= 4).
double quad_l2(const ExpSumSpec& spec, double xi, int panels = 4, QuadSettings settings = {});

/// Same, for an arbitrary conjugate-symmetric integrand with the given
/// frequency bandwidth and innermost panel width.
double quad_l2(const Integrand& f, double xi, double bandwidth, double inner_width,
               QuadSettings settings = {});

/// Mean values of T_l and S_l over [-xi, xi] against their predicted main
/// terms 2 xi N^{1/l} and (2 xi / l) N^{1/l} log N.
std::pair<MeanValueReport, MeanValueReport> lemma21_check(int ell, std::uint64_t N, double xi,
                                                          bool with_quadrature = false);

struct ErrorSumMeasurement {
  double value = 0.0;        // int_{-1/K}^{1/K} |E_l|^2 (or |E~_l|^2)
  double rh_envelope = 0.0;  // N^{1/l} L^2 / K + K N^{2/l - 2} L^2
};

/// Measures the mean square of E_l (or the weighted E~_l) near 0.
/// `replacement`, when set, is integrated instead of the error function.
ErrorSumMeasurement error_sum_l2(int ell, std::uint64_t N, std::uint64_t K, bool weighted,
                                 const Integrand* replacement = nullptr);

}  // namespace shortsum
