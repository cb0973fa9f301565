#pragma once

// Circle-method decompositions of the interval sums over (N, N + H]:
// each sum is an integral over [-1/2, 1/2] of generating functions
// against U(-alpha, H) e(-N alpha), split into parts I_1 .. I_4.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shortsum/numeric.hpp"
#include "shortsum/quadrature.hpp"

namespace shortsum {

enum class Theorem { kT1 = 1, kT2 = 2, kT3 = 3, kT4 = 4 };

std::string_view to_string(Theorem t);
/// Accepts "1".."4" or "T1".."T4".
Theorem parse_theorem(std::string_view name);

inline constexpr std::uint64_t kDefaultQuadratureCap = 1'000'000;

struct ArcConfig {
  Theorem theorem = Theorem::kT1;
  std::uint64_t N = 0;
  std::uint64_t H = 0;
  double c = 0.1;             // B(N, c) constant, T2 and T4
  double trunc_eps = 1e-16;   // tilde truncation, T3
  QuadSettings quad;
  std::uint64_t quadrature_cap = kDefaultQuadratureCap;
};

/// B(N, c) = exp(c (L / log L)^{1/3}), L = log N.
double b_value(std::uint64_t N, double c);

struct ArcPart {
  std::string name;      // "I1" .. "I4"
  double lo = 0.0;       // integration range |alpha| in [lo, hi]
  double hi = 0.0;
  cplx value;
  std::uint64_t evaluations = 0;
};

/// Major arc plus minor arc of the unsplit integrand, against the DFT value.
struct PartitionCheck {
  double major = 0.0;
  double minor = 0.0;
  double total = 0.0;
  double dft_lhs = 0.0;
  double relative_residual = 0.0;
};

struct ArcReport {
  ArcConfig config;
  double B = 0.0;         // T2/T4 only
  double arc_end = 0.5;   // B/H, clipped to 1/2
  std::vector<ArcPart> parts;
  double parts_total = 0.0;
  double imag_residue = 0.0;
  double main_term_exact = 0.0;
  double main_term_paper = 0.0;
  double direct_sum = 0.0;
  double identity_residual = 0.0;  // |parts_total - direct_sum|
  std::optional<PartitionCheck> partition;
  std::vector<std::string> warnings;
  double runtime_ms = 0.0;
};

enum class DftKind { kPrimeSquare, kPrimePrimeSquare };  // T1 and T4 integrands

struct DftIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t M = 0;
};

/// Samples S_1 X_2 U(-., H) e(-N .) at M = 2N + H + 1 points (X_2 = T_2 or
/// S_2) and compares the mean with the capped interval sum (cap N).
DftIdentity dft_identity(std::uint64_t N, std::uint64_t H, DftKind kind);

ArcReport decompose(const ArcConfig& config);

struct MainTerm {
  double exact = 0.0;       // sum of n^{1/2} (times e^{-n/N} when weighted)
  double paper_form = 0.0;  // H N^{1/2} (divided by e when weighted)
  double gap = 0.0;
  double envelope_h2 = 0.0;   // H^2 / N^{1/2}
  double envelope_h32 = 0.0;  // H^{3/2}
};

MainTerm main_term(std::uint64_t N, std::uint64_t H, bool weighted);

}  // namespace shortsum
