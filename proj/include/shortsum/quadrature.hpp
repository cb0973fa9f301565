#pragma once

// Composite Gauss-Legendre quadrature for oscillatory integrands on [a, b],
// a >= 0, with panels graded geometrically away from alpha = 0.

#include <cstdint>
#include <functional>
#include <vector>

#include "shortsum/numeric.hpp"

namespace shortsum {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, cached after first use.
const GaussRule& gauss_legendre(int n);

struct QuadSettings {
  int min_panels = 4;
  int max_depth = 5;           // halvings beyond the base panel layout
  double target_tol = 1e-11;   // stop refining below this (relative to the L1 mass)
  double fail_tol = 1e-6;      // raise AccuracyError above this at max depth
  double cycles_per_piece = 16.0;
};

struct QuadResult {
  cplx value;
  double mass = 0.0;  // integral of |f|, same nodes
  int depth = 0;
  std::uint64_t evaluations = 0;
};

using Integrand = std::function<cplx(double)>;

/// Integral of f over [a, b]. `bandwidth` bounds |frequency| of f in cycles
/// per unit alpha; `inner_width` is the width of the first graded panel at 0
/// (panel widths then grow in proportion to alpha).
QuadResult integrate_graded(const Integrand& f, double a, double b, double bandwidth,
                            double inner_width, const QuadSettings& settings = {});

}  // namespace shortsum
