#include "shortsum/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "shortsum/errors.hpp"

namespace shortsum {

namespace {

GaussRule make_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct Piece {
  double lo;
  double hi;
  int order;
};

int order_for(double cycles) {
  return std::clamp(static_cast<int>(std::ceil(1.6 * cycles)) + 12, 10, 96);
}

std::vector<Piece> layout(double a, double b, double bandwidth, double inner_width,
                          const QuadSettings& s) {
  std::vector<double> cuts{a};
  for (double x = inner_width; x < b; x *= 2.0) {
    if (x > a) cuts.push_back(x);
  }
  cuts.push_back(b);

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    const auto count = static_cast<std::size_t>(
        std::max(1.0, std::ceil(width * bandwidth / s.cycles_per_piece)));
    for (std::size_t k = 0; k < count; ++k) {
      const double lo = cuts[i] + width * static_cast<double>(k) / static_cast<double>(count);
      const double hi = k + 1 == count ? cuts[i + 1]
                                       : cuts[i] + width * static_cast<double>(k + 1) / static_cast<double>(count);
      pieces.push_back({lo, hi, order_for((hi - lo) * bandwidth)});
    }
  }
  if (pieces.size() < static_cast<std::size_t>(s.min_panels)) {
    const std::size_t split = (s.min_panels + pieces.size() - 1) / pieces.size();
    std::vector<Piece> finer;
    for (const auto& p : pieces) {
      for (std::size_t k = 0; k < split; ++k) {
        const double lo = p.lo + (p.hi - p.lo) * static_cast<double>(k) / static_cast<double>(split);
        const double hi = k + 1 == split ? p.hi : p.lo + (p.hi - p.lo) * static_cast<double>(k + 1) / static_cast<double>(split);
        finer.push_back({lo, hi, p.order});
      }
    }
    pieces.swap(finer);
  }
  return pieces;
}

QuadResult run_level(const Integrand& f, const std::vector<Piece>& pieces, int depth) {
  CompensatedComplexSum total;
  CompensatedSum mass;
  std::uint64_t evals = 0;
  const std::size_t parts = std::size_t{1} << depth;
  for (const auto& p : pieces) {
    const GaussRule& rule = gauss_legendre(p.order);
    const double step = (p.hi - p.lo) / static_cast<double>(parts);
    for (std::size_t k = 0; k < parts; ++k) {
      const double lo = p.lo + step * static_cast<double>(k);
      const double hi = k + 1 == parts ? p.hi : lo + step;
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const cplx v = f(mid + half * rule.nodes[i]);
        const double w = half * rule.weights[i];
        total.add(w * v);
        mass.add(w * std::abs(v));
      }
      evals += rule.nodes.size();
    }
  }
  return {total.value(), mass.value(), depth, evals};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(make_rule(n));
  return *slot;
}

QuadResult integrate_graded(const Integrand& f, double a, double b, double bandwidth,
                            double inner_width, const QuadSettings& settings) {
  if (!(a >= 0.0) || !(b > a)) throw InvalidArgument("integrate_graded needs 0 <= a < b");
  if (!(inner_width > 0.0)) throw InvalidArgument("inner panel width must be positive");
  if (settings.min_panels < 1 || settings.max_depth < 1) {
    throw InvalidArgument("quadrature needs min_panels >= 1 and max_depth >= 1");
  }
  const auto pieces = layout(a, b, std::max(bandwidth, 1.0), inner_width, settings);

  QuadResult prev = run_level(f, pieces, 0);
  std::uint64_t evals = prev.evaluations;
  for (int depth = 1; depth <= settings.max_depth; ++depth) {
    QuadResult cur = run_level(f, pieces, depth);
    evals += cur.evaluations;
    const double diff = std::abs(cur.value - prev.value);
    const double scale = std::max(cur.mass, std::abs(cur.value));
    if (diff <= settings.target_tol * scale) {
      cur.evaluations = evals;
      return cur;
    }
    if (depth == settings.max_depth) {
      if (diff <= settings.fail_tol * scale) {
        cur.evaluations = evals;
        return cur;
      }
      throw AccuracyError("quadrature did not converge: successive estimates " +
                              std::to_string(prev.value.real()) + " and " +
                              std::to_string(cur.value.real()),
                          prev.value.real(), cur.value.real());
    }
    prev = cur;
  }
  return prev;
}

}  // namespace shortsum
