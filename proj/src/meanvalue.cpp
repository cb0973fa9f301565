#include "shortsum/meanvalue.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "shortsum/errors.hpp"

namespace shortsum {

namespace {

void check_xi(double xi) {
  if (!(xi > 0.0 && xi <= 0.5)) throw InvalidArgument("xi must lie in (0, 1/2]");
}

double root_of(std::uint64_t N, int ell) {
  const double n = static_cast<double>(N);
  if (ell == 1) return n;
  if (ell == 2) return std::sqrt(n);
  if (ell == 3) return std::cbrt(n);
  return std::pow(n, 1.0 / ell);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

double inner_width_for(const ExpSumSpec& spec) {
  const std::uint64_t scale = spec.family == Family::kU ? spec.H : spec.N;
  return 1.0 / static_cast<double>(std::max<std::uint64_t>(scale, 1));
}

}  // namespace

double exact_l2(std::span<const std::pair<std::uint64_t, double>> coeffs, double xi) {
  check_xi(xi);
  if (coeffs.size() > kExactL2MaxTerms) {
    throw CapacityError("exact_l2 limited to " + std::to_string(kExactL2MaxTerms) + " terms");
  }
  std::vector<std::pair<std::uint64_t, double>> c(coeffs.begin(), coeffs.end());
  std::sort(c.begin(), c.end());
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].first == c[i - 1].first) {
      throw InvalidArgument("duplicate frequency " + std::to_string(c[i].first) + " in exact_l2");
    }
  }

  CompensatedSum diag;
  for (const auto& [freq, a] : c) diag.add(a * a);
  CompensatedSum cross;
  for (std::size_t r = 0; r < c.size(); ++r) {
    double row = 0.0;
    for (std::size_t s = r + 1; s < c.size(); ++s) {
      const double d = static_cast<double>(c[s].first - c[r].first);
      const double sn = sin_2pi(xi * d);
      if (sn != 0.0) row += c[s].second * sn / (std::numbers::pi * d);
    }
    cross.add(c[r].second * row);
  }
  return 2.0 * xi * diag.value() + 2.0 * cross.value();
}

double quad_l2(const Integrand& f, double xi, double bandwidth, double inner_width,
               QuadSettings settings) {
  check_xi(xi);
  const auto squared = [&f](double alpha) { return cplx{std::norm(f(alpha)), 0.0}; };
  return 2.0 * integrate_graded(squared, 0.0, xi, bandwidth, inner_width, settings).value.real();
}

double quad_l2(const ExpSumSpec& spec, double xi, int panels, QuadSettings settings) {
  if (panels < 4) throw InvalidArgument("quad_l2 needs at least 4 panels");
  settings.min_panels = std::max(settings.min_panels, panels);
  const GeneratingFunction g(spec);
  // |f|^2 carries the frequency differences of f.
  const double bandwidth = g.band().hi - std::min(g.band().lo, g.band().hi);
  return quad_l2([&g](double a) { return g.at(a); }, xi, bandwidth, inner_width_for(spec), settings);
}

std::pair<MeanValueReport, MeanValueReport> lemma21_check(int ell, std::uint64_t N, double xi,
                                                          bool with_quadrature) {
  if (ell < 1) throw InvalidArgument("ell must be positive");
  if (N < 2) throw InvalidArgument("N must be at least 2");
  check_xi(xi);
  const double L = std::log(static_cast<double>(N));
  const double root = root_of(N, ell);

  const auto run = [&](Family family) {
    const auto start = std::chrono::steady_clock::now();
    MeanValueReport rep;
    rep.spec = {family, ell, N};
    rep.xi = xi;
    const GeneratingFunction g(rep.spec);
    const auto coeffs = g.coefficients();
    rep.exact_value = exact_l2(coeffs, xi);
    if (with_quadrature) rep.quad_value = quad_l2(rep.spec, xi);
    if (ell >= 2) {
      if (family == Family::kT) {
        rep.predicted_main = 2.0 * xi * root;
        rep.envelope = ell == 2 ? L : 1.0;
      } else {
        rep.predicted_main = 2.0 * xi / ell * root * L;
        rep.secondary_term = xi * root;
        rep.envelope = ell == 2 ? L * L : 1.0;
      }
      rep.residual = *rep.exact_value - *rep.predicted_main;
    }
    rep.runtime_ms = elapsed_ms(start);
    return rep;
  };
  return {run(Family::kT), run(Family::kS)};
}

ErrorSumMeasurement error_sum_l2(int ell, std::uint64_t N, std::uint64_t K, bool weighted,
                                 const Integrand* replacement) {
  if (K < 2) throw InvalidArgument("K must be at least 2");
  if (ell < 1) throw InvalidArgument("ell must be positive");
  if (N < 2) throw InvalidArgument("N must be at least 2");
  const double n = static_cast<double>(N);
  const double k = static_cast<double>(K);
  const double L = std::log(n);
  const double root = root_of(N, ell);

  ErrorSumMeasurement out;
  out.rh_envelope = root * L * L / k + k * std::pow(n, 2.0 / ell - 2.0) * L * L;
  const double xi = 1.0 / k;
  if (replacement != nullptr) {
    out.value = quad_l2(*replacement, xi, n, 1.0 / n);
    return out;
  }
  const ExpSumSpec spec{weighted ? Family::kETilde : Family::kE, ell, N};
  out.value = quad_l2(spec, xi);
  return out;
}

}  // namespace shortsum
