#include "shortsum/expsums.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <random>
#include <string>

#include "shortsum/arith.hpp"
#include "shortsum/errors.hpp"

namespace shortsum {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kS: return "S";
    case Family::kT: return "T";
    case Family::kE: return "E";
    case Family::kF2: return "F2";
    case Family::kU: return "U";
    case Family::kSTilde: return "S_TILDE";
    case Family::kETilde: return "E_TILDE";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (const Family f : {Family::kS, Family::kT, Family::kE, Family::kF2, Family::kU,
                         Family::kSTilde, Family::kETilde}) {
    if (name == to_string(f)) return f;
  }
  throw InvalidArgument("unknown generating function '" + std::string(name) + "'");
}

std::uint64_t tilde_length(int ell, std::uint64_t N, double trunc_eps) {
  const double n = static_cast<double>(N);
  const double x = n * std::log(1.0 / trunc_eps) + ell * n * std::log(n);
  return static_cast<std::uint64_t>(std::floor(std::pow(x, 1.0 / ell) + 1e-9));
}

double gamma_reciprocal(int ell) {
  if (ell == 1) return 1.0;
  if (ell == 2) return std::sqrt(std::numbers::pi);
  return std::tgamma(1.0 / ell);
}

namespace {

/// k * x mod 1 in [-1/2, 1/2], exact up to the final rounding.
double reduced_product(std::uint64_t k, double x) noexcept {
  const double kd = static_cast<double>(k);
  const double p = kd * x;
  const double err = std::fma(kd, x, -p);
  return (p - std::nearbyint(p)) + err;
}

}  // namespace

double u_modulus(double alpha, std::uint64_t H) noexcept {
  const double den = sin_2pi(alpha / 2.0);
  if (den == 0.0) return static_cast<double>(H);
  const double num = std::sin(2.0 * std::numbers::pi * reduced_product(H, alpha / 2.0));
  return std::fabs(num / den);
}

cplx geometric_sum(std::uint64_t count, double alpha) noexcept {
  if (count == 0) return {0.0, 0.0};
  const double den = sin_2pi(alpha / 2.0);
  if (den == 0.0) return {static_cast<double>(count), 0.0};
  const double num = std::sin(2.0 * std::numbers::pi * reduced_product(count, alpha / 2.0));
  return phase_of(count + 1, alpha / 2.0) * (num / den);
}

cplx GeneratingFunction::PowerSeries::at(double alpha) const noexcept {
  const std::size_t K = amp.size();
  if (K == 0) return {0.0, 0.0};
  CompensatedComplexSum total;

  if (ell == 1) {
    constexpr std::size_t kBlock = 64;
    std::array<double, kBlock> pr{};
    std::array<double, kBlock> pi{};
    const cplx w = phase_of(1, alpha);
    cplx p{1.0, 0.0};
    for (std::size_t j = 0; j < kBlock; ++j) {
      pr[j] = p.real();
      pi[j] = p.imag();
      p *= w;
    }
    for (std::size_t b = 0; b < K; b += kBlock) {
      const std::size_t len = std::min(kBlock, K - b);
      const double* a = amp.data() + b;
      double r0 = 0, r1 = 0, r2 = 0, r3 = 0, i0 = 0, i1 = 0, i2 = 0, i3 = 0;
      std::size_t j = 0;
      for (; j + 4 <= len; j += 4) {
        r0 += a[j] * pr[j];
        i0 += a[j] * pi[j];
        r1 += a[j + 1] * pr[j + 1];
        i1 += a[j + 1] * pi[j + 1];
        r2 += a[j + 2] * pr[j + 2];
        i2 += a[j + 2] * pi[j + 2];
        r3 += a[j + 3] * pr[j + 3];
        i3 += a[j + 3] * pi[j + 3];
      }
      for (; j < len; ++j) {
        r0 += a[j] * pr[j];
        i0 += a[j] * pi[j];
      }
      const cplx block{(r0 + r1) + (r2 + r3), (i0 + i1) + (i2 + i3)};
      total.add(phase_of(b + 1, alpha) * block);
    }
    return total.value();
  }

  // Forward differences of m^ell: D_0 = m^ell, D_{k+1} = Delta D_k, D_ell = ell!.
  // Phases e(D_k alpha) advance by one multiplication per order, resynced
  // from the exact integers every kResync steps.
  constexpr std::size_t kResync = 32;
  std::vector<std::uint64_t> diff(ell + 1);
  {
    std::vector<std::uint64_t> vals(ell + 1);
    for (int i = 0; i <= ell; ++i) vals[i] = ipow_saturating(static_cast<std::uint64_t>(i + 1), ell);
    for (int k = 0; k <= ell; ++k) {
      diff[k] = vals[0];
      for (int i = 0; i + 1 <= ell - k; ++i) vals[i] = vals[i + 1] - vals[i];
    }
  }
  std::vector<cplx> ph(ell + 1);
  for (std::size_t m = 1; m <= K; ++m) {
    if ((m - 1) % kResync == 0) {
      for (int k = 0; k <= ell; ++k) ph[k] = phase_of(diff[k], alpha);
    }
    const double a = amp[m - 1];
    if (a != 0.0) total.add(a * ph[0]);
    for (int k = 0; k < ell; ++k) {
      ph[k] *= ph[k + 1];
      diff[k] += diff[k + 1];
    }
  }
  return total.value();
}

GeneratingFunction::GeneratingFunction(const ExpSumSpec& spec) : spec_(spec) {
  const bool needs_ell = spec.family != Family::kF2 && spec.family != Family::kU;
  if (needs_ell && spec.ell < 1) throw InvalidArgument("ell must be a positive integer");
  if (spec.family == Family::kU) {
    if (spec.H < 1) throw InvalidArgument("U needs H >= 1");
  } else if (spec.N < 1) {
    throw InvalidArgument("generating functions need N >= 1");
  }
  const bool tilde = spec.family == Family::kSTilde || spec.family == Family::kETilde;
  if (tilde && !(spec.trunc_eps > 0.0 && spec.trunc_eps < 1.0)) {
    throw InvalidArgument("trunc_eps must lie in (0, 1)");
  }

  const int ell = spec.ell;
  const auto lambda_table = [](std::uint64_t K) {
    std::vector<double> amp(K, 0.0);
    if (K >= 2) {
      const SieveTable table = build_sieve(1, K);
      for (const auto& e : table.lambda_support()) amp[e.n - 1] = e.value;
    }
    return amp;
  };

  switch (spec.family) {
    case Family::kS:
    case Family::kT:
    case Family::kE: {
      const std::uint64_t K = iroot(spec.N, ell);
      if (spec.family != Family::kT) primary_ = {ell, lambda_table(K)};
      if (spec.family != Family::kS) {
        if (ell == 1) {
          geometric_ = K;
        } else {
          secondary_ = {ell, std::vector<double>(K, 1.0)};
        }
      }
      band_ = {1.0, static_cast<double>(ipow_saturating(K, ell))};
      break;
    }
    case Family::kF2: {
      std::vector<double> amp(spec.N);
      for (std::uint64_t m = 1; m <= spec.N; ++m) amp[m - 1] = 0.5 / std::sqrt(static_cast<double>(m));
      primary_ = {1, std::move(amp)};
      band_ = {1.0, static_cast<double>(spec.N)};
      break;
    }
    case Family::kU:
      geometric_ = spec.H;
      band_ = {1.0, static_cast<double>(spec.H)};
      break;
    case Family::kSTilde:
    case Family::kETilde: {
      const std::uint64_t K = tilde_length(ell, spec.N, spec.trunc_eps);
      if (K > kDefaultGridCap) throw CapacityError("tilde series too long: " + std::to_string(K));
      auto amp = lambda_table(K);
      const double n = static_cast<double>(spec.N);
      for (std::uint64_t m = 1; m <= K; ++m) {
        if (amp[m - 1] != 0.0) {
          amp[m - 1] *= std::exp(-static_cast<double>(ipow_saturating(m, ell)) / n);
        }
      }
      primary_ = {ell, std::move(amp)};
      // Frequencies whose weight exp(-n^l/N) is below ~1e-13 are negligible.
      const double effective = std::min(static_cast<double>(ipow_saturating(K, ell)), 30.0 * n);
      band_ = {spec.family == Family::kETilde ? 0.0 : 1.0, effective};
      gamma_over_ell_ = gamma_reciprocal(ell) / ell;
      break;
    }
  }
}

cplx GeneratingFunction::at(double alpha) const noexcept {
  switch (spec_.family) {
    case Family::kS:
    case Family::kF2:
    case Family::kSTilde:
      return primary_.at(alpha);
    case Family::kT:
      return geometric_ > 0 ? geometric_sum(geometric_, alpha) : secondary_.at(alpha);
    case Family::kE: {
      const cplx t = geometric_ > 0 ? geometric_sum(geometric_, alpha) : secondary_.at(alpha);
      return primary_.at(alpha) - t;
    }
    case Family::kU:
      return geometric_sum(geometric_, alpha);
    case Family::kETilde: {
      const cplx z = z_kernel(spec_.N, alpha);
      const cplx root = spec_.ell == 1   ? z
                        : spec_.ell == 2 ? std::sqrt(z)
                                         : std::pow(z, 1.0 / spec_.ell);
      return primary_.at(alpha) - gamma_over_ell_ / root;
    }
  }
  return {0.0, 0.0};
}

cplx GeneratingFunction::operator()(double alpha) const {
  if (!(alpha >= -0.5 && alpha <= 0.5)) {
    throw InvalidArgument("alpha must lie in [-1/2, 1/2], got " + std::to_string(alpha));
  }
  return at(alpha);
}

std::vector<std::pair<std::uint64_t, double>> GeneratingFunction::coefficients() const {
  std::vector<std::pair<std::uint64_t, double>> out;
  const auto push_series = [&out](const PowerSeries& s, double sign, std::uint64_t count) {
    for (std::uint64_t m = 1; m <= count; ++m) {
      const double a = m <= s.amp.size() ? s.amp[m - 1] : 0.0;
      out.emplace_back(ipow_saturating(m, s.ell), sign * a);
    }
  };
  switch (spec_.family) {
    case Family::kS:
    case Family::kF2:
      push_series(primary_, 1.0, primary_.amp.size());
      break;
    case Family::kT:
    case Family::kE: {
      const std::uint64_t K = geometric_ > 0 ? geometric_ : secondary_.amp.size();
      for (std::uint64_t m = 1; m <= K; ++m) {
        const double a = spec_.family == Family::kE ? primary_.amp[m - 1] - 1.0 : 1.0;
        out.emplace_back(ipow_saturating(m, spec_.ell), a);
      }
      break;
    }
    case Family::kU:
      for (std::uint64_t m = 1; m <= geometric_; ++m) out.emplace_back(m, 1.0);
      break;
    case Family::kSTilde:
    case Family::kETilde:
      throw InvalidArgument("tilde families have no finite coefficient list");
  }
  std::erase_if(out, [](const auto& c) { return c.second == 0.0; });
  return out;
}

cplx eval(const ExpSumSpec& spec, double alpha) {
  if (!(alpha >= -0.5 && alpha <= 0.5)) {
    throw InvalidArgument("alpha must lie in [-1/2, 1/2], got " + std::to_string(alpha));
  }
  return GeneratingFunction(spec).at(alpha);
}

double grid_alpha(std::uint64_t j, std::uint64_t M) noexcept {
  if (2 * j <= M) return static_cast<double>(j) / static_cast<double>(M);
  return -static_cast<double>(M - j) / static_cast<double>(M);
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// values[j] = sum_k coeff[k] e(k j / M).
std::vector<cplx> inverse_dft(std::vector<cplx> coeff) {
  const auto M = static_cast<int>(coeff.size());
  std::vector<cplx> out(coeff.size());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(coeff.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(M, in_ptr, out_ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

class GridBuilder {
 public:
  static ExpSumGrid build(const ExpSumSpec& spec, std::uint64_t M) {
    const GeneratingFunction g(spec);
    ExpSumGrid grid{spec, M, {}};
    const Family f = spec.family;
    if (f == Family::kU || f == Family::kF2) {
      grid.values.resize(M);
      for (std::uint64_t j = 0; j < M; ++j) grid.values[j] = g.at(grid_alpha(j, M));
      return grid;
    }

    std::vector<cplx> folded(M, cplx{0.0, 0.0});
    const auto fold = [&](const GeneratingFunction::PowerSeries& s, double sign) {
      for (std::uint64_t m = 1; m <= s.amp.size(); ++m) {
        if (s.amp[m - 1] != 0.0) {
          folded[ipow_saturating(m, s.ell) % M] += sign * s.amp[m - 1];
        }
      }
    };
    if (f != Family::kT) fold(g.primary_, 1.0);
    if (f == Family::kT || f == Family::kE) {
      const double sign = f == Family::kT ? 1.0 : -1.0;
      if (g.geometric_ > 0) {
        for (std::uint64_t m = 1; m <= g.geometric_; ++m) folded[m % M] += sign;
      } else {
        fold(g.secondary_, sign);
      }
    }
    grid.values = inverse_dft(std::move(folded));

    if (f == Family::kETilde) {
      for (std::uint64_t j = 0; j < M; ++j) {
        const double alpha = grid_alpha(j, M);
        const cplx z = z_kernel(spec.N, alpha);
        const cplx root = spec.ell == 1   ? z
                          : spec.ell == 2 ? std::sqrt(z)
                                          : std::pow(z, 1.0 / spec.ell);
        grid.values[j] -= g.gamma_over_ell_ / root;
      }
    }
    return grid;
  }
};

ExpSumGrid grid_eval(const ExpSumSpec& spec, std::uint64_t M, std::uint64_t grid_cap) {
  if (M < 1) throw InvalidArgument("grid size must be at least 1");
  if (M > grid_cap) {
    throw CapacityError("grid size " + std::to_string(M) + " exceeds the cap " + std::to_string(grid_cap));
  }
  return GridBuilder::build(spec, M);
}

void write_grid_csv(std::ostream& out, const ExpSumGrid& grid) {
  out << "j,alpha,re,im\n";
  char buf[128];
  for (std::uint64_t j = 0; j < grid.M; ++j) {
    std::snprintf(buf, sizeof buf, "%llu,%.12g,%.12g,%.12g\n", static_cast<unsigned long long>(j),
                  grid_alpha(j, grid.M), grid.values[j].real(), grid.values[j].imag());
    out << buf;
  }
}

BoundCheck check_u_bound(std::uint64_t H, std::uint64_t samples, std::uint64_t seed) {
  if (H < 1 || samples < 1) throw InvalidArgument("check_u_bound needs H >= 1 and samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  BoundCheck report;
  report.ceiling = 1.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double alpha = 0.0;
    while (alpha == 0.0) alpha = dist(rng);
    const double bound = std::min(static_cast<double>(H), 1.0 / std::fabs(alpha));
    const double ratio = u_modulus(alpha, H) / bound;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.witness_alpha = alpha;
    }
    if (ratio > report.ceiling) ++report.violations;
    ++report.samples;
  }
  return report;
}

double t2_f2_gap_ratio(std::uint64_t N, double alpha) {
  const GeneratingFunction t2({Family::kT, 2, N});
  const GeneratingFunction f2({Family::kF2, 1, N});
  return std::abs(t2(alpha) - f2(alpha)) / std::sqrt(1.0 + std::fabs(alpha) * static_cast<double>(N));
}

BoundCheck check_t2_f2_gap(std::uint64_t N, std::uint64_t samples, std::uint64_t seed,
                           double ceiling) {
  if (N < 4) throw InvalidArgument("check_t2_f2_gap needs N >= 4");
  const GeneratingFunction t2({Family::kT, 2, N});
  const GeneratingFunction f2({Family::kF2, 1, N});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  BoundCheck report;
  report.ceiling = ceiling;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double alpha = dist(rng);
    const double ratio =
        std::abs(t2(alpha) - f2(alpha)) / std::sqrt(1.0 + std::fabs(alpha) * static_cast<double>(N));
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.witness_alpha = alpha;
    }
    if (ratio > ceiling) ++report.violations;
    ++report.samples;
  }
  return report;
}

}  // namespace shortsum
