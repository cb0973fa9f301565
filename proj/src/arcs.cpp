#include "shortsum/arcs.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "shortsum/errors.hpp"
#include "shortsum/expsums.hpp"
#include "shortsum/representations.hpp"

namespace shortsum {

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::kT1: return "T1";
    case Theorem::kT2: return "T2";
    case Theorem::kT3: return "T3";
    case Theorem::kT4: return "T4";
  }
  return "?";
}

Theorem parse_theorem(std::string_view name) {
  if (name.size() == 2 && (name[0] == 'T' || name[0] == 't')) name.remove_prefix(1);
  if (name == "1") return Theorem::kT1;
  if (name == "2") return Theorem::kT2;
  if (name == "3") return Theorem::kT3;
  if (name == "4") return Theorem::kT4;
  throw InvalidArgument("unknown theorem '" + std::string(name) + "' (expected 1-4)");
}

double b_value(std::uint64_t N, double c) {
  if (N < 3) throw InvalidArgument("B(N, c) needs N >= 3");
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  const double L = std::log(static_cast<double>(N));
  return std::exp(c * std::cbrt(L / std::log(L)));
}

DftIdentity dft_identity(std::uint64_t N, std::uint64_t H, DftKind kind) {
  if (N < 2) throw InvalidArgument("N must be at least 2");
  if (H < 1) throw InvalidArgument("H must be at least 1");
  const std::uint64_t M = 2 * N + H + 1;
  const bool double_prime = kind == DftKind::kPrimePrimeSquare;

  const ExpSumGrid s1 = grid_eval({Family::kS, 1, N}, M);
  const ExpSumGrid x2 = grid_eval({double_prime ? Family::kS : Family::kT, 2, N}, M);
  CompensatedComplexSum acc;
  for (std::uint64_t j = 0; j < M; ++j) {
    const double alpha = grid_alpha(j, M);
    // e(-N j / M) with the numerator reduced exactly.
    const double shift = -static_cast<double>((N % M) * j % M) / static_cast<double>(M);
    acc.add(s1.values[j] * x2.values[j] * geometric_sum(H, -alpha) * unit_phase(shift));
  }

  DftIdentity out;
  out.M = M;
  out.lhs = acc.value().real() / static_cast<double>(M);
  out.rhs = interval_sum_fast(double_prime ? RepKind::cap_double_prime(N) : RepKind::cap_prime(N),
                              N, H);
  return out;
}

MainTerm main_term(std::uint64_t N, std::uint64_t H, bool weighted) {
  if (N < 1 || H < 1) throw InvalidArgument("main_term needs N, H >= 1");
  const double n0 = static_cast<double>(N);
  CompensatedSum acc;
  for (std::uint64_t n = N + 1; n <= N + H; ++n) {
    const double x = static_cast<double>(n);
    acc.add(weighted ? std::exp(-x / n0) * std::sqrt(x) : std::sqrt(x));
  }
  MainTerm m;
  const double h = static_cast<double>(H);
  m.exact = acc.value();
  m.paper_form = h * std::sqrt(n0) / (weighted ? std::numbers::e : 1.0);
  m.gap = m.exact - m.paper_form;
  m.envelope_h2 = h * h / std::sqrt(n0);
  m.envelope_h32 = h * std::sqrt(h);
  return m;
}

namespace {

struct PartSpec {
  std::string name;
  double lo;
  double hi;
  double bandwidth;
  Integrand f;
};

ArcPart integrate_part(const PartSpec& p, double inner_width, const QuadSettings& settings) {
  ArcPart part{p.name, p.lo, p.hi, {}, 0};
  if (p.hi <= p.lo) return part;
  try {
    const QuadResult r = integrate_graded(p.f, p.lo, p.hi, p.bandwidth, inner_width, settings);
    // The integrand is conjugate-symmetric, so the symmetric arc gives twice the real part.
    part.value = {2.0 * r.value.real(), 0.0};
    part.evaluations = r.evaluations;
  } catch (const AccuracyError& e) {
    throw AccuracyError("part " + p.name + ": " + e.what(), e.coarse(), e.fine());
  }
  return part;
}

/// Remembers values at quadrature nodes; parts over the same arc share nodes.
class Memo {
 public:
  explicit Memo(const GeneratingFunction& g) : g_(g) {}
  cplx at(double alpha) const {
    const auto [it, fresh] = cache_.try_emplace(alpha);
    if (fresh) it->second = g_.at(alpha);
    return it->second;
  }
  const GeneratingFunction& function() const { return g_; }

 private:
  const GeneratingFunction& g_;
  mutable std::unordered_map<double, cplx> cache_;
};

double weighted_tilde_sum(std::uint64_t N, std::uint64_t H) {
  const RepProfile prof = rep_profile(RepKind::tilde_double_prime(), N, H);
  CompensatedSum acc;
  const double n0 = static_cast<double>(N);
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    acc.add(std::exp(-static_cast<double>(N + 1 + i) / n0) * prof.values[i]);
  }
  return acc.value();
}

}  // namespace

ArcReport decompose(const ArcConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t N = config.N;
  const std::uint64_t H = config.H;
  if (N < 3) throw InvalidArgument("decompose needs N >= 3");
  if (H < 1) throw InvalidArgument("H must be at least 1");
  if (N > config.quadrature_cap) {
    throw CapacityError("N = " + std::to_string(N) + " exceeds the quadrature cap " +
                        std::to_string(config.quadrature_cap) + "; use the dft mode");
  }

  ArcReport rep;
  rep.config = config;
  const Theorem th = config.theorem;
  const bool split = th == Theorem::kT2 || th == Theorem::kT4;
  if (split) {
    rep.B = b_value(N, config.c);
    const double a = rep.B / static_cast<double>(H);
    if (a >= 0.5) {
      rep.warnings.push_back("B/H >= 1/2: minor arc is empty and I4 = 0");
      rep.arc_end = 0.5;
    } else {
      rep.arc_end = a;
    }
  }

  const double n = static_cast<double>(N);
  const double h = static_cast<double>(H);
  const std::uint64_t K = isqrt(N);
  const double k2 = static_cast<double>(K * K);
  const auto weight = [N, H](double alpha) {
    return geometric_sum(H, -alpha) * phase_of(N, -alpha);
  };

  std::vector<PartSpec> specs;
  const double a = rep.arc_end;
  if (th == Theorem::kT3) {
    const GeneratingFunction e1_fn({Family::kETilde, 1, N, 0, config.trunc_eps});
    const GeneratingFunction e2_fn({Family::kETilde, 2, N, 0, config.trunc_eps});
    const Memo e1(e1_fn), e2(e2_fn);
    const double half_root_pi = 0.5 * std::sqrt(std::numbers::pi);
    const double bw = std::max(e1_fn.band().hi, e2_fn.band().hi) + n + h;
    specs.push_back({"I1", 0.0, 0.5, n + h, [&, half_root_pi](double al) {
                       const cplx z = z_kernel(N, al);
                       return half_root_pi / (z * std::sqrt(z)) * weight(al);
                     }});
    specs.push_back({"I2", 0.0, 0.5, bw, [&](double al) {
                       return e2.at(al) / z_kernel(N, al) * weight(al);
                     }});
    specs.push_back({"I3", 0.0, 0.5, bw, [&, half_root_pi](double al) {
                       return half_root_pi / std::sqrt(z_kernel(N, al)) * e1.at(al) * weight(al);
                     }});
    specs.push_back({"I4", 0.0, 0.5, bw, [&](double al) {
                       return e1.at(al) * e2.at(al) * weight(al);
                     }});
    for (const auto& s : specs) rep.parts.push_back(integrate_part(s, 1.0 / n, config.quad));
    rep.direct_sum = weighted_tilde_sum(N, H);
  } else {
    const GeneratingFunction s1_fn({Family::kS, 1, N});
    const GeneratingFunction t1({Family::kT, 1, N});
    const GeneratingFunction s2_fn({Family::kS, 2, N});
    const GeneratingFunction t2_fn({Family::kT, 2, N});
    const GeneratingFunction f2({Family::kF2, 1, N});
    const Memo s1(s1_fn), s2(s2_fn), t2(t2_fn);
    // Frequencies of every product lie in [2 - N - H, N + K^2 - 1 - N].
    const double bw = std::max(n + h, k2);
    const double major_end = split ? a : 0.5;

    if (th == Theorem::kT4) {
      specs.push_back({"I1", 0.0, major_end, bw,
                       [&](double al) { return t1.at(al) * t2.at(al) * weight(al); }});
      specs.push_back({"I2", 0.0, major_end, bw, [&](double al) {
                         return s1.at(al) * (s2.at(al) - t2.at(al)) * weight(al);
                       }});
    } else {
      specs.push_back({"I1", 0.0, major_end, bw,
                       [&](double al) { return t1.at(al) * f2.at(al) * weight(al); }});
      specs.push_back({"I2", 0.0, major_end, bw, [&](double al) {
                         return t1.at(al) * (t2.at(al) - f2.at(al)) * weight(al);
                       }});
    }
    specs.push_back({"I3", 0.0, major_end, bw, [&](double al) {
                       return (s1.at(al) - t1.at(al)) * t2.at(al) * weight(al);
                     }});
    const Memo& x2 = th == Theorem::kT4 ? s2 : t2;
    const Integrand unsplit = [&](double al) { return s1.at(al) * x2.at(al) * weight(al); };
    if (split) specs.push_back({"I4", a, 0.5, bw, unsplit});
    for (const auto& s : specs) rep.parts.push_back(integrate_part(s, 1.0 / n, config.quad));

    if (split) {
      PartitionCheck pc;
      pc.major = integrate_part({"major", 0.0, a, bw, unsplit}, 1.0 / n, config.quad).value.real();
      pc.minor = rep.parts.back().value.real();
      pc.total = pc.major + pc.minor;
      pc.dft_lhs = dft_identity(N, H, th == Theorem::kT4 ? DftKind::kPrimePrimeSquare
                                                         : DftKind::kPrimeSquare).lhs;
      pc.relative_residual = std::fabs(pc.total - pc.dft_lhs) / std::fabs(pc.dft_lhs);
      rep.partition = pc;
    }
    rep.direct_sum = interval_sum_fast(
        th == Theorem::kT4 ? RepKind::cap_double_prime(N) : RepKind::cap_prime(N), N, H);
  }

  CompensatedComplexSum total;
  for (const auto& p : rep.parts) total.add(p.value);
  rep.parts_total = total.value().real();
  rep.imag_residue = total.value().imag();
  rep.identity_residual = std::fabs(rep.parts_total - rep.direct_sum);

  const MainTerm mt = main_term(N, H, th == Theorem::kT3);
  rep.main_term_exact = mt.exact;
  rep.main_term_paper = mt.paper_form;
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace shortsum
