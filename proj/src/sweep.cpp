#include "shortsum/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "shortsum/errors.hpp"
#include "shortsum/representations.hpp"

namespace shortsum {

std::string_view to_string(SweepKind k) {
  return k == SweepKind::kPrimeSquare ? "prime+square" : "prime+prime-square";
}

SweepKind parse_sweep_kind(std::string_view name) {
  if (name == "prime+square") return SweepKind::kPrimeSquare;
  if (name == "prime+prime-square") return SweepKind::kPrimePrimeSquare;
  throw InvalidArgument("unknown sweep kind '" + std::string(name) + "'");
}

std::uint64_t HRule::apply(std::uint64_t N) const {
  if (mode == Mode::kFixed) return fixed;
  return static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(N), theta) + 0.5));
}

namespace {

double exp_factor(double L, double c) { return std::exp(-c * std::cbrt(L / std::log(L))); }

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using CellId = std::tuple<SweepKind, std::uint64_t, std::uint64_t>;

std::string csv_row(const SweepRecord& r) {
  std::string s(to_string(r.kind));
  s += ',' + std::to_string(r.N) + ',' + std::to_string(r.H);
  for (const double v : {r.sum, r.main, r.error, r.envelope, r.ratio, r.runtime_ms}) {
    s += ',' + fmt12(v);
  }
  return s + '\n';
}

SweepRecord parse_row(const std::string& line, std::size_t lineno) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
  if (f.size() != 9) {
    throw FormatError("sweep file line " + std::to_string(lineno) + ": expected 9 fields");
  }
  SweepRecord r;
  try {
    r.kind = parse_sweep_kind(f[0]);
    r.N = std::stoull(f[1]);
    r.H = std::stoull(f[2]);
    double* dst[] = {&r.sum, &r.main, &r.error, &r.envelope, &r.ratio, &r.runtime_ms};
    for (int i = 0; i < 6; ++i) *dst[i] = std::strtod(f[3 + i].c_str(), nullptr);
  } catch (const std::exception& e) {
    throw FormatError("sweep file line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!std::isfinite(r.sum)) r.status = "error";
  return r;
}

/// Reads complete rows of an existing sweep file, dropping a torn last line.
std::vector<SweepRecord> load_existing(const std::filesystem::path& path) {
  std::vector<SweepRecord> rows;
  if (!std::filesystem::exists(path)) return rows;
  std::string content;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }
  if (content.empty()) return rows;
  const std::size_t last_nl = content.rfind('\n');
  const std::size_t complete = last_nl == std::string::npos ? 0 : last_nl + 1;
  if (complete != content.size()) {
    std::filesystem::resize_file(path, complete);
    content.resize(complete);
  }
  std::stringstream ss(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kSweepCsvHeader) throw FormatError("sweep file has an unexpected header");
      continue;
    }
    if (!line.empty()) rows.push_back(parse_row(line, lineno));
  }
  return rows;
}

SweepRecord compute_cell(const SweepConfig& cfg, std::uint64_t N) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord r;
  r.kind = cfg.kind;
  r.N = N;
  r.H = cfg.h_rule.apply(N);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    if (r.H < 1 || r.H > N) throw InvalidArgument("H = " + std::to_string(r.H) + " outside [1, N]");
    r.warnings = range_warnings(cfg.envelope, N, r.H, cfg.c);
    const RepKind kind =
        cfg.kind == SweepKind::kPrimeSquare ? RepKind::prime() : RepKind::double_prime();
    r.sum = interval_sum_fast(kind, N, r.H, cfg.limits);
    r.main = static_cast<double>(r.H) * std::sqrt(static_cast<double>(N));
    r.error = r.sum - r.main;
    r.envelope = theorem_envelope(cfg.envelope, N, r.H, cfg.c);
    r.ratio = std::fabs(r.error) / r.envelope;
  } catch (const Error& e) {
    r.status = std::string("error: ") + e.what();
    r.sum = r.main = r.error = r.envelope = r.ratio = nan;
  }
  if (cfg.record_timings) {
    r.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

}  // namespace

double theorem_envelope(Theorem t, std::uint64_t N, std::uint64_t H, double c) {
  if (N < 3) throw InvalidArgument("envelopes need N >= 3");
  const double n = static_cast<double>(N);
  const double h = static_cast<double>(H);
  const double L = std::log(n);
  switch (t) {
    case Theorem::kT1:
      return std::pow(n, 0.75) * L * L + std::pow(h, 1.5) * std::pow(L, 1.5) + h * std::cbrt(n) * L;
    case Theorem::kT2:
      return (std::sqrt(h) * std::pow(n, 0.75) + h * std::sqrt(n)) * exp_factor(L, c);
    case Theorem::kT3:
      return h * h / std::sqrt(n) + std::pow(n, 0.75) * L * L * L + h * std::cbrt(n) * L * L;
    case Theorem::kT4:
      return h * std::sqrt(n) * exp_factor(L, c);
  }
  return 0.0;
}

std::vector<std::string> range_warnings(Theorem t, std::uint64_t N, std::uint64_t H, double c) {
  std::vector<std::string> w;
  const double n = static_cast<double>(N);
  const double h = static_cast<double>(H);
  const double L = std::log(n);
  const std::string tag = " (factor-10 stand-in for an asymptotic condition)";
  if (h > n / 10.0) w.push_back("H > N/10: outside the short-interval regime" + tag);
  switch (t) {
    case Theorem::kT1:
      if (h < 10.0 * std::pow(n, 0.25) * L * L) w.push_back("T1: H < 10 N^{1/4} L^2" + tag);
      if (h > n / (10.0 * L * L * L)) w.push_back("T1: H > N / (10 L^3)" + tag);
      break;
    case Theorem::kT2:
      if (h < std::sqrt(n) * exp_factor(L, c)) w.push_back("T2: H < N^{1/2} exp(-c (L/log L)^{1/3})");
      break;
    case Theorem::kT3:
      if (h < 10.0 * std::pow(n, 0.25) * L * L * L) w.push_back("T3: H < 10 N^{1/4} L^3" + tag);
      break;
    case Theorem::kT4:
      if (h < std::pow(n, 7.0 / 12.0)) w.push_back("T4: H < N^{7/12}");
      break;
  }
  return w;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double factor) {
  if (start < 1 || stop < start) throw InvalidArgument("geometric grid needs 1 <= start <= stop");
  if (!(factor > 1.0)) throw InvalidArgument("geometric grid factor must exceed 1");
  std::vector<std::uint64_t> out;
  for (int k = 0;; ++k) {
    const double v = std::round(static_cast<double>(start) * std::pow(factor, k));
    if (v > static_cast<double>(stop) * (1.0 + 1e-12)) break;
    const auto u = static_cast<std::uint64_t>(v);
    if (out.empty() || u != out.back()) out.push_back(u);
  }
  return out;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.workers < 1) throw InvalidArgument("workers must be at least 1");
  if (config.h_rule.mode == HRule::Mode::kExponent &&
      !(config.h_rule.theta > 0.0 && config.h_rule.theta <= 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1]");
  }

  std::vector<SweepRecord> existing;
  std::ofstream out;
  if (!config.output_path.empty()) {
    const std::filesystem::path path(config.output_path);
    existing = load_existing(path);
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out.open(path, std::ios::binary | std::ios::app);
    if (!out) throw FormatError("cannot open " + config.output_path);
    if (fresh) out << kSweepCsvHeader << '\n' << std::flush;
  }

  std::vector<SweepRecord> records(config.N_grid.size());
  std::vector<bool> have(config.N_grid.size(), false);
  std::vector<std::size_t> pending;
  std::set<CellId> seen;
  for (std::size_t i = 0; i < config.N_grid.size(); ++i) {
    const std::uint64_t N = config.N_grid[i];
    const CellId id{config.kind, N, config.h_rule.apply(N)};
    for (const auto& r : existing) {
      if (CellId{r.kind, r.N, r.H} == id) {
        records[i] = r;
        have[i] = true;
        break;
      }
    }
    if (!have[i] && seen.insert(id).second) pending.push_back(i);
  }

  for (std::size_t b = 0; b < pending.size(); b += config.workers) {
    const std::size_t e = std::min(pending.size(), b + config.workers);
    std::vector<std::future<SweepRecord>> jobs;
    for (std::size_t k = b; k < e; ++k) {
      const std::uint64_t N = config.N_grid[pending[k]];
      jobs.push_back(std::async(config.workers > 1 ? std::launch::async : std::launch::deferred,
                                [&config, N] { return compute_cell(config, N); }));
    }
    for (std::size_t k = b; k < e; ++k) {
      records[pending[k]] = jobs[k - b].get();
      have[pending[k]] = true;
      if (out.is_open()) out << csv_row(records[pending[k]]) << std::flush;
    }
  }

  // Repeated grid values share their first computation.
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (have[i]) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (config.N_grid[j] == config.N_grid[i]) {
        records[i] = records[j];
        break;
      }
    }
  }
  return records;
}

FitResult fit_error_exponent(std::span<const SweepRecord> records) {
  std::vector<double> xs, ys;
  FitResult fit;
  for (const auto& r : records) {
    if (!r.ok() || !std::isfinite(r.error) || r.error == 0.0) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(r.N)));
    ys.push_back(std::log(std::fabs(r.error)));
  }
  if (xs.size() < 3) {
    throw InsufficientData("exponent fit needs at least 3 usable cells, got " +
                           std::to_string(xs.size()));
  }
  const double m = static_cast<double>(xs.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / m;
  const double my = sy.value() / m;
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0.0) throw InsufficientData("exponent fit needs at least two distinct N");
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  CompensatedSum ss_res;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res.add(res * res);
  }
  const double ss_tot = syy.value();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res.value() / ss_tot : 1.0;
  fit.points_used = xs.size();
  return fit;
}

}  // namespace shortsum
