#pragma once

// Sweeps of the interval sums over (N, H) grids, with error envelopes and
// log-log exponent fits.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shortsum/arcs.hpp"
#include "shortsum/arith.hpp"

namespace shortsum {

enum class SweepKind { kPrimeSquare, kPrimePrimeSquare };

/// "prime+square" / "prime+prime-square".
std::string_view to_string(SweepKind k);
SweepKind parse_sweep_kind(std::string_view name);

struct HRule {
  enum class Mode { kFixed, kExponent };
  Mode mode = Mode::kFixed;
  std::uint64_t fixed = 0;
  double theta = 0.0;

  static HRule constant(std::uint64_t h) { return {Mode::kFixed, h, 0.0}; }
  static HRule exponent(double t) { return {Mode::kExponent, 0, t}; }

  /// H for this N; the exponent rule rounds N^theta half up.
  std::uint64_t apply(std::uint64_t N) const;
};

struct SweepConfig {
  SweepKind kind = SweepKind::kPrimeSquare;
  std::vector<std::uint64_t> N_grid;
  HRule h_rule;
  Theorem envelope = Theorem::kT1;
  double c = 1.0;             // exponential-factor constant for T2/T4 envelopes
  std::string output_path;    // CSV; empty keeps results in memory only
  std::string json_path;      // optional JSON summary (written by the CLI)
  unsigned workers = 1;
  bool record_timings = true; // false writes runtime_ms = 0 for reproducible files
  SieveLimits limits;
};

struct SweepRecord {
  SweepKind kind = SweepKind::kPrimeSquare;
  std::uint64_t N = 0;
  std::uint64_t H = 0;
  double sum = 0.0;
  double main = 0.0;      // H N^{1/2}
  double error = 0.0;     // sum - main
  double envelope = 0.0;  // theorem error term with constant 1
  double ratio = 0.0;     // |error| / envelope
  double runtime_ms = 0.0;
  std::string status = "ok";
  std::vector<std::string> warnings;

  bool ok() const noexcept { return status == "ok"; }
};

/// Error term of the chosen theorem with all implied constants 1.
double theorem_envelope(Theorem t, std::uint64_t N, std::uint64_t H, double c);

/// Soft range checks. The asymptotic range conditions are replaced by
/// factor-10 thresholds, which is a pragmatic choice rather than a theorem.
std::vector<std::string> range_warnings(Theorem t, std::uint64_t N, std::uint64_t H, double c);

/// start, start*factor, ... up to stop (inclusive), rounded to integers.
std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double factor);

/// Computes one record per grid cell. With an output path, rows are appended
/// as they finish and cells already present in the file are not recomputed.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::size_t excluded = 0;  // zero, non-finite or failed cells
};

/// Least squares of log|error| against log N.
FitResult fit_error_exponent(std::span<const SweepRecord> records);

inline constexpr std::string_view kSweepCsvHeader =
    "kind,N,H,sum,main,error,envelope,ratio,runtime_ms";

}  // namespace shortsum
