#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "shortsum/errors.hpp"
#include "shortsum/report_json.hpp"
#include "shortsum/representations.hpp"
#include "shortsum/sweep.hpp"

using namespace shortsum;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shortsum_sweep_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

SweepRecord synthetic(std::uint64_t N, double error) {
  SweepRecord r;
  r.N = N;
  r.error = error;
  return r;
}

}  // namespace

TEST_CASE("single cell against the profile oracle") {
  SweepConfig cfg;
  cfg.N_grid = {10'000};
  cfg.h_rule = HRule::constant(100);
  const auto recs = run_sweep(cfg);
  REQUIRE(recs.size() == 1);
  const auto& r = recs[0];
  double oracle = 0.0;
  for (double v : rep_profile(RepKind::prime(), 10'000, 100).values) oracle += v;
  CHECK(r.ok());
  CHECK(r.sum == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(r.main == 10'000.0);
  CHECK(r.error == doctest::Approx(oracle - 10'000.0));
  CHECK(r.envelope == doctest::Approx(theorem_envelope(Theorem::kT1, 10'000, 100, 1.0)));
  CHECK(r.ratio == doctest::Approx(std::fabs(r.error) / r.envelope));
  CHECK(std::isfinite(r.ratio));
  CHECK(r.ratio > 0.0);
}

TEST_CASE("H rule") {
  CHECK(HRule::exponent(0.7).apply(1'000'000) == 15849);
  CHECK(HRule::exponent(0.5).apply(10'000) == 100);
  CHECK(HRule::constant(7).apply(123) == 7);
  SweepConfig cfg;
  cfg.N_grid = {1'000'000};
  cfg.h_rule = HRule::exponent(0.7);
  cfg.kind = SweepKind::kPrimePrimeSquare;
  cfg.envelope = Theorem::kT3;
  const auto recs = run_sweep(cfg);
  CHECK(recs[0].H == 15849);
  CHECK(recs[0].main == doctest::Approx(15849.0 * 1000.0).epsilon(1e-15));
  double oracle = 0.0;
  for (double v : rep_profile(RepKind::double_prime(), 1'000'000, 15849).values) oracle += v;
  CHECK(recs[0].sum == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("empty grid") {
  SweepConfig cfg;
  cfg.h_rule = HRule::constant(10);
  CHECK(run_sweep(cfg).empty());
}

TEST_CASE("envelopes") {
  const double n = 1e6, h = 1e3, L = std::log(n);
  CHECK(theorem_envelope(Theorem::kT1, 1'000'000, 1000, 1.0) ==
        doctest::Approx(std::pow(n, 0.75) * L * L + std::pow(h, 1.5) * std::pow(L, 1.5) + h * std::cbrt(n) * L));
  CHECK(theorem_envelope(Theorem::kT3, 1'000'000, 1000, 1.0) ==
        doctest::Approx(h * h / std::sqrt(n) + std::pow(n, 0.75) * L * L * L + h * std::cbrt(n) * L * L));
  const double f = std::exp(-0.5 * std::cbrt(L / std::log(L)));
  CHECK(theorem_envelope(Theorem::kT2, 1'000'000, 1000, 0.5) ==
        doctest::Approx((std::sqrt(h) * std::pow(n, 0.75) + h * std::sqrt(n)) * f));
  CHECK(theorem_envelope(Theorem::kT4, 1'000'000, 1000, 0.5) == doctest::Approx(h * std::sqrt(n) * f));
}

TEST_CASE("range warnings") {
  const auto has = [](const std::vector<std::string>& w, const char* needle) {
    for (const auto& s : w)
      if (s.find(needle) != std::string::npos) return true;
    return false;
  };
  const auto low = range_warnings(Theorem::kT1, 100'000'000, 10'000, 1.0);
  CHECK(has(low, "10 N^{1/4} L^2"));
  CHECK(has(low, "N / (10 L^3)"));
  CHECK(!has(range_warnings(Theorem::kT1, 100'000'000, 1000, 1.0), "N / (10 L^3)"));
  CHECK(range_warnings(Theorem::kT3, 100'000'000, 10'000'000, 1.0).empty());
  const auto w = range_warnings(Theorem::kT1, 1000, 500, 1.0);
  bool short_regime = false;
  for (const auto& s : w) short_regime = short_regime || s.find("N/10") != std::string::npos;
  CHECK(short_regime);
  CHECK(!range_warnings(Theorem::kT4, 1'000'000, 100, 1.0).empty());
  CHECK(range_warnings(Theorem::kT4, 1'000'000, 10'000, 1.0).empty());
}

TEST_CASE("geometric grid") {
  CHECK(geometric_grid(100'000, 100'000'000, 10.0) ==
        std::vector<std::uint64_t>{100'000, 1'000'000, 10'000'000, 100'000'000});
  CHECK(geometric_grid(10, 10, 2.0) == std::vector<std::uint64_t>{10});
  CHECK_THROWS_AS(geometric_grid(10, 5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(geometric_grid(10, 50, 1.0), InvalidArgument);
}

TEST_CASE("exponent fit") {
  std::vector<SweepRecord> recs;
  for (std::uint64_t N : {1000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) recs.push_back(synthetic(N, -std::pow(N, 0.75)));
  FitResult f = fit_error_exponent(recs);
  CHECK(f.slope == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points_used == 4);

  recs.clear();
  for (std::uint64_t N : {10ULL, 100ULL, 1000ULL}) recs.push_back(synthetic(N, 5.0));
  recs.push_back(synthetic(5000, 0.0));
  f = fit_error_exponent(recs);
  CHECK(std::fabs(f.slope) <= 1e-12);
  CHECK(f.excluded == 1);
  CHECK(f.points_used == 3);

  recs.pop_back();
  recs.pop_back();
  CHECK_THROWS_AS(fit_error_exponent(recs), InsufficientData);
}

TEST_CASE("per-cell failures are recorded and the sweep continues") {
  SweepConfig cfg;
  cfg.N_grid = {1000, 5000, 2000};
  cfg.h_rule = HRule::constant(100);
  cfg.limits.hard_cap = 3000;
  const auto recs = run_sweep(cfg);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].ok());
  CHECK(!recs[1].ok());
  CHECK(std::isnan(recs[1].sum));
  CHECK(recs[2].ok());

  cfg.N_grid = {50};
  cfg.limits = {};
  CHECK(!run_sweep(cfg)[0].ok());  // H > N
}

TEST_CASE("CSV output, determinism and resume") {
  SweepConfig cfg;
  cfg.N_grid = {10'000, 20'000, 40'000};
  cfg.h_rule = HRule::exponent(0.6);
  cfg.record_timings = false;

  const fs::path a = scratch("a.csv");
  const fs::path b = scratch("b.csv");
  cfg.output_path = a.string();
  run_sweep(cfg);
  cfg.output_path = b.string();
  cfg.workers = 3;
  run_sweep(cfg);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("\r") == std::string::npos);

  // Partial file: first row only, plus a torn line.
  const fs::path c = scratch("c.csv");
  {
    std::ofstream out(c, std::ios::binary);
    const auto first_two = text.substr(0, text.find('\n', text.find('\n') + 1) + 1);
    out << first_two << "prime+square,20000,38";
  }
  cfg.output_path = c.string();
  cfg.workers = 1;
  const auto recs = run_sweep(cfg);
  CHECK(slurp(c) == text);
  CHECK(recs.size() == 3);

  // Completed cells are read back rather than recomputed.
  std::string edited = text;
  const auto pos = edited.find(",10000,");
  const auto start = edited.find(',', pos + 7) + 1;
  const auto end = edited.find(',', start);
  edited.replace(start, end - start, "12345");
  {
    std::ofstream out(c, std::ios::binary | std::ios::trunc);
    out << edited;
  }
  const auto again = run_sweep(cfg);
  CHECK(again[0].sum == 12345.0);
  CHECK(slurp(c) == edited);

  {
    std::ofstream out(c, std::ios::binary | std::ios::trunc);
    out << "bogus header\n";
  }
  CHECK_THROWS_AS(run_sweep(cfg), FormatError);
  fs::remove_all(a.parent_path());
}

TEST_CASE("JSON config and summary") {
  const auto j = nlohmann::json::parse(R"({
    "kind": "prime+prime-square",
    "N_grid": {"start": 1000, "stop": 100000, "factor": 10},
    "theta": 0.7,
    "envelope": "T3",
    "c": 0.5,
    "workers": 2,
    "record_timings": false
  })");
  const SweepConfig cfg = sweep_config_from_json(j);
  CHECK(cfg.kind == SweepKind::kPrimePrimeSquare);
  CHECK(cfg.N_grid == std::vector<std::uint64_t>{1000, 10'000, 100'000});
  CHECK(cfg.h_rule.mode == HRule::Mode::kExponent);
  CHECK(cfg.envelope == Theorem::kT3);
  CHECK(cfg.workers == 2);
  CHECK(!cfg.record_timings);

  const auto recs = run_sweep(cfg);
  const nlohmann::json s = sweep_summary(cfg, recs);
  CHECK(s["records"].size() == 3);
  CHECK(s["fit"].is_object());
  CHECK(s["config"]["theta"] == 0.7);
  CHECK(s["records"][0]["status"] == "ok");

  CHECK_THROWS_AS(sweep_config_from_json(nlohmann::json::parse(R"({"N_grid": [10], "H": 1, "theta": 0.5})")), FormatError);
  CHECK_THROWS_AS(sweep_config_from_json(nlohmann::json::parse(R"({"H": 1})")), FormatError);
  CHECK_THROWS_AS(sweep_config_from_json(nlohmann::json::parse(R"({"N_grid": [10], "H": 1, "kind": "x"})")), InvalidArgument);
}
