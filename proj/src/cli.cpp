#include "shortsum/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "shortsum/arcs.hpp"
#include "shortsum/errors.hpp"
#include "shortsum/expsums.hpp"
#include "shortsum/meanvalue.hpp"
#include "shortsum/report_json.hpp"
#include "shortsum/representations.hpp"
#include "shortsum/sweep.hpp"

namespace shortsum {

namespace {

using nlohmann::json;

std::string fmt10(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

/// Writes to `path` when set, otherwise to `out`.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  write(f);
}

void emit_json(const std::string& path, std::ostream& out, const json& j) {
  emit(path, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

RepKind make_kind(const std::string& name, std::uint64_t cap) {
  const RepTag tag = parse_rep_tag(name);
  RepKind kind{tag, cap};
  if (kind.capped() && cap == 0) throw InvalidArgument("capped kinds need --cap");
  return kind;
}

struct SieveArgs {
  std::uint64_t lo = 1, hi = 0;
  std::string out;
};

struct RepArgs {
  std::string kind = "rprime";
  std::uint64_t cap = 0, n = 0, N = 0, H = 0;
  std::string out;
};

struct ExpArgs {
  std::string family = "S";
  int ell = 1;
  std::uint64_t N = 0, H = 0, M = 0;
  double trunc_eps = 1e-16;
  std::optional<double> alpha;
  std::string out;
};

struct MeanArgs {
  std::string mode = "lemma21";
  std::string family = "T";
  int ell = 2;
  std::uint64_t N = 0, H = 0, K = 0;
  double xi = 0.25;
  bool quad = false, weighted = false;
  std::string out;
};

struct ArcArgs {
  std::string theorem = "1";
  std::string mode = "decompose";
  std::uint64_t N = 0, H = 0;
  double c = 0.1, trunc_eps = 1e-16;
  int max_depth = QuadSettings{}.max_depth;
  std::string out;
};

struct SweepArgs {
  std::string config, kind = "prime+square", envelope = "T1", out, json_out;
  std::vector<std::uint64_t> grid;
  std::uint64_t start = 0, stop = 0, H = 0;
  double factor = 10.0, c = 1.0;
  std::optional<double> theta;
  unsigned workers = 0;
  bool no_timings = false;
};

void run_sieve(const SieveArgs& a, std::ostream& out) {
  std::string path = a.out;
  if (path.empty()) {
    if (const auto dir = env("SHORTSUM_CACHE_DIR")) {
      std::filesystem::create_directories(*dir);
      path = (std::filesystem::path(*dir) /
              ("sieve_" + std::to_string(a.lo) + "_" + std::to_string(a.hi) + ".psl"))
                 .string();
    }
  }
  const bool cached = !path.empty() && std::filesystem::exists(path);
  const SieveTable table = cached ? load_sieve(path) : build_sieve(a.lo, a.hi);
  if (cached && (table.lo() != a.lo || table.hi() != a.hi)) {
    throw FormatError("cache file " + path + " covers a different range");
  }
  if (!cached && !path.empty()) save_sieve(table, path);
  json j{{"lo", table.lo()},
         {"hi", table.hi()},
         {"primes", table.prime_count()},
         {"lambda_support", table.lambda_support().size()},
         {"cache", path.empty() ? json(nullptr) : json(path)},
         {"loaded_from_cache", cached}};
  out << j.dump(2) << '\n';
}

void run_rep(const RepArgs& a, std::ostream& out) {
  const RepKind kind = make_kind(a.kind, a.cap);
  if (a.n != 0) {
    out << fmt10(rep_value(kind, a.n)) << '\n';
    return;
  }
  if (a.N == 0 || a.H == 0) throw InvalidArgument("rep needs --n, or --N and --H for a profile");
  const RepProfile p = rep_profile(kind, a.N, a.H);
  emit(a.out, out, [&](std::ostream& s) { write_profile_csv(s, p); });
}

void run_sum(const RepArgs& a, std::ostream& out) {
  const RepKind kind = make_kind(a.kind, a.cap);
  if (a.N == 0 || a.H == 0) throw InvalidArgument("sum needs --N and --H");
  double v = 0.0;
  if (kind.tag == RepTag::kTildeDoublePrime) {
    CompensatedSum acc;
    for (const double x : rep_profile(kind, a.N, a.H).values) acc.add(x);
    v = acc.value();
  } else {
    v = interval_sum_fast(kind, a.N, a.H);
  }
  out << fmt10(v) << '\n';
}

void run_expsum(const ExpArgs& a, std::ostream& out) {
  const ExpSumSpec spec{parse_family(a.family), a.ell, a.N, a.H, a.trunc_eps};
  if (a.alpha.has_value() == (a.M != 0)) throw InvalidArgument("expsum needs exactly one of --alpha and --grid");
  if (a.alpha) {
    const cplx v = eval(spec, *a.alpha);
    out << fmt10(v.real()) << ' ' << fmt10(v.imag()) << '\n';
    return;
  }
  const ExpSumGrid g = grid_eval(spec, a.M);
  emit(a.out, out, [&](std::ostream& s) { write_grid_csv(s, g); });
}

void run_meanvalue(const MeanArgs& a, std::ostream& out) {
  json j;
  if (a.mode == "lemma21") {
    const auto [t, s] = lemma21_check(a.ell, a.N, a.xi, a.quad);
    j = json{{"T", t}, {"S", s}};
  } else if (a.mode == "exact" || a.mode == "quad") {
    const ExpSumSpec spec{parse_family(a.family), a.ell, a.N, a.H};
    MeanValueReport r;
    r.spec = spec;
    r.xi = a.xi;
    if (a.mode == "exact") {
      r.exact_value = exact_l2(GeneratingFunction(spec).coefficients(), a.xi);
    } else {
      r.quad_value = quad_l2(spec, a.xi);
    }
    j = r;
  } else if (a.mode == "error-sum") {
    j = error_sum_l2(a.ell, a.N, a.K, a.weighted);
    j["ell"] = a.ell;
    j["N"] = a.N;
    j["K"] = a.K;
    j["weighted"] = a.weighted;
  } else {
    throw InvalidArgument("unknown meanvalue mode '" + a.mode + "'");
  }
  emit_json(a.out, out, j);
}

void run_arcs(const ArcArgs& a, std::ostream& out) {
  const Theorem th = parse_theorem(a.theorem);
  json j;
  if (a.mode == "dft") {
    if (th == Theorem::kT3) throw InvalidArgument("dft mode covers theorems 1, 2 and 4");
    const DftKind kind = th == Theorem::kT4 ? DftKind::kPrimePrimeSquare : DftKind::kPrimeSquare;
    j = dft_identity(a.N, a.H, kind);
    j["theorem"] = to_string(th);
    j["N"] = a.N;
    j["H"] = a.H;
  } else if (a.mode == "decompose") {
    ArcConfig cfg;
    cfg.theorem = th;
    cfg.N = a.N;
    cfg.H = a.H;
    cfg.c = a.c;
    cfg.trunc_eps = a.trunc_eps;
    cfg.quad.max_depth = a.max_depth;
    j = decompose(cfg);
  } else {
    throw InvalidArgument("unknown arcs mode '" + a.mode + "'");
  }
  emit_json(a.out, out, j);
}

void run_sweep_cmd(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepConfig cfg;
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) throw InvalidArgument("cannot read " + a.config);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw FormatError(a.config + ": " + e.what());
    }
    cfg = sweep_config_from_json(j);
  } else {
    cfg.kind = parse_sweep_kind(a.kind);
    if (!a.grid.empty()) {
      cfg.N_grid = a.grid;
    } else if (a.start != 0) {
      cfg.N_grid = geometric_grid(a.start, a.stop == 0 ? a.start : a.stop, a.factor);
    }
    if (a.theta.has_value() == (a.H != 0)) throw InvalidArgument("sweep needs exactly one of --H and --theta");
    cfg.h_rule = a.theta ? HRule::exponent(*a.theta) : HRule::constant(a.H);
    cfg.envelope = parse_theorem(a.envelope);
    cfg.c = a.c;
  }
  if (!a.out.empty()) cfg.output_path = a.out;
  if (!a.json_out.empty()) cfg.json_path = a.json_out;
  if (a.no_timings) cfg.record_timings = false;
  if (const auto w = env("SHORTSUM_WORKERS")) {
    try {
      cfg.workers = static_cast<unsigned>(std::stoul(*w));
    } catch (const std::exception&) {
      throw InvalidArgument("SHORTSUM_WORKERS must be a positive integer");
    }
  }
  if (a.workers != 0) cfg.workers = a.workers;

  const auto records = run_sweep(cfg);
  for (const auto& r : records) {
    for (const auto& w : r.warnings) err << "warning: N=" << r.N << " H=" << r.H << ": " << w << '\n';
    if (!r.ok()) err << "cell N=" << r.N << " H=" << r.H << ": " << r.status << '\n';
  }
  const json summary = sweep_summary(cfg, records);
  emit_json(cfg.json_path, out, summary);
  if (!cfg.json_path.empty() && summary["fit"].is_object()) {
    out << "slope " << fmt10(summary["fit"]["slope"].get<double>()) << '\n';
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Short-interval sums of primes plus squares: exact counts, exponential sums, "
               "mean values and circle-method decompositions."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "shortsum 1.0");

  SieveArgs sv;
  auto* sieve = app.add_subcommand("sieve", "Build (or load from cache) a prime / Lambda table");
  sieve->add_option("--lo", sv.lo, "Lower end")->capture_default_str();
  sieve->add_option("--hi", sv.hi, "Upper end")->required();
  sieve->add_option("--out", sv.out, "Cache file (default: $SHORTSUM_CACHE_DIR/sieve_LO_HI.psl)");

  RepArgs rp;
  auto* rep = app.add_subcommand("rep", "Representation function at n, or a CSV profile over (N, N+H]");
  rep->add_option("--kind", rp.kind, "rprime | rdprime | cap-rprime | cap-rdprime | tilde-rdprime")
      ->capture_default_str();
  rep->add_option("--cap", rp.cap, "Cap for capped kinds");
  rep->add_option("--n", rp.n, "Single target n");
  rep->add_option("--N", rp.N, "Interval start");
  rep->add_option("--H", rp.H, "Interval length");
  rep->add_option("--out", rp.out, "CSV output file (default stdout)");

  RepArgs sm;
  auto* sum = app.add_subcommand("sum", "Sum of a representation function over (N, N+H]");
  sum->add_option("--kind", sm.kind, "Representation kind")->capture_default_str();
  sum->add_option("--cap", sm.cap, "Cap for capped kinds");
  sum->add_option("--N", sm.N, "Interval start")->required();
  sum->add_option("--H", sm.H, "Interval length")->required();

  ExpArgs ea;
  auto* exps = app.add_subcommand("expsum", "Evaluate a generating function at alpha or on a grid");
  exps->add_option("--family", ea.family, "S | T | E | F2 | U | S_TILDE | E_TILDE")->capture_default_str();
  exps->add_option("--ell", ea.ell, "Exponent")->capture_default_str();
  exps->add_option("--N", ea.N, "Length parameter");
  exps->add_option("--H", ea.H, "U length");
  exps->add_option("--trunc-eps", ea.trunc_eps, "Tilde truncation tolerance")->capture_default_str();
  exps->add_option("--alpha", ea.alpha, "Single point in [-1/2, 1/2]");
  exps->add_option("--grid", ea.M, "Grid size M (alpha_j = j/M)");
  exps->add_option("--out", ea.out, "CSV output file (default stdout)");

  MeanArgs ma;
  auto* mean = app.add_subcommand("meanvalue", "L2 mean values as JSON");
  mean->add_option("--mode", ma.mode, "lemma21 | exact | quad | error-sum")->capture_default_str();
  mean->add_option("--family", ma.family, "Family for exact/quad")->capture_default_str();
  mean->add_option("--ell", ma.ell, "Exponent")->capture_default_str();
  mean->add_option("--N", ma.N, "Length parameter");
  mean->add_option("--H", ma.H, "U length");
  mean->add_option("--xi", ma.xi, "Half-width of the integration range")->capture_default_str();
  mean->add_option("--K", ma.K, "error-sum: integrate over [-1/K, 1/K]");
  mean->add_flag("--quad", ma.quad, "lemma21: also run the quadrature path");
  mean->add_flag("--weighted", ma.weighted, "error-sum: use the exponentially weighted sums");
  mean->add_option("--out", ma.out, "JSON output file (default stdout)");

  ArcArgs aa;
  auto* arcs = app.add_subcommand("arcs", "Circle-method decomposition or DFT identity as JSON");
  arcs->add_option("--theorem", aa.theorem, "1 | 2 | 3 | 4")->capture_default_str();
  arcs->add_option("--mode", aa.mode, "decompose | dft")->capture_default_str();
  arcs->add_option("--N", aa.N, "Interval start")->required();
  arcs->add_option("--H", aa.H, "Interval length")->required();
  arcs->add_option("--c", aa.c, "Constant in B(N, c)")->capture_default_str();
  arcs->add_option("--trunc-eps", aa.trunc_eps, "Tilde truncation tolerance")->capture_default_str();
  arcs->add_option("--max-depth", aa.max_depth, "Quadrature refinement depth")->capture_default_str();
  arcs->add_option("--out", aa.out, "JSON output file (default stdout)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Sweep interval sums over an N grid; CSV rows plus JSON summary");
  sweep->add_option("--config", sw.config, "JSON config file (flags below override its outputs)");
  sweep->add_option("--kind", sw.kind, "prime+square | prime+prime-square")->capture_default_str();
  sweep->add_option("--N-grid", sw.grid, "Explicit N values")->delimiter(',');
  sweep->add_option("--N-start", sw.start, "Geometric grid start");
  sweep->add_option("--N-stop", sw.stop, "Geometric grid stop");
  sweep->add_option("--N-factor", sw.factor, "Geometric grid ratio")->capture_default_str();
  sweep->add_option("--H", sw.H, "Fixed H");
  sweep->add_option("--theta", sw.theta, "H = round(N^theta)");
  sweep->add_option("--envelope", sw.envelope, "T1 | T2 | T3 | T4")->capture_default_str();
  sweep->add_option("--c", sw.c, "Exponential-factor constant (T2/T4)")->capture_default_str();
  sweep->add_option("--out", sw.out, "CSV file (appended; completed cells are skipped)");
  sweep->add_option("--json", sw.json_out, "JSON summary file (default stdout)");
  sweep->add_option("--workers", sw.workers, "Worker threads (or $SHORTSUM_WORKERS)");
  sweep->add_flag("--no-timings", sw.no_timings, "Write runtime_ms = 0 for reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sieve) run_sieve(sv, out);
    else if (*rep) run_rep(rp, out);
    else if (*sum) run_sum(sm, out);
    else if (*exps) run_expsum(ea, out);
    else if (*mean) run_meanvalue(ma, out);
    else if (*arcs) run_arcs(aa, out);
    else if (*sweep) run_sweep_cmd(sw, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace shortsum
