#include "shortsum/report_json.hpp"

#include <cmath>

#include "shortsum/errors.hpp"

namespace shortsum {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// NaN and infinities become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void to_json(json& j, const ExpSumSpec& s) {
  j = json{{"family", to_string(s.family)}, {"ell", s.ell}, {"N", s.N}};
  if (s.family == Family::kU) j["H"] = s.H;
  if (s.family == Family::kSTilde || s.family == Family::kETilde) j["trunc_eps"] = s.trunc_eps;
}

void to_json(json& j, const MeanValueReport& r) {
  j = json{{"spec", r.spec},
           {"xi", r.xi},
           {"exact_value", opt(r.exact_value)},
           {"quad_value", opt(r.quad_value)},
           {"predicted_main", opt(r.predicted_main)},
           {"residual", opt(r.residual)},
           {"envelope", opt(r.envelope)},
           {"secondary_term", opt(r.secondary_term)},
           {"runtime_ms", r.runtime_ms}};
  if (r.residual && r.envelope) j["residual_over_envelope"] = *r.residual / *r.envelope;
  if (!r.predicted_main) j["main_term_note"] = "not applicable for ell = 1";
}

void to_json(json& j, const ErrorSumMeasurement& m) {
  j = json{{"value", m.value},
           {"rh_envelope", m.rh_envelope},
           {"ratio", m.value / m.rh_envelope}};
}

void to_json(json& j, const ArcConfig& c) {
  j = json{{"theorem", to_string(c.theorem)},
           {"N", c.N},
           {"H", c.H},
           {"c", c.c},
           {"trunc_eps", c.trunc_eps},
           {"quad", {{"min_panels", c.quad.min_panels},
                     {"max_depth", c.quad.max_depth},
                     {"target_tol", c.quad.target_tol},
                     {"fail_tol", c.quad.fail_tol}}},
           {"quadrature_cap", c.quadrature_cap}};
}

void to_json(json& j, const ArcReport& r) {
  json parts = json::array();
  for (const auto& p : r.parts) {
    parts.push_back({{"name", p.name},
                     {"arc", {p.lo, p.hi}},
                     {"re", p.value.real()},
                     {"im", p.value.imag()},
                     {"evaluations", p.evaluations}});
  }
  j = json{{"config", r.config},
           {"B", num(r.B)},
           {"arc_end", r.arc_end},
           {"parts", parts},
           {"parts_total", r.parts_total},
           {"imag_residue", r.imag_residue},
           {"main_term_exact", r.main_term_exact},
           {"main_term_paper", r.main_term_paper},
           {"direct_sum", r.direct_sum},
           {"identity_residual", r.identity_residual},
           {"relative_residual", r.identity_residual / std::fabs(r.direct_sum)},
           {"warnings", r.warnings},
           {"runtime_ms", r.runtime_ms}};
  if (r.partition) {
    j["partition"] = {{"major", r.partition->major},
                      {"minor", r.partition->minor},
                      {"total", r.partition->total},
                      {"dft_lhs", r.partition->dft_lhs},
                      {"relative_residual", r.partition->relative_residual}};
  }
}

void to_json(json& j, const DftIdentity& d) {
  j = json{{"lhs", d.lhs},
           {"rhs", d.rhs},
           {"M", d.M},
           {"relative_residual", std::fabs(d.lhs - d.rhs) / std::fabs(d.rhs)}};
}

void to_json(json& j, const MainTerm& m) {
  j = json{{"exact", m.exact},
           {"paper_form", m.paper_form},
           {"gap", m.gap},
           {"envelope_h2", m.envelope_h2},
           {"envelope_h32", m.envelope_h32}};
}

void to_json(json& j, const SweepConfig& c) {
  j = json{{"kind", to_string(c.kind)},
           {"N_grid", c.N_grid},
           {"envelope", to_string(c.envelope)},
           {"c", c.c},
           {"output", c.output_path},
           {"json_output", c.json_path},
           {"workers", c.workers},
           {"record_timings", c.record_timings}};
  if (c.h_rule.mode == HRule::Mode::kFixed) {
    j["H"] = c.h_rule.fixed;
  } else {
    j["theta"] = c.h_rule.theta;
  }
}

void to_json(json& j, const SweepRecord& r) {
  j = json{{"kind", to_string(r.kind)},
           {"N", r.N},
           {"H", r.H},
           {"sum", num(r.sum)},
           {"main", num(r.main)},
           {"error", num(r.error)},
           {"envelope", num(r.envelope)},
           {"ratio", num(r.ratio)},
           {"runtime_ms", r.runtime_ms},
           {"status", r.status},
           {"warnings", r.warnings}};
}

void to_json(json& j, const FitResult& f) {
  j = json{{"slope", f.slope},
           {"intercept", f.intercept},
           {"r_squared", f.r_squared},
           {"points_used", f.points_used},
           {"excluded", f.excluded}};
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("sweep config must be a JSON object");
  SweepConfig c;
  try {
    c.kind = parse_sweep_kind(j.value("kind", std::string("prime+square")));
    const json& grid = j.at("N_grid");
    if (grid.is_array()) {
      c.N_grid = grid.get<std::vector<std::uint64_t>>();
    } else if (grid.is_object()) {
      c.N_grid = geometric_grid(grid.at("start").get<std::uint64_t>(),
                                grid.at("stop").get<std::uint64_t>(),
                                grid.value("factor", 10.0));
    } else {
      throw FormatError("N_grid must be an array or {start, stop, factor}");
    }
    const bool has_h = j.contains("H");
    const bool has_theta = j.contains("theta");
    if (has_h == has_theta) throw FormatError("sweep config needs exactly one of H and theta");
    c.h_rule = has_h ? HRule::constant(j.at("H").get<std::uint64_t>())
                     : HRule::exponent(j.at("theta").get<double>());
    c.envelope = parse_theorem(j.value("envelope", std::string("T1")));
    c.c = j.value("c", 1.0);
    c.output_path = j.value("output", std::string());
    c.json_path = j.value("json_output", std::string());
    c.workers = j.value("workers", 1u);
    c.record_timings = j.value("record_timings", true);
  } catch (const json::exception& e) {
    throw FormatError(std::string("sweep config: ") + e.what());
  }
  return c;
}

json sweep_summary(const SweepConfig& config, std::span<const SweepRecord> records) {
  json out{{"config", config}, {"records", json::array()}};
  for (const auto& r : records) out["records"].push_back(r);
  try {
    out["fit"] = fit_error_exponent(records);
  } catch (const InsufficientData& e) {
    out["fit"] = nullptr;
    out["fit_error"] = e.what();
  }
  out["notes"] = {
      "envelopes use implied constant 1",
      "range warnings replace asymptotic conditions by factor-10 thresholds (pragmatic stand-in)"};
  return out;
}

}  // namespace shortsum
