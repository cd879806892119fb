#include "bose/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bose {

void JsonLines::write(const json& record) {
  json out;
  out["schema"] = kSchemaVersion;
  for (auto it = record.begin(); it != record.end(); ++it)
    if (it.key() != "schema") out[it.key()] = it.value();
  os_ << out.dump() << '\n';
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) throw std::invalid_argument("CSV row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << csv_escape(fields[i]);
  }
  os_ << "\r\n";
}

namespace {

// JSON has no infinities; encode them as null
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const KernelBoundsReport& r) {
  json j;
  j["d"] = r.geometry.d;
  j["L"] = r.geometry.L;
  j["bc"] = std::string(to_string(r.geometry.bc));
  j["beta"] = r.beta;
  j["c_prime"] = r.c_prime;
  j["max_violation"] = num(r.max_violation);
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"k", x.k},
                    {"t", x.t},
                    {"lower_bound_excess", num(x.lower_bound_excess)},
                    {"envelope_violation", num(x.envelope_violation)},
                    {"trace_lower_violation", num(x.trace_lower_violation)},
                    {"trace_upper_constant", num(x.trace_upper_constant)},
                    {"small_k_deviation", num(x.small_k_deviation)},
                    {"free_domination_constant", num(x.free_domination_constant)}});
  j["rows"] = rows;
  return j;
}

json to_json(const ConcentrationReport& r) {
  json j;
  j["bc"] = std::string(to_string(r.bc));
  j["d"] = r.d;
  j["beta"] = r.beta;
  j["rho"] = r.rho;
  j["rho_c"] = r.rho_c;
  j["eps"] = r.eps;
  j["R"] = r.R;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"N", x.N},
                    {"L", x.L},
                    {"T_N", x.T_N},
                    {"mean_R", x.mean_R},
                    {"stderr_R", x.stderr_R},
                    {"rho_c_R", x.rho_c_R},
                    {"prob_R", x.prob_R},
                    {"mean_short", x.mean_short},
                    {"stderr_short", x.stderr_short},
                    {"prob_short", x.prob_short},
                    {"mean_long", x.mean_long},
                    {"stderr_long", x.stderr_long}});
  j["rows"] = rows;
  j["decreasing_R"] = r.decreasing_R;
  j["decreasing_short"] = r.decreasing_short;
  return j;
}

json to_json(const PdReport& r) {
  json j;
  j["bc"] = std::string(to_string(r.bc));
  j["d"] = r.d;
  j["beta"] = r.beta;
  j["rho"] = r.rho;
  j["rho_c"] = r.rho_c;
  j["seed"] = r.seed;
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"N", x.N},
                    {"L", x.L},
                    {"samples", x.samples},
                    {"ks", x.ks},
                    {"long_mass", x.long_mass},
                    {"long_mass_stderr", x.long_mass_stderr},
                    {"median_l2_over_l1", x.median_l2_over_l1},
                    {"mean_l1_fraction", x.mean_l1_fraction}});
  j["rows"] = rows;
  j["ks_confidence"] = r.ks_confidence;
  j["ks_decreasing"] = r.ks_decreasing;
  j["mass_within_2sigma"] = r.mass_within_2sigma;
  j["median_ratio_decreasing"] = r.median_ratio_decreasing;
  return j;
}

json to_json(const ParetoLcltReport& r) {
  json j;
  j["n"] = r.n;
  j["a"] = r.a;
  j["window_lo"] = r.window_lo;
  j["window_hi"] = r.window_hi;
  j["support"] = r.support;
  j["step_deficit"] = r.step_deficit;
  j["max_deviation"] = r.max_deviation;
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"k", x.k}, {"m", x.m}, {"p", x.p}, {"ratio", x.ratio}, {"in_window", x.in_window}});
  j["rows"] = rows;
  return j;
}

json to_json(const FreeCellsReport& r) {
  json j;
  j["d"] = r.d;
  j["L"] = r.L;
  j["beta"] = r.beta;
  j["cells"] = r.cells;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["p_free"] = r.p_free;
  j["mark_mean"] = r.mark_mean;
  j["rho_c"] = r.rho_c;
  j["mean_cell_count"] = r.mean_cell_count;
  j["mean_cell_particles"] = r.mean_cell_particles;
  json bins = json::array();
  for (const auto& b : r.bins) bins.push_back({{"x_lo", b.x_lo}, {"x_hi", b.x_hi}, {"count", b.count}, {"pmf", b.pmf}});
  j["bins"] = bins;
  j["fitted_slope"] = r.fitted_slope;
  j["expected_slope"] = r.expected_slope;
  j["slope_ok"] = r.slope_ok;
  return j;
}

json to_json(const LocalCltReport& r) {
  json j;
  j["samples"] = r.samples;
  j["center"] = r.center;
  j["mean_theory"] = r.mean_theory;
  j["var_theory"] = r.var_theory;
  j["mean"] = r.mean;
  j["var"] = r.var;
  j["sup_distance"] = r.sup_distance;
  j["threshold"] = r.threshold;
  j["sandwich_min"] = num(r.sandwich_min);
  j["sandwich_max"] = num(r.sandwich_max);
  j["sandwich_constant"] = num(r.sandwich_constant);
  j["passed"] = r.passed;
  return j;
}

json to_json(const EigenResult& r) {
  return {{"sigma", r.sigma},         {"residual", r.residual}, {"lower_bound", r.lower_bound},
          {"continuum", r.continuum}, {"grid", r.grid},         {"iterations", r.iterations},
          {"converged", r.converged}};
}

json to_json(const OdlroReport& r) {
  json j;
  j["bc"] = std::string(to_string(r.bc));
  j["d"] = r.d;
  j["beta"] = r.beta;
  j["rho"] = r.rho;
  j["rho_c"] = r.rho_c;
  j["supercritical"] = r.supercritical;
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"N", x.N},
                    {"L", x.L},
                    {"volume", x.volume},
                    {"eigen", to_json(x.eig)},
                    {"sigma_over_volume", x.sigma_over_volume},
                    {"target", x.target},
                    {"rel_error", x.rel_error},
                    {"far_field_gamma", x.plateau.gamma},
                    {"far_field_main", x.plateau_main},
                    {"power_fit", {{"c0", x.power.c0}, {"A", x.power.A}, {"r2", x.power.r2}}},
                    {"exp_fit", {{"amp", x.exponential.amp}, {"rate", x.exponential.rate}, {"r2", x.exponential.r2}}}});
  j["rows"] = rows;
  j["within_tolerance"] = r.within_tolerance;
  j["monotone_trend"] = r.monotone_trend;
  j["variation"] = r.variation;
  j["bounded"] = r.bounded;
  j["fits_ok"] = r.fits_ok;
  j["verdict"] = to_string(r.verdict);
  return j;
}

}  // namespace bose
