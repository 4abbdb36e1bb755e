#include "pmlab/config_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pmlab/errors.hpp"

namespace pmlab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw ConfigError("config_parse", what);
}

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) bad("\"" + ctx + "\" must be a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& ctx) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      bad("unknown key \"" + ctx + item.key() + "\"");
}

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) bad("missing key \"" + ctx + key + "\"");
  return j.at(key);
}

double need_num(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) bad("key \"" + ctx + key + "\" must be a number");
  return v.get<double>();
}

double opt_num(const json& j, const char* key, const std::string& ctx, double dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number()) bad("key \"" + ctx + key + "\" must be a number");
  return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_integer()) bad("key \"" + ctx + key + "\" must be an integer");
  return v.get<int>();
}

int opt_int(const json& j, const char* key, const std::string& ctx, int dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number_integer()) bad("key \"" + ctx + key + "\" must be an integer");
  return v.get<int>();
}

std::string need_str(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) bad("key \"" + ctx + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> num_array(const json& v, const std::string& where) {
  if (!v.is_array()) bad("\"" + where + "\" must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) bad("\"" + where + "\" must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

DomainRef parse_domain(const json& j) {
  require_object(j, "domain");
  std::string variant = need_str(j, "variant", "domain.");
  if (variant == "interval") {
    reject_unknown(j, {"variant", "x_left", "x_right"}, "domain.");
    return Interval{need_num(j, "x_left", "domain."), need_num(j, "x_right", "domain.")};
  }
  if (variant == "ball") {
    reject_unknown(j, {"variant", "dim", "radius"}, "domain.");
    return Ball{need_int(j, "dim", "domain."), need_num(j, "radius", "domain.")};
  }
  bad("key \"domain.variant\" must be \"interval\" or \"ball\", got \"" + variant + "\"");
}

Kernel parse_kernel(const json& j) {
  require_object(j, "kernel");
  std::string variant = need_str(j, "variant", "kernel.");
  if (variant == "constant") {
    reject_unknown(j, {"variant", "value"}, "kernel.");
    return ConstantKernel{need_num(j, "value", "kernel.")};
  }
  if (variant == "space_product") {
    reject_unknown(j, {"variant", "face_values", "c0", "c1"}, "kernel.");
    SpaceProductKernel k;
    k.face_values = num_array(need(j, "face_values", "kernel."), "kernel.face_values");
    k.profile = AffineProfile{need_num(j, "c0", "kernel."), need_num(j, "c1", "kernel.")};
    return k;
  }
  if (variant == "tabulated") {
    reject_unknown(j, {"variant", "rows"}, "kernel.");
    const json& rows = need(j, "rows", "kernel.");
    if (!rows.is_array()) bad("\"kernel.rows\" must be an array of arrays");
    TabulatedKernel k;
    for (const auto& row : rows) k.rows.push_back(num_array(row, "kernel.rows"));
    return k;
  }
  bad("key \"kernel.variant\" must be \"constant\", \"space_product\" or "
      "\"tabulated\", got \"" + variant + "\"");
}

InitialData parse_initial(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  std::string variant = need_str(j, "variant", ctx + ".");
  if (variant == "constant") {
    reject_unknown(j, {"variant", "value"}, ctx + ".");
    return ConstantValue{need_num(j, "value", ctx + ".")};
  }
  if (variant == "sampled") {
    reject_unknown(j, {"variant", "values"}, ctx + ".");
    return Sampled{num_array(need(j, "values", ctx + "."), ctx + ".values")};
  }
  if (variant == "closed_form") {
    reject_unknown(j, {"variant", "name", "params"}, ctx + ".");
    ClosedForm f;
    f.name = need_str(j, "name", ctx + ".");
    auto params = num_array(need(j, "params", ctx + "."), ctx + ".params");
    if (params.size() != 4) bad("\"" + ctx + ".params\" must have exactly 4 entries");
    std::copy(params.begin(), params.end(), f.params.begin());
    return f;
  }
  bad("key \"" + ctx + ".variant\" must be \"constant\", \"sampled\" or "
      "\"closed_form\", got \"" + variant + "\"");
}

SolverConfig parse_solver(const json& j) {
  require_object(j, "solver");
  reject_unknown(j,
                 {"n_cells", "cfl_safety", "dt_min", "u_max_threshold", "m_schedule",
                  "j_tol", "m_tol", "j_max", "series_samples", "record_cap", "horizon"},
                 "solver.");
  SolverConfig c;
  c.n_cells = opt_int(j, "n_cells", "solver.", c.n_cells);
  c.cfl_safety = opt_num(j, "cfl_safety", "solver.", c.cfl_safety);
  c.dt_min = opt_num(j, "dt_min", "solver.", c.dt_min);
  c.u_max_threshold = opt_num(j, "u_max_threshold", "solver.", c.u_max_threshold);
  if (j.contains("m_schedule")) {
    c.m_schedule.clear();
    const json& ms = j.at("m_schedule");
    if (!ms.is_array()) bad("\"solver.m_schedule\" must be an array of integers");
    for (const auto& e : ms) {
      if (!e.is_number_integer())
        bad("\"solver.m_schedule\" must contain only integers");
      c.m_schedule.push_back(e.get<int>());
    }
  }
  c.j_tol = opt_num(j, "j_tol", "solver.", c.j_tol);
  c.m_tol = opt_num(j, "m_tol", "solver.", c.m_tol);
  c.j_max = opt_int(j, "j_max", "solver.", c.j_max);
  c.series_samples = opt_int(j, "series_samples", "solver.", c.series_samples);
  c.record_cap = opt_int(j, "record_cap", "solver.", c.record_cap);
  c.horizon = opt_num(j, "horizon", "solver.", c.horizon);
  return c;
}

json domain_json(const DomainRef& d) {
  json j;
  if (const auto* iv = std::get_if<Interval>(&d)) {
    j["variant"] = "interval";
    j["x_left"] = iv->x_left;
    j["x_right"] = iv->x_right;
  } else {
    const auto& b = std::get<Ball>(d);
    j["variant"] = "ball";
    j["dim"] = b.dim;
    j["radius"] = b.radius;
  }
  return j;
}

json kernel_json(const Kernel& k) {
  json j;
  if (const auto* c = std::get_if<ConstantKernel>(&k)) {
    j["variant"] = "constant";
    j["value"] = c->k0;
  } else if (const auto* sp = std::get_if<SpaceProductKernel>(&k)) {
    j["variant"] = "space_product";
    j["face_values"] = sp->face_values;
    j["c0"] = sp->profile.c0;
    j["c1"] = sp->profile.c1;
  } else {
    j["variant"] = "tabulated";
    j["rows"] = std::get<TabulatedKernel>(k).rows;
  }
  return j;
}

json initial_json(const InitialData& u0) {
  json j;
  if (const auto* c = std::get_if<ConstantValue>(&u0)) {
    j["variant"] = "constant";
    j["value"] = c->value;
  } else if (const auto* s = std::get_if<Sampled>(&u0)) {
    j["variant"] = "sampled";
    j["values"] = s->values;
  } else {
    const auto& f = std::get<ClosedForm>(u0);
    j["variant"] = "closed_form";
    j["name"] = f.name;
    j["params"] = f.params;
  }
  return j;
}

json solver_json(const SolverConfig& c) {
  json j;
  j["n_cells"] = c.n_cells;
  j["cfl_safety"] = c.cfl_safety;
  j["dt_min"] = c.dt_min;
  j["u_max_threshold"] = c.u_max_threshold;
  j["m_schedule"] = c.m_schedule;
  j["j_tol"] = c.j_tol;
  j["m_tol"] = c.m_tol;
  j["j_max"] = c.j_max;
  j["series_samples"] = c.series_samples;
  j["record_cap"] = c.record_cap;
  j["horizon"] = c.horizon;
  return j;
}

json config_json(const RunConfig& rc) {
  json j;
  j["mu"] = rc.problem.mu;
  j["nu"] = rc.problem.nu;
  j["a"] = rc.problem.a;
  j["l"] = rc.problem.l;
  j["horizon"] = rc.problem.horizon;
  j["domain"] = domain_json(rc.problem.domain);
  j["kernel"] = kernel_json(rc.problem.kernel);
  j["initial"] = initial_json(rc.problem.initial);
  j["solver"] = solver_json(rc.solver);
  if (rc.layer_depth > 0.0) j["layer_depth"] = rc.layer_depth;
  if (rc.initial_low) j["initial_low"] = initial_json(*rc.initial_low);
  if (rc.initial_high) j["initial_high"] = initial_json(*rc.initial_high);
  return j;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  require_object(j, "config");
  reject_unknown(j,
                 {"mu", "nu", "a", "l", "horizon", "domain", "kernel", "initial",
                  "solver", "layer_depth", "initial_low", "initial_high"},
                 "");
  RunConfig rc;
  rc.problem.mu = need_num(j, "mu", "");
  rc.problem.nu = need_num(j, "nu", "");
  rc.problem.a = need_num(j, "a", "");
  rc.problem.l = need_num(j, "l", "");
  rc.problem.horizon = need_num(j, "horizon", "");
  rc.problem.domain = parse_domain(need(j, "domain", ""));
  rc.problem.kernel = parse_kernel(need(j, "kernel", ""));
  rc.problem.initial = parse_initial(need(j, "initial", ""), "initial");
  if (j.contains("solver")) rc.solver = parse_solver(j.at("solver"));
  rc.layer_depth = opt_num(j, "layer_depth", "", 0.0);
  if (j.contains("initial_low"))
    rc.initial_low = parse_initial(j.at("initial_low"), "initial_low");
  if (j.contains("initial_high"))
    rc.initial_high = parse_initial(j.at("initial_high"), "initial_high");
  return rc;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

std::string dump_config(const RunConfig& rc) {
  return config_json(rc).dump(2) + "\n";
}

std::string config_hash(const RunConfig& rc) {
  std::string canon = config_json(rc).dump();  // keys sorted, round-trip doubles
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ------------------------------------------------------------- artifacts ----

std::string series_csv(const std::vector<SeriesSample>& series) {
  std::string out = "t,sup_norm,l1_norm,boundary_influx\n";
  for (const auto& s : series)
    out += g17(s.t) + "," + g17(s.sup_norm) + "," + g17(s.l1_norm) + "," +
           g17(s.boundary_influx) + "\n";
  return out;
}

std::string field_csv(const Grid& grid, const GridField& field) {
  std::string out = "coord,value\n";
  for (int i = 0; i < grid.n; ++i)
    out += g17(grid.centers[i]) + "," + g17(field.values[i]) + "\n";
  return out;
}

std::string verdict_json(const RegimeVerdict& v, const RegimeInputs& in) {
  json j;
  j["verdict"] = to_string(v.verdict);
  j["clause"] = v.clause;
  j["thresholds_evaluated"] = v.thresholds_evaluated;
  j["inputs"] = {{"mu", in.mu},     {"nu", in.nu},       {"l", in.l},
                 {"a", in.a},       {"K_inf", in.K_inf}, {"k0", in.k0},
                 {"theta", in.theta}};
  j["geometry"] = {{"volume", in.geom.volume},
                   {"perimeter", in.geom.perimeter},
                   {"inradius", in.geom.inradius},
                   {"jac_sup", in.geom.jac_sup},
                   {"jac_inf", in.geom.jac_inf},
                   {"layer_depth", in.geom.layer_depth}};
  return j.dump(2) + "\n";
}

namespace {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::CompletedBounded: return "completed_bounded";
    case RunStatus::BlowUpDetected: return "blow_up_detected";
    case RunStatus::InconclusiveResolutionLimit: return "inconclusive_resolution_limit";
  }
  return "?";
}

}  // namespace

std::string summary_json(const SimulationOutcome& o, const RegimeVerdict& v,
                         const ConsistencyReport& consistency) {
  json j;
  j["status"] = status_name(o.status);
  j["horizon_used"] = o.horizon_used;
  j["grid_cells"] = o.grid_cells;
  j["series_samples"] = o.series.size();
  if (!o.series.empty()) {
    j["final_sup_norm"] = o.series.back().sup_norm;
    j["final_l1_norm"] = o.series.back().l1_norm;
    j["final_time"] = o.series.back().t;
  }
  if (o.blowup) {
    j["blowup"] = {{"t_star_estimate", o.blowup->t_star_estimate},
                   {"fit_exponent", o.blowup->fit_exponent},
                   {"fit_quality", o.blowup->fit_quality}};
  }
  j["inner_iterations"] = o.trace.inner.size();
  j["outer_comparisons"] = o.trace.outer.size();
  j["verdict"] = {{"verdict", to_string(v.verdict)},
                  {"clause", v.clause},
                  {"thresholds_evaluated", v.thresholds_evaluated}};
  j["consistency"] = {{"flag", to_string(consistency.flag)}, {"note", consistency.note}};
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunConfig& rc, const std::string& outcome,
                          double duration_seconds) {
  json j;
  j["tool"] = "pmlab";
  j["version"] = kToolVersion;
  j["config"] = config_json(rc);
  j["hash"] = config_hash(rc);
  j["duration_seconds"] = duration_seconds;
  j["outcome"] = outcome;
  return j.dump(2) + "\n";
}

std::string certify_report_json(const BarrierCheckReport& rep) {
  json j;
  j["family"] = family_name(rep.family);
  j["role"] = rep.role == BarrierRole::Super ? "super" : "sub";
  j["verdict"] = rep.verdict == CertVerdict::Certified ? "certified" : "violated";
  j["interior_margin"] = rep.interior_margin;
  j["boundary_margin"] = rep.boundary_margin;
  j["initial_margin"] = rep.initial_margin;
  if (std::isfinite(rep.side_margin)) j["side_margin"] = rep.side_margin;
  j["tol_interior"] = rep.tol_interior;
  j["tol_boundary"] = rep.tol_boundary;
  j["worst_coord"] = rep.worst_coord;
  j["worst_time"] = rep.worst_time;
  j["grid_cells"] = rep.grid_cells;
  j["time_samples"] = rep.time_samples;
  return j.dump(2) + "\n";
}

std::string compare_report_json(const OrderingReport& rep, double tolerance) {
  json j;
  j["min_gap"] = rep.min_gap;
  j["sup_scale"] = rep.sup_scale;
  j["worst_coord"] = rep.worst_coord;
  j["worst_time"] = rep.worst_time;
  j["tolerance"] = tolerance;
  j["ordered"] = rep.min_gap >= -tolerance * rep.sup_scale;
  j["low_status"] = status_name(rep.low.status);
  j["high_status"] = status_name(rep.high.status);
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------ filesystem ----

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("output_unwritable", "cannot open for writing: " + path);
  f << content;
  f.flush();
  if (!f) throw ConfigError("output_unwritable", "short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config_unreadable", "cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace pmlab
