// pmlab — command-line front end for the absorption equation with nonlinear
// nonlocal boundary flux. Subcommands:
//
//   classify   regime verdict from the closed-form thresholds (no solve)
//   simulate   regularized double-iteration run + artifacts
//   certify    suggest + check a comparison function family on a grid
//   sweep      parameter grid of classify (optionally simulate) runs
//   compare    ordered-data comparison of two evolutions
//
// Exit codes: 0 success, 1 internal/violated, 2 bad config or usage,
// 3 inconclusive (resolution limit or search exhausted), 4 family ruled out
// by the problem's exponents.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pmlab/barriers.hpp"
#include "pmlab/classifier.hpp"
#include "pmlab/config_io.hpp"
#include "pmlab/errors.hpp"
#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"
#include "pmlab/solver.hpp"
#include "pmlab/sweep.hpp"

namespace {

using namespace pmlab;

void ensure_dir(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec)
    throw ConfigError("output_unwritable",
                      "cannot create output directory '" + out + "': " + ec.message());
}

// All JSON/CSV emitters end with a newline already; print verbatim.
void emit(const std::string& doc) { std::fputs(doc.c_str(), stdout); }

const char* status_word(RunStatus s) {
  switch (s) {
    case RunStatus::CompletedBounded: return "completed_bounded";
    case RunStatus::BlowUpDetected: return "blow_up_detected";
    default: return "inconclusive_resolution_limit";
  }
}

int status_exit(RunStatus s) { return s == RunStatus::InconclusiveResolutionLimit ? 3 : 0; }

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_classify(const std::string& config_path, const std::string& out) {
  RunConfig rc = load_config(config_path);
  ValidatedSpec vs = validate(rc.problem);
  RegimeInputs in = regime_inputs(vs, rc.layer_depth);
  RegimeVerdict v = classify(in);
  std::string doc = verdict_json(v, in);
  emit(doc);
  ensure_dir(out);
  write_text_file(out + "/verdict.json", doc);
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
  RunConfig rc = load_config(config_path);
  ValidatedSpec vs = validate(rc.problem);
  auto t0 = std::chrono::steady_clock::now();
  SimulationOutcome o = solve(vs, rc.solver);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RegimeInputs in = regime_inputs(vs, rc.layer_depth);
  RegimeVerdict v = classify(in);
  ConsistencyReport cc = cross_check(in, o);

  ensure_dir(out);
  write_text_file(out + "/series.csv", series_csv(o.series));
  Grid grid = build_grid(vs.spec.domain, o.grid_cells);
  write_text_file(out + "/final_field.csv", field_csv(grid, o.final_field));
  write_text_file(out + "/summary.json", summary_json(o, v, cc));
  write_text_file(out + "/manifest.json", manifest_json(rc, status_word(o.status), secs));

  std::printf("status=%s horizon=%s cells=%d samples=%zu", status_word(o.status),
              g17(o.horizon_used).c_str(), o.grid_cells, o.series.size());
  if (o.blowup)
    std::printf(" t_star=%s exponent=%s fit_r2=%s", g17(o.blowup->t_star_estimate).c_str(),
                g17(o.blowup->fit_exponent).c_str(), g17(o.blowup->fit_quality).c_str());
  std::printf(" verdict=%s consistency=%s artifacts=%s\n", to_string(v.verdict),
              to_string(cc.flag), out.c_str());
  return status_exit(o.status);
}

int cmd_certify(const std::string& config_path, const std::string& family_arg,
                const std::string& out) {
  RunConfig rc = load_config(config_path);
  ValidatedSpec vs = validate(rc.problem);
  std::optional<BarrierFamily> fam = family_from_name(family_arg);
  if (!fam)
    throw ConfigError("config_parse", "unknown barrier family '" + family_arg +
                                          "' (see README for the family list)");
  Grid grid = build_grid(vs.spec.domain, rc.solver.n_cells);
  BarrierSpec b = suggest_parameters(*fam, vs, grid);
  BarrierCheckReport rep = certify(b, vs, grid, rc.solver.series_samples);

  ensure_dir(out);
  std::string doc = certify_report_json(rep);
  emit(doc);
  write_text_file(out + std::string("/certify_") + family_name(*fam) + ".json", doc);

  // certify() may refine the working grid (layer profiles need the mesh to
  // resolve the layer width); sample the residual on the grid it certified on.
  Grid rg = rep.grid_cells == grid.n ? grid : build_grid(vs.spec.domain, rep.grid_cells);
  std::string csv = "coord,residual\n";
  for (const ResidualSample& s : residual_interior(b, vs, rg, rep.worst_time))
    csv += g17(s.coord) + "," + g17(s.value) + "\n";
  write_text_file(out + "/residual_worst.csv", csv);
  return rep.verdict == CertVerdict::Certified ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out, int jobs) {
  SweepPlan plan = load_sweep(config_path);
  if (jobs > 0) plan.jobs = jobs;
  SweepResult res = run_sweep(plan, out);
  std::printf("%zu points (%ld computed, %ld reused) -> %s/sweep.csv\n", res.points.size(),
              res.computed, static_cast<long>(res.points.size()) - res.computed, out.c_str());
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out) {
  RunConfig rc = load_config(config_path);
  if (!rc.initial_low || !rc.initial_high)
    throw ConfigError("config_parse",
                      "compare requires both 'initial_low' and 'initial_high' in the config");
  ValidatedSpec vs = validate(rc.problem);
  OrderingReport rep = compare_evolutions(vs, *rc.initial_low, *rc.initial_high, rc.solver);
  const double tolerance = 1e-6;
  std::string doc = compare_report_json(rep, tolerance);
  emit(doc);
  ensure_dir(out);
  write_text_file(out + "/compare.json", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorption equation with nonlinear nonlocal boundary flux: regime "
               "classification, regularized double-iteration runs, comparison-function "
               "certification, parameter sweeps, ordered-data comparison"};
  app.require_subcommand(1);
  bool seedless = false;
  app.add_flag("--seedless", seedless, "reserved; every computation is already deterministic");

  struct Args {
    std::string config;
    std::string out = "out";
    std::string family;
    int jobs = 0;
  } a;

  auto add_io = [&](CLI::App* c) {
    c->add_option("--config", a.config, "run configuration JSON")->required();
    c->add_option("--out", a.out, "output directory for artifacts (default: out)");
  };

  CLI::App* classify_c = app.add_subcommand("classify", "regime verdict from closed-form thresholds");
  add_io(classify_c);
  CLI::App* simulate_c = app.add_subcommand("simulate", "run the regularized double iteration");
  add_io(simulate_c);
  CLI::App* certify_c = app.add_subcommand("certify", "suggest and check a comparison function");
  add_io(certify_c);
  certify_c->add_option("--family", a.family, "comparison-function family name")->required();
  CLI::App* sweep_c = app.add_subcommand("sweep", "parameter grid of classify/simulate runs");
  add_io(sweep_c);
  sweep_c->add_option("--jobs", a.jobs, "worker threads (overrides the plan's value)");
  CLI::App* compare_c = app.add_subcommand("compare", "ordered-data comparison of two runs");
  add_io(compare_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (*classify_c) return cmd_classify(a.config, a.out);
    if (*simulate_c) return cmd_simulate(a.config, a.out);
    if (*certify_c) return cmd_certify(a.config, a.family, a.out);
    if (*sweep_c) return cmd_sweep(a.config, a.out, a.jobs);
    if (*compare_c) return cmd_compare(a.config, a.out);
  } catch (const FamilyIncompatible& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
    return 4;
  } catch (const InconclusiveError& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;  // unreachable: require_subcommand(1)
}
