#include "pmlab/classifier.hpp"

#include <cmath>
#include <limits>

#include "pmlab/errors.hpp"

namespace pmlab {

namespace {

bool l_at_most_one(const RegimeInputs& in) {
  return fuzzy_compare(in.l, 1.0) != Order::Above;
}

}  // namespace

RegimeInputs regime_inputs(const ValidatedSpec& vs, double layer_depth) {
  RegimeInputs in;
  in.mu = vs.spec.mu;
  in.nu = vs.spec.nu;
  in.l = vs.spec.l;
  in.a = vs.spec.a;
  in.K_inf = vs.kernel_sup;
  in.k0 = vs.kernel_inf;
  double depth = layer_depth > 0.0 ? layer_depth : 0.2 * domain_inradius(vs.spec.domain);
  in.geom = geometry_constants(vs.spec.domain, depth);
  in.theta = std::max(std::pow(2.0, in.l / in.mu - 1.0), 1.0);
  check_inputs(in);
  return in;
}

void check_inputs(const RegimeInputs& in) {
  auto bad = [](const std::string& what) { return ConfigError("bad_regime_inputs", what); };
  if (!(in.mu > 1.0)) throw bad("mu must exceed 1");
  if (!(in.nu > 0.0) || !(in.l > 0.0) || !(in.a > 0.0))
    throw bad("nu, l, a must be positive");
  if (!(in.k0 >= 0.0) || !(in.K_inf >= in.k0))
    throw bad("kernel bounds must satisfy K_inf >= k0 >= 0");
  if (!(in.theta >= 1.0)) throw bad("theta must be >= 1");
  if (!(in.geom.perimeter > 0.0) || !(in.geom.jac_inf > 0.0) ||
      !(in.geom.jac_sup >= in.geom.jac_inf))
    throw bad("geometry constants must be positive with jac_sup >= jac_inf");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalForAllData: return "global_for_all_data";
    case Verdict::BlowUpForLargeData: return "blow_up_for_large_data";
    case Verdict::CriticalUndetermined: return "critical_undetermined";
    case Verdict::OutsideTheorems: return "outside_theorems";
  }
  return "?";
}

const char* to_string(Consistency c) {
  switch (c) {
    case Consistency::Consistent: return "consistent";
    case Consistency::Contradiction: return "contradiction";
    case Consistency::ConsistentSmallData: return "consistent_small_data";
  }
  return "?";
}

double global_threshold(const RegimeInputs& in) {
  if (l_at_most_one(in)) return in.mu * in.geom.perimeter;
  return in.theta * in.mu * (2.0 * in.mu + in.l - 1.0) * in.geom.jac_sup / (in.l + 1.0);
}

double blowup_threshold(const RegimeInputs& in) {
  if (l_at_most_one(in)) return in.mu * in.geom.perimeter;
  return in.mu * (2.0 * in.mu + in.l - 1.0) * in.geom.jac_inf / (in.l + 1.0);
}

RegimeVerdict classify(const RegimeInputs& in) {
  RegimeVerdict r;
  double sum = in.l + in.mu;
  double crit = in.mu + in.l - 1.0;
  r.thresholds_evaluated["exponent_sum"] = sum;
  r.thresholds_evaluated["critical_nu"] = crit;

  if (fuzzy_compare(sum, 2.0) != Order::Above) {
    r.verdict = Verdict::GlobalForAllData;
    r.clause = "exponent_sum_at_most_two";
    return r;
  }
  Order nu_vs_crit = fuzzy_compare(in.nu, crit);
  if (nu_vs_crit == Order::Above) {
    r.verdict = Verdict::GlobalForAllData;
    r.clause = "absorption_beats_boundary_growth";
    return r;
  }
  if (nu_vs_crit == Order::Below) {
    if (in.k0 > 0.0) {
      r.verdict = Verdict::BlowUpForLargeData;
      r.clause = "superlinear_boundary_drive";
      return r;
    }
    // the blow-up construction needs a kernel bounded away from zero
    r.verdict = Verdict::OutsideTheorems;
    r.clause.clear();
    return r;
  }

  // critical balance nu = mu + l - 1
  double t_global = global_threshold(in);
  double t_blowup = blowup_threshold(in);
  r.thresholds_evaluated["T_global"] = t_global;
  r.thresholds_evaluated["T_blowup"] = t_blowup;
  double ratio_global =
      in.K_inf > 0.0 ? in.a / in.K_inf : std::numeric_limits<double>::infinity();
  if (in.K_inf > 0.0) r.thresholds_evaluated["a_over_K_inf"] = ratio_global;
  if (in.k0 > 0.0) r.thresholds_evaluated["a_over_k0"] = in.a / in.k0;

  if (std::isinf(ratio_global) || fuzzy_compare(ratio_global, t_global) == Order::Above) {
    r.verdict = Verdict::GlobalForAllData;
    r.clause = "critical_absorption_ratio_large";
    return r;
  }
  if (in.k0 > 0.0 && fuzzy_compare(in.a / in.k0, t_blowup) == Order::Below) {
    r.verdict = Verdict::BlowUpForLargeData;
    r.clause = "critical_absorption_ratio_small";
    return r;
  }
  r.verdict = Verdict::CriticalUndetermined;
  r.clause = "critical_between_thresholds";
  return r;
}

ConsistencyReport cross_check(const RegimeInputs& in, const SimulationOutcome& sim) {
  if (sim.series.empty() || sim.snapshots.fields.empty() || sim.grid_cells <= 0)
    throw spec_mismatch("simulation outcome carries no data; not produced by solve()");
  RegimeVerdict v = classify(in);

  if (v.verdict == Verdict::GlobalForAllData) {
    if (sim.status == RunStatus::BlowUpDetected)
      return {Consistency::Contradiction,
              "boundedness is guaranteed for all data, yet the run escaped ("
              "clause " + v.clause + ")"};
    if (sim.status == RunStatus::CompletedBounded)
      return {Consistency::Consistent, "bounded run under a boundedness guarantee"};
    return {Consistency::Consistent,
            "run hit its resolution limit; no contradiction with boundedness"};
  }
  if (v.verdict == Verdict::BlowUpForLargeData) {
    if (sim.status == RunStatus::BlowUpDetected)
      return {Consistency::Consistent, "escape matches the blow-up clause"};
    if (sim.status == RunStatus::CompletedBounded)
      return {Consistency::ConsistentSmallData,
              "blow-up is guaranteed only for large data; this datum stayed bounded"};
    return {Consistency::Consistent,
            "run hit its resolution limit; the blow-up clause is existential"};
  }
  return {Consistency::Consistent, "no theorem clause constrains this outcome"};
}

}  // namespace pmlab
