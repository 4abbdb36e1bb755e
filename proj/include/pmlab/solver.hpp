#pragma once

// Time integration of the absorption equation with nonlocal boundary flux by
// the regularized double iteration: an absorption floor a/m^nu with data
// lifted to max(u0, 1/m), and an inner ladder in j where each iterate is a
// full explicit march over [0, horizon] whose boundary integrand is taken
// from the previous iterate's trajectory (the lagged fixed point). The inner
// ladder increases, the m-schedule decreases, and the two tolerances below
// bound how far the discrete iterates may violate those orderings.
//
// Everything here is deterministic: identical (spec, config) inputs produce
// bit-identical outputs. A single march is single-threaded; concurrency
// happens one level up (sweep points, comparison pairs).

#include <optional>
#include <vector>

#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"

namespace pmlab {

struct SolverConfig {
  int n_cells = 100;
  double cfl_safety = 0.45;    // fraction of the explicit stability limit
  double dt_min = 1e-10;       // hard step floor; reaching it ends the march
  double u_max_threshold = 1e8;
  std::vector<int> m_schedule = {4, 8, 16};
  double j_tol = 1e-6;         // inner fixed-point sup tolerance
  double m_tol = 1e-3;         // outer schedule sup tolerance
  int j_max = 60;
  int series_samples = 241;    // fixed sample times over [0, horizon]
  int record_cap = 1 << 19;    // per-face flux records before thinning
  double horizon = 0.0;        // > 0 overrides the problem's horizon
};

// Throws ConfigError on nonpositive fields (horizon may be 0 = inherit).
void check_config(const SolverConfig& c);

struct SeriesSample {
  double t;
  double sup_norm;
  double l1_norm;
  double boundary_influx;  // total boundary inflow rate of u^mu
};

// Trajectory sampled at fixed times (shorter than planned when the march
// stopped early).
struct SnapshotSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
};

// Ladder record: one row per inner step (u_{m,j} vs u_{m,j-1}) and one per
// consecutive schedule pair (u_m vs u_{m_prev}), with the signed extremes the
// monotonicity properties are asserted on.
struct IterationTrace {
  struct InnerDelta {
    int m, j;
    double sup_delta;      // sup |u_{m,j} - u_{m,j-1}|
    double min_increase;   // min (u_{m,j} - u_{m,j-1}); the ladder rises
  };
  struct OuterDelta {
    int m_prev, m_next;
    double sup_delta;      // sup |u_{m_next} - u_{m_prev}|
    double max_increase;   // max (u_{m_next} - u_{m_prev}); the schedule falls
  };
  std::vector<InnerDelta> inner;
  std::vector<OuterDelta> outer;
};

enum class RunStatus { CompletedBounded, BlowUpDetected, InconclusiveResolutionLimit };

struct BlowUpInfo {
  double t_star_estimate;
  double fit_exponent;   // p in sup ~ (T*-t)^(-p); 0 when the fit failed
  double fit_quality;    // R^2 of the asymptote fit; 0 when the fit failed
};

struct SimulationOutcome {
  RunStatus status;
  std::optional<BlowUpInfo> blowup;  // present iff status == BlowUpDetected
  std::vector<SeriesSample> series;  // strictly increasing t
  SnapshotSeries snapshots;
  GridField final_field;
  IterationTrace trace;
  int grid_cells = 0;
  double horizon_used = 0.0;
};

// One explicit conservative Euler step of the regularized problem. The
// boundary flux of u^mu is mu * u_cell^(mu-1) * boundary_flux[face], with
// boundary_flux the nonlocal integral for the (lagged) trajectory; the
// result is clipped at the floor 1/m_reg. Throws CflViolation when dt
// exceeds the diffusion stability limit for this field.
GridField step_explicit(const GridField& field, const ValidatedSpec& vs, const Grid& grid,
                        double dt, int m_reg, const std::vector<double>& boundary_flux);

// Inner lagged-boundary fixed point at regularization level m. Seeds the
// ladder at the zero trajectory, marches each iterate over the full slab,
// and stops when consecutive iterates agree to j_tol in sup norm (or, for
// runs that end early, when consecutive stop times agree to 2%).
// Throws NoConvergence when j_max is exhausted.
enum class MarchStop { Completed, ThresholdReached, ResolutionLimit };

struct InnerResult {
  SnapshotSeries snapshots;
  std::vector<SeriesSample> series;
  IterationTrace trace;      // inner rows for this m only
  MarchStop stop = MarchStop::Completed;
  double stop_time = 0.0;
  GridField final_field;
};

InnerResult solve_inner(const ValidatedSpec& vs, const Grid& grid, int m,
                        const SolverConfig& cfg);

// Full outer run over the m-schedule. Stops early when consecutive schedule
// entries agree to m_tol, or when both end in blow-up with stop-time
// estimates within 10%.
SimulationOutcome solve(const ValidatedSpec& vs, const SolverConfig& cfg);

// Least-squares fit of log(sup) against log(T* - t) over the last decade of
// growth. Requires >= 8 samples in that decade, nondecreasing, with at
// least 100x total growth; throws NotBlowingUp otherwise (also when the best
// asymptote sits far beyond the data or fits worse than R^2 = 0.95).
struct BlowUpEstimate {
  double t_star;
  double exponent;
  double r_squared;
};

BlowUpEstimate detect_blowup(const std::vector<SeriesSample>& series);

// Evolves two initial data under identical config and schedule and reports
// the worst ordering gap over grid x sampled times. Throws OrderViolation
// when the inputs are not ordered pointwise on the grid.
struct OrderingReport {
  double min_gap;        // min (u_high - u_low); nonnegative means ordered
  double sup_scale;      // max sup-norm across both runs
  double worst_coord = 0.0;
  double worst_time = 0.0;
  SimulationOutcome low, high;
};

OrderingReport compare_evolutions(const ValidatedSpec& vs, const InitialData& u0_low,
                                  const InitialData& u0_high, const SolverConfig& cfg);

}  // namespace pmlab
