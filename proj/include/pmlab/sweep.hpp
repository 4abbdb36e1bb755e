#pragma once
// Parameter sweeps over the regime map: a grid over any subset of
// {mu, nu, l, a, k0, u0}, classified (and optionally simulated) point by
// point on a bounded worker pool. Points are persisted individually so an
// interrupted sweep resumes without recomputation, and the aggregate CSV is
// written by the orchestrator alone, in grid order, so parallel and serial
// runs emit identical bytes.

#include <string>
#include <vector>

#include "pmlab/config_io.hpp"

namespace pmlab {

struct SweepAxis {
  std::string name;  // one of mu | nu | l | a | k0 | u0
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;     // >= 1; a single-point axis pins the value to lo
};

struct SweepPlan {
  RunConfig base;                // fixed fields for every point
  std::vector<SweepAxis> axes;   // first axis outermost in grid order
  int jobs = 1;
  bool simulate = false;         // verdict-only sweeps skip the solver
};

// {"base": {<run config>}, "axes": [{"name","lo","hi","count"}...],
//  "jobs": int, "simulate": bool}. Axis names k0 / u0 require the base
// kernel / initial data to be the constant variant.
SweepPlan parse_sweep(const std::string& json_text);
SweepPlan load_sweep(const std::string& path);

struct SweepPoint {
  long index = -1;
  std::vector<double> values;  // one per axis, in axis order
  std::string verdict;
  std::string clause;
  std::string sim_status;      // empty unless the plan simulates
  std::string error;           // nonempty when this point failed
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepPoint> points;  // grid order
  long computed = 0;               // points computed this run (not resumed)
};

// The run config a given grid point resolves to (base + axis values applied).
RunConfig point_config(const SweepPlan& plan, long index);
long sweep_size(const SweepPlan& plan);

// Executes the sweep under out_dir: per-point records land in
// out_dir/points/p<index>_<hash>.json (hash of the point's effective config;
// existing records with the right hash are reused), and the aggregate CSV is
// written to out_dir/sweep.csv. A failing point records its error and does
// not abort the sweep.
SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir);

std::string sweep_csv(const SweepResult& r);

}  // namespace pmlab
