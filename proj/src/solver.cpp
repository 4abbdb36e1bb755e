#include "pmlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

#include "pmlab/errors.hpp"
#include "pmlab/kernels.hpp"

namespace pmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ------------------------------------------------------------- flux series --
// Per-face record of the nonlocal boundary integral along one trajectory,
// thinned by stride doubling once the cap is hit. The next inner iterate
// reads it back with monotone-time linear interpolation.

class FluxSeries {
 public:
  FluxSeries() = default;
  FluxSeries(int faces, int cap)
      : cap_(std::max(cap, 1024)), values_(static_cast<std::size_t>(faces)) {}

  void record(double t, const std::vector<double>& phi) {
    ++seen_;
    if ((seen_ - 1) % stride_ != 0) {
      pending_t_ = t;
      pending_phi_ = phi;
      pending_ = true;
      return;
    }
    append(t, phi);
    pending_ = false;
    if (static_cast<int>(times_.size()) >= cap_) thin();
  }

  // make sure the trajectory's last point is present
  void finish() {
    if (pending_) {
      append(pending_t_, pending_phi_);
      pending_ = false;
    }
  }

  const std::vector<double>& times() const { return times_; }
  double value_at(int face, std::size_t idx) const { return values_[face][idx]; }
  int faces() const { return static_cast<int>(values_.size()); }

 private:
  void append(double t, const std::vector<double>& phi) {
    if (!times_.empty() && t <= times_.back()) return;
    times_.push_back(t);
    for (std::size_t f = 0; f < values_.size(); ++f) values_[f].push_back(phi[f]);
  }

  void thin() {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < times_.size(); i += 2, ++kept) {
      times_[kept] = times_[i];
      for (auto& v : values_) v[kept] = v[i];
    }
    times_.resize(kept);
    for (auto& v : values_) v.resize(kept);
    stride_ *= 2;
  }

  int cap_ = 1 << 19;
  long long seen_ = 0;
  long long stride_ = 1;
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
  bool pending_ = false;
  double pending_t_ = 0.0;
  std::vector<double> pending_phi_;
};

// forward-cursor reader; queries must come at nondecreasing times per face
class FluxReader {
 public:
  explicit FluxReader(const FluxSeries& s)
      : s_(&s), cursor_(static_cast<std::size_t>(s.faces()), 0) {}

  double value(int face, double t) {
    const auto& ts = s_->times();
    if (ts.empty()) return 0.0;
    if (t <= ts.front()) return s_->value_at(face, 0);
    if (t >= ts.back()) return s_->value_at(face, ts.size() - 1);
    std::size_t& c = cursor_[face];
    while (c + 1 < ts.size() && ts[c + 1] <= t) ++c;
    double t0 = ts[c], t1 = ts[c + 1];
    double th = (t - t0) / (t1 - t0);
    double v0 = s_->value_at(face, c), v1 = s_->value_at(face, c + 1);
    return v0 + th * (v1 - v0);
  }

 private:
  const FluxSeries* s_;
  std::vector<std::size_t> cursor_;
};

// ------------------------------------------------------------------- step ---

struct StepScratch {
  std::vector<double> umu, unu, F, div;
  void resize(int n) {
    umu.resize(n);
    unu.resize(n);
    F.assign(n + 1, 0.0);
    div.resize(n);
  }
};

// One conservative explicit update into `out`; returns the total boundary
// inflow rate of u^mu (the chain-rule flux summed over faces).
double step_raw(const std::vector<double>& u, std::vector<double>& out,
                const ValidatedSpec& vs, const Grid& g, double dt, double floor_val,
                double src, const std::vector<double>& phi, const kern::PowPlan& pmu,
                const kern::PowPlan& pnu, StepScratch& s) {
  const auto& K = kern::active();
  const int n = g.n;
  const double mu = vs.spec.mu, a = vs.spec.a;

  K.pow_field(u.data(), s.umu.data(), n, pmu);
  K.pow_field(u.data(), s.unu.data(), n, pnu);

  // interior face fluxes of u^mu: F[j] = face_w[j] * d(u^mu)/dx at face j
  K.scaled_diff(s.umu.data(), g.face_coef.data(), s.F.data() + 1, n - 1);
  s.F[0] = 0.0;
  s.F[n] = 0.0;
  for (std::size_t f = 0; f < g.boundary.size(); ++f) {
    const BoundaryFace& bf = g.boundary[f];
    double chain = mu * std::pow(u[bf.cell], mu - 1.0) * phi[f];
    // outward-normal flux converted to the +coordinate orientation
    s.F[bf.orientation > 0 ? n : 0] = bf.orientation * bf.measure * chain;
  }
  double influx = s.F[n] - s.F[0];

  K.flux_divergence(s.F.data(), g.inv_weights.data(), s.div.data(), n);
  K.explicit_update(u.data(), s.div.data(), s.unu.data(), dt, a, src, floor_val,
                    out.data(), n);
  return influx;
}

// ------------------------------------------------------------------ march ---

struct MarchOutput {
  SnapshotSeries snaps;
  std::vector<SeriesSample> uniform;  // samples at the fixed snapshot times
  std::vector<SeriesSample> tail;     // per-step samples near an early stop
  FluxSeries flux;
  MarchStop stop = MarchStop::Completed;
  double stop_time = 0.0;
  GridField final_field;
};

MarchOutput march(const ValidatedSpec& vs, const Grid& grid, int m,
                  const SolverConfig& cfg, double horizon, const FluxSeries* lagged) {
  const auto& K = kern::active();
  const int n = grid.n;
  const int nf = static_cast<int>(grid.boundary.size());
  const double mu = vs.spec.mu, nu = vs.spec.nu, a = vs.spec.a;

  const double floor_val = 1.0 / m;
  const double src = a * std::pow(floor_val, nu);
  const auto pmu = kern::make_pow_plan(mu);
  const auto pnu = kern::make_pow_plan(nu);
  const auto pl = kern::make_pow_plan(vs.spec.l);

  std::vector<std::vector<double>> rows(nf);
  for (int f = 0; f < nf; ++f) rows[f] = kernel_row(vs.spec.kernel, grid, f);

  GridField cur = sample_initial(vs.spec.initial, grid);
  for (double& v : cur.values) v = std::max(v, floor_val);
  cur.time = 0.0;
  GridField nxt;
  nxt.values.assign(n, 0.0);

  StepScratch scratch;
  scratch.resize(n);
  std::vector<double> upl(n), snapbuf(n);
  std::vector<double> phi_lag(nf, 0.0), phi_rec(nf, 0.0), phi_tmp(nf, 0.0);

  MarchOutput out;
  out.flux = FluxSeries(nf, cfg.record_cap);

  auto self_flux = [&](const std::vector<double>& u, std::vector<double>& phi) {
    K.pow_field(u.data(), upl.data(), n, pl);
    for (int f = 0; f < nf; ++f)
      phi[f] = K.dot3(grid.weights.data(), rows[f].data(), upl.data(), n);
  };
  auto influx_of = [&](const std::vector<double>& u, const std::vector<double>& phi) {
    double acc = 0.0;
    for (int f = 0; f < nf; ++f) {
      const BoundaryFace& bf = grid.boundary[f];
      acc += bf.measure * mu * std::pow(u[bf.cell], mu - 1.0) * phi[f];
    }
    return acc;
  };
  auto emit_sample = [&](double t, const std::vector<double>& u) {
    self_flux(u, phi_tmp);
    out.uniform.push_back({t, K.reduce_max(u.data(), n), K.dot(grid.weights.data(), u.data(), n),
                           influx_of(u, phi_tmp)});
    out.snaps.times.push_back(t);
    out.snaps.fields.push_back(u);
  };

  const int S = std::max(2, cfg.series_samples);
  auto t_sample = [&](int k) { return horizon * k / (S - 1); };
  int next_s = 0;
  emit_sample(0.0, cur.values);
  next_s = 1;

  self_flux(cur.values, phi_rec);
  out.flux.record(0.0, phi_rec);

  // growth-indexed tail for the asymptote fit: log-spaced in sup-norm, so a
  // power-law approach is sampled evenly in the fit's own coordinates
  std::vector<SeriesSample> geo;
  double geo_step = 1.004;
  auto geo_push = [&](const SeriesSample& s) {
    if (!geo.empty() && s.sup_norm < geo.back().sup_norm * geo_step) return;
    geo.push_back(s);
    if (geo.size() >= 16384) {
      std::size_t kept = 0;
      for (std::size_t i = 0; i < geo.size(); i += 2, ++kept) geo[kept] = geo[i];
      geo.resize(kept);
      geo_step = geo_step * geo_step;
    }
  };

  FluxReader reader(lagged ? *lagged : out.flux);  // dummy binding when null
  bool have_lag = lagged != nullptr;

  const double M0 = K.reduce_max(cur.values.data(), n);
  double M = M0;
  double t = 0.0;

  while (true) {
    double left = horizon - t;
    if (left <= 0.0) {
      out.stop = MarchStop::Completed;
      break;
    }
    double Mf = std::max(M, floor_val);
    double rate = mu * std::pow(Mf, mu - 1.0) * grid.gmax +
                  a * nu *
                      (nu >= 1.0 ? std::pow(Mf, nu - 1.0)
                                 : std::pow(floor_val, nu - 1.0));
    double dt = cfg.cfl_safety / rate;
    bool last_step = false;
    if (dt >= left) {
      dt = left;
      last_step = true;
    } else if (dt < cfg.dt_min) {
      // can no longer advance; sustained growth means the run is ending in
      // a singularity rather than in a resolution artifact
      out.stop = (M >= 100.0 * std::max(M0, floor_val)) ? MarchStop::ThresholdReached
                                                        : MarchStop::ResolutionLimit;
      break;
    }

    if (have_lag)
      for (int f = 0; f < nf; ++f) phi_lag[f] = reader.value(f, t);
    step_raw(cur.values, nxt.values, vs, grid, dt, floor_val, src, phi_lag, pmu, pnu,
             scratch);
    double t_new = t + dt;

    while (next_s < S && t_sample(next_s) <= t_new + 1e-12 * horizon) {
      double ts = t_sample(next_s);
      double th = std::clamp((ts - t) / dt, 0.0, 1.0);
      for (int i = 0; i < n; ++i)
        snapbuf[i] = cur.values[i] + th * (nxt.values[i] - cur.values[i]);
      emit_sample(ts, snapbuf);
      ++next_s;
    }

    self_flux(nxt.values, phi_rec);
    out.flux.record(t_new, phi_rec);
    double Mn = K.reduce_max(nxt.values.data(), n);
    geo_push({t_new, Mn, K.dot(grid.weights.data(), nxt.values.data(), n),
              influx_of(nxt.values, phi_rec)});

    std::swap(cur.values, nxt.values);
    cur.time = t_new;
    t = t_new;
    M = Mn;

    if (M > cfg.u_max_threshold) {
      out.stop = MarchStop::ThresholdReached;
      break;
    }
    if (last_step) {
      out.stop = MarchStop::Completed;
      break;
    }
  }

  out.stop_time = t;
  out.flux.finish();

  if (out.stop == MarchStop::Completed) {
    while (next_s < S) {  // guard against end-of-slab rounding
      emit_sample(t_sample(next_s), cur.values);
      ++next_s;
    }
  } else {
    // make sure the stopping state itself is in the tail
    if (geo.empty() || t > geo.back().t) {
      self_flux(cur.values, phi_rec);
      geo.push_back({t, K.reduce_max(cur.values.data(), n),
                     K.dot(grid.weights.data(), cur.values.data(), n),
                     influx_of(cur.values, phi_rec)});
    }
    out.tail = std::move(geo);
  }

  out.final_field = std::move(cur);
  return out;
}

std::vector<SeriesSample> merged_series(const MarchOutput& mo) {
  if (mo.tail.empty()) return mo.uniform;
  double t0 = mo.tail.front().t;
  std::vector<SeriesSample> s;
  s.reserve(mo.uniform.size() + mo.tail.size());
  for (const auto& u : mo.uniform) {
    if (u.t >= t0) break;
    s.push_back(u);
  }
  s.insert(s.end(), mo.tail.begin(), mo.tail.end());
  return s;
}

InnerResult result_from(MarchOutput&& mo, IterationTrace&& trace) {
  InnerResult r;
  r.series = merged_series(mo);
  r.snapshots = std::move(mo.snaps);
  r.trace = std::move(trace);
  r.stop = mo.stop;
  r.stop_time = mo.stop_time;
  r.final_field = std::move(mo.final_field);
  return r;
}

}  // namespace

// ------------------------------------------------------------------ public --

void check_config(const SolverConfig& c) {
  auto bad = [](const std::string& what) { return ConfigError("bad_solver_config", what); };
  if (c.n_cells < 4) throw bad("n_cells must be at least 4");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
    throw bad("cfl_safety must lie in (0, 1]");
  if (!(c.dt_min > 0.0)) throw bad("dt_min must be positive");
  if (!(c.u_max_threshold > 0.0)) throw bad("u_max_threshold must be positive");
  if (c.m_schedule.empty()) throw bad("m_schedule must not be empty");
  for (int m : c.m_schedule)
    if (m < 1) throw bad("m_schedule entries must be >= 1");
  if (!(c.j_tol > 0.0) || !(c.m_tol > 0.0)) throw bad("tolerances must be positive");
  if (c.j_max < 1) throw bad("j_max must be >= 1");
  if (c.series_samples < 2) throw bad("series_samples must be >= 2");
  if (c.record_cap < 1024) throw bad("record_cap must be >= 1024");
  if (c.horizon < 0.0) throw bad("horizon must be >= 0 (0 inherits the problem's)");
}

GridField step_explicit(const GridField& field, const ValidatedSpec& vs, const Grid& grid,
                        double dt, int m_reg, const std::vector<double>& boundary_flux) {
  if (m_reg < 1) throw ConfigError("bad_solver_config", "regularization index must be >= 1");
  if (static_cast<int>(field.values.size()) != grid.n)
    throw ConfigError("bad_field_shape", "field size does not match the grid");
  if (boundary_flux.size() != grid.boundary.size())
    throw ConfigError("bad_field_shape", "one boundary flux value per face required");
  const double mu = vs.spec.mu;
  double floor_val = 1.0 / m_reg;
  double M = std::max(kern::active().reduce_max(field.values.data(), grid.n), floor_val);
  if (dt * mu * std::pow(M, mu - 1.0) * grid.gmax > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the explicit stability limit "
       << 1.0 / (mu * std::pow(M, mu - 1.0) * grid.gmax);
    throw cfl_violation(os.str());
  }
  StepScratch scratch;
  scratch.resize(grid.n);
  GridField out;
  out.values.assign(grid.n, 0.0);
  out.time = field.time + dt;
  double src = vs.spec.a * std::pow(floor_val, vs.spec.nu);
  step_raw(field.values, out.values, vs, grid, dt, floor_val, src, boundary_flux,
           kern::make_pow_plan(mu), kern::make_pow_plan(vs.spec.nu), scratch);
  return out;
}

InnerResult solve_inner(const ValidatedSpec& vs, const Grid& grid, int m,
                        const SolverConfig& cfg) {
  if (m < 1) throw ConfigError("bad_solver_config", "regularization index must be >= 1");
  const auto& K = kern::active();
  double horizon = cfg.horizon > 0.0 ? cfg.horizon : vs.spec.horizon;

  IterationTrace trace;
  FluxSeries prev_flux;
  SnapshotSeries prev_snaps;  // empty on the first rung (the zero trajectory)
  MarchStop prev_kind = MarchStop::Completed;  // the zero trajectory spans the window
  double prev_stop_time = horizon;
  std::vector<double> zeros(grid.n, 0.0);

  for (int j = 1; j <= cfg.j_max; ++j) {
    MarchOutput mo = march(vs, grid, m, cfg, horizon, j == 1 ? nullptr : &prev_flux);

    std::size_t common = j == 1 ? mo.snaps.fields.size()
                                : std::min(mo.snaps.fields.size(), prev_snaps.fields.size());
    double supd = 0.0, mininc = kInf;
    for (std::size_t s = 0; s < common; ++s) {
      const double* prev = j == 1 ? zeros.data() : prev_snaps.fields[s].data();
      supd = std::max(supd, K.max_abs_diff(mo.snaps.fields[s].data(), prev, grid.n));
      mininc = std::min(mininc, K.min_diff(mo.snaps.fields[s].data(), prev, grid.n));
    }
    trace.inner.push_back({m, j, supd, mininc});

    // deltas only make sense over matching coverage: an early-stopped rung
    // shares too little of the window with a completed one to be compared
    bool window_agrees = std::fabs(mo.stop_time - prev_stop_time) <=
                         0.02 * std::max(mo.stop_time, prev_stop_time);
    bool converged = supd < cfg.j_tol && window_agrees;
    bool stop_agrees = mo.stop == MarchStop::ThresholdReached &&
                       prev_kind == MarchStop::ThresholdReached && window_agrees;
    if (converged || stop_agrees) return result_from(std::move(mo), std::move(trace));

    prev_kind = mo.stop;
    prev_stop_time = mo.stop_time;
    prev_snaps = std::move(mo.snaps);
    prev_flux = std::move(mo.flux);
  }
  std::ostringstream os;
  os << "lagged boundary iteration did not settle within " << cfg.j_max
     << " rungs at m = " << m;
  throw no_convergence(os.str());
}

SimulationOutcome solve(const ValidatedSpec& vs, const SolverConfig& cfg) {
  check_config(cfg);
  const auto& K = kern::active();
  Grid grid = build_grid(vs.spec.domain, cfg.n_cells);
  double horizon = cfg.horizon > 0.0 ? cfg.horizon : vs.spec.horizon;

  IterationTrace trace;
  InnerResult prev;
  bool have_prev = false;
  bool settled = false;

  for (std::size_t idx = 0; idx < cfg.m_schedule.size() && !settled; ++idx) {
    int m = cfg.m_schedule[idx];
    InnerResult cur = solve_inner(vs, grid, m, cfg);
    trace.inner.insert(trace.inner.end(), cur.trace.inner.begin(), cur.trace.inner.end());

    if (have_prev) {
      std::size_t common =
          std::min(cur.snapshots.fields.size(), prev.snapshots.fields.size());
      double supd = 0.0, maxinc = -kInf;
      for (std::size_t s = 0; s < common; ++s) {
        supd = std::max(supd, K.max_abs_diff(cur.snapshots.fields[s].data(),
                                             prev.snapshots.fields[s].data(), grid.n));
        maxinc = std::max(maxinc, -K.min_diff(prev.snapshots.fields[s].data(),
                                              cur.snapshots.fields[s].data(), grid.n));
      }
      trace.outer.push_back({cfg.m_schedule[idx - 1], m, supd, maxinc});

      bool tol_met = supd < cfg.m_tol;
      bool blow_agrees = cur.stop == MarchStop::ThresholdReached &&
                         prev.stop == MarchStop::ThresholdReached &&
                         std::fabs(cur.stop_time - prev.stop_time) <=
                             0.1 * prev.stop_time;
      if (tol_met || blow_agrees) settled = true;
    }
    prev = std::move(cur);
    have_prev = true;
  }

  SimulationOutcome o;
  o.series = std::move(prev.series);
  o.snapshots = std::move(prev.snapshots);
  o.final_field = std::move(prev.final_field);
  o.trace = std::move(trace);
  o.grid_cells = grid.n;
  o.horizon_used = horizon;
  switch (prev.stop) {
    case MarchStop::Completed:
      o.status = RunStatus::CompletedBounded;
      break;
    case MarchStop::ResolutionLimit:
      o.status = RunStatus::InconclusiveResolutionLimit;
      break;
    case MarchStop::ThresholdReached: {
      o.status = RunStatus::BlowUpDetected;
      try {
        BlowUpEstimate est = detect_blowup(o.series);
        o.blowup = BlowUpInfo{est.t_star, est.exponent, est.r_squared};
      } catch (const InconclusiveError&) {
        o.blowup = BlowUpInfo{prev.stop_time, 0.0, 0.0};
      }
      break;
    }
  }
  return o;
}

BlowUpEstimate detect_blowup(const std::vector<SeriesSample>& series) {
  if (series.size() < 8) throw not_blowing_up("fewer than 8 series samples");
  double sup_end = series.back().sup_norm;
  double sup_0 = series.front().sup_norm;
  if (!(sup_end >= 100.0 * std::max(sup_0, 1e-300)))
    throw not_blowing_up("sup-norm grew less than 100x over the window");

  // last decade of growth
  double cut = sup_end / 10.0;
  std::size_t k0 = series.size();
  while (k0 > 0 && series[k0 - 1].sup_norm >= cut) --k0;
  std::vector<double> tt, yy;
  for (std::size_t i = k0; i < series.size(); ++i) {
    if (i > k0 && series[i].sup_norm < series[i - 1].sup_norm * (1.0 - 1e-12))
      throw not_blowing_up("sup-norm not monotone over the final growth decade");
    tt.push_back(series[i].t);
    yy.push_back(std::log(series[i].sup_norm));
  }
  if (tt.size() < 8) throw not_blowing_up("fewer than 8 samples in the final growth decade");
  double t_end = tt.back();
  double span = t_end - tt.front();
  if (!(span > 0.0)) throw not_blowing_up("degenerate time span in the growth decade");

  // regression of y = log sup on x = log(gap + (t_end - t)); the gap with the
  // smallest residual locates the asymptote
  auto fit = [&](double gap, double* slope, double* r2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double N = static_cast<double>(tt.size());
    for (std::size_t i = 0; i < tt.size(); ++i) {
      double x = std::log(gap + (t_end - tt[i]));
      double y = yy[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    double vxx = sxx - sx * sx / N;
    double vxy = sxy - sx * sy / N;
    double vyy = syy - sy * sy / N;
    if (!(vxx > 0.0) || !(vyy > 0.0)) {
      if (slope) *slope = 0.0;
      if (r2) *r2 = 0.0;
      return kInf;
    }
    double b = vxy / vxx;
    if (slope) *slope = b;
    if (r2) *r2 = vxy * vxy / (vxx * vyy);
    return vyy - b * vxy;  // SSE
  };

  double lo = std::log(1e-6 * span), hi = std::log(10.0 * span);
  int best = 0;
  double best_sse = kInf;
  const int NSCAN = 64;
  for (int i = 0; i < NSCAN; ++i) {
    double g = std::exp(lo + (hi - lo) * i / (NSCAN - 1));
    double sse = fit(g, nullptr, nullptr);
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }
  double step = (hi - lo) / (NSCAN - 1);
  double a = lo + step * std::max(0, best - 1);
  double b = lo + step * std::min(NSCAN - 1, best + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = fit(std::exp(x1), nullptr, nullptr), f2 = fit(std::exp(x2), nullptr, nullptr);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = fit(std::exp(x1), nullptr, nullptr);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = fit(std::exp(x2), nullptr, nullptr);
    }
  }
  double gap = std::exp(0.5 * (a + b));
  if (gap > 9.0 * span)
    throw not_blowing_up("no finite-time asymptote near the data window");
  double slope = 0.0, r2 = 0.0;
  fit(gap, &slope, &r2);
  double p = -slope;
  if (!(p > 0.0)) throw not_blowing_up("sup-norm does not steepen toward an asymptote");
  if (r2 < 0.95) throw not_blowing_up("asymptote fit below the R^2 = 0.95 bar");
  return {t_end + gap, p, r2};
}

OrderingReport compare_evolutions(const ValidatedSpec& vs, const InitialData& u0_low,
                                  const InitialData& u0_high, const SolverConfig& cfg) {
  check_config(cfg);
  const auto& K = kern::active();
  Grid grid = build_grid(vs.spec.domain, cfg.n_cells);
  GridField flo = sample_initial(u0_low, grid);
  GridField fhi = sample_initial(u0_high, grid);
  if (K.min_diff(fhi.values.data(), flo.values.data(), grid.n) < 0.0)
    throw order_violation("u0_high dips below u0_low on the grid");

  ProblemSpec slo = vs.spec;
  slo.initial = u0_low;
  ProblemSpec shi = vs.spec;
  shi.initial = u0_high;
  SimulationOutcome rlo = solve(validate(slo), cfg);
  SimulationOutcome rhi = solve(validate(shi), cfg);

  OrderingReport rep;
  rep.min_gap = kInf;
  std::size_t common =
      std::min(rlo.snapshots.fields.size(), rhi.snapshots.fields.size());
  std::size_t worst_s = 0;
  for (std::size_t s = 0; s < common; ++s) {
    double d = K.min_diff(rhi.snapshots.fields[s].data(), rlo.snapshots.fields[s].data(),
                          grid.n);
    if (d < rep.min_gap) {
      rep.min_gap = d;
      worst_s = s;
    }
  }
  if (common > 0) {
    rep.worst_time = rhi.snapshots.times[worst_s];
    const auto& hi_f = rhi.snapshots.fields[worst_s];
    const auto& lo_f = rlo.snapshots.fields[worst_s];
    int arg = 0;
    for (int i = 1; i < grid.n; ++i)
      if (hi_f[i] - lo_f[i] < hi_f[arg] - lo_f[arg]) arg = i;
    rep.worst_coord = grid.centers[arg];
  }
  rep.sup_scale = 0.0;
  for (const auto& s : rlo.series) rep.sup_scale = std::max(rep.sup_scale, s.sup_norm);
  for (const auto& s : rhi.series) rep.sup_scale = std::max(rep.sup_scale, s.sup_norm);
  rep.low = std::move(rlo);
  rep.high = std::move(rhi);
  return rep;
}

}  // namespace pmlab
