#include "pmlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace pmlab::kern {

PowPlan make_pow_plan(double e) {
  if (e == 1.0) return {PowPlan::Kind::One, 1, e};
  if (e == 0.5) return {PowPlan::Kind::Sqrt, 0, e};
  double r = std::nearbyint(e);
  if (r == e && r >= 0.0 && r <= 32.0) return {PowPlan::Kind::IntPow, static_cast<int>(r), e};
  return {PowPlan::Kind::Libm, 0, e};
}

namespace {

// Square-and-multiply with a fixed operation order; the AVX2 backend mirrors
// this sequence lane-wise so results stay bit-identical.
inline double ipow(double x, int k) {
  double r = 1.0, b = x;
  while (k > 0) {
    if (k & 1) r *= b;
    k >>= 1;
    if (k) b *= b;
  }
  return r;
}

void pow_field(const double* x, double* out, std::size_t n, const PowPlan& p) {
  switch (p.kind) {
    case PowPlan::Kind::One:
      for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
      break;
    case PowPlan::Kind::Sqrt:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(x[i]);
      break;
    case PowPlan::Kind::IntPow:
      for (std::size_t i = 0; i < n; ++i) out[i] = ipow(x[i], p.ipow);
      break;
    case PowPlan::Kind::Libm:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i], p.expo);
      break;
  }
}

void scaled_diff(const double* v, const double* coef, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = coef[j] * (v[j + 1] - v[j]);
}

void flux_divergence(const double* f, const double* inv_vol, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (f[i + 1] - f[i]) * inv_vol[i];
}

void explicit_update(const double* u, const double* div, const double* u_nu,
                     double dt, double a, double source, double floor_val,
                     double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double d = div[i] - a * u_nu[i] + source;
    double v = u[i] + dt * d;
    out[i] = v < floor_val ? floor_val : v;
  }
}

double reduce_max(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double reduce_min(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double min_diff(const double* a, const double* b, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    if (d < m) m = d;
  }
  return m;
}

double dot(const double* w, const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i];
  return s;
}

double dot3(const double* w, const double* k, const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * k[i] * v[i];
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      "scalar",       pow_field, scaled_diff, flux_divergence, explicit_update,
      reduce_max,     reduce_min, max_abs_diff, min_diff, dot, dot3};
  return t;
}

}  // namespace pmlab::kern
