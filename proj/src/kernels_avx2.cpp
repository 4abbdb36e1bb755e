// AVX2 variants of the cell-array kernels. Compiled with -mavx2 only on
// x86-64; the dispatcher never hands out this table unless the CPU reports
// AVX2 support at runtime.
//
// Elementwise kernels replay the scalar reference operation-for-operation on
// four lanes, so their results are bit-identical. The dot reductions keep one
// vector accumulator and collapse lanes in a fixed order at the end; that
// reassociation is the only permitted difference from the reference.

#include "pmlab/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace pmlab::kern {
namespace {

inline __m256d ipow4(__m256d x, int k) {
  __m256d r = _mm256_set1_pd(1.0), b = x;
  while (k > 0) {
    if (k & 1) r = _mm256_mul_pd(r, b);
    k >>= 1;
    if (k) b = _mm256_mul_pd(b, b);
  }
  return r;
}

inline double ipow1(double x, int k) {
  double r = 1.0, b = x;
  while (k > 0) {
    if (k & 1) r *= b;
    k >>= 1;
    if (k) b *= b;
  }
  return r;
}

void pow_field(const double* x, double* out, std::size_t n, const PowPlan& p) {
  std::size_t i = 0;
  switch (p.kind) {
    case PowPlan::Kind::One:
      for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_loadu_pd(x + i));
      for (; i < n; ++i) out[i] = x[i];
      break;
    case PowPlan::Kind::Sqrt:
      for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_loadu_pd(x + i)));
      for (; i < n; ++i) out[i] = std::sqrt(x[i]);
      break;
    case PowPlan::Kind::IntPow:
      for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, ipow4(_mm256_loadu_pd(x + i), p.ipow));
      for (; i < n; ++i) out[i] = ipow1(x[i], p.ipow);
      break;
    case PowPlan::Kind::Libm:
      // no vector pow; stay on libm so results match the reference exactly
      for (; i < n; ++i) out[i] = std::pow(x[i], p.expo);
      break;
  }
}

void scaled_diff(const double* v, const double* coef, double* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d hi = _mm256_loadu_pd(v + j + 1);
    __m256d lo = _mm256_loadu_pd(v + j);
    __m256d c = _mm256_loadu_pd(coef + j);
    _mm256_storeu_pd(out + j, _mm256_mul_pd(c, _mm256_sub_pd(hi, lo)));
  }
  for (; j < n; ++j) out[j] = coef[j] * (v[j + 1] - v[j]);
}

void flux_divergence(const double* f, const double* inv_vol, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d hi = _mm256_loadu_pd(f + i + 1);
    __m256d lo = _mm256_loadu_pd(f + i);
    __m256d iv = _mm256_loadu_pd(inv_vol + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(hi, lo), iv));
  }
  for (; i < n; ++i) out[i] = (f[i + 1] - f[i]) * inv_vol[i];
}

void explicit_update(const double* u, const double* div, const double* u_nu,
                     double dt, double a, double source, double floor_val,
                     double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vsrc = _mm256_set1_pd(source);
  const __m256d vfloor = _mm256_set1_pd(floor_val);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(div + i),
                              _mm256_mul_pd(va, _mm256_loadu_pd(u_nu + i)));
    d = _mm256_add_pd(d, vsrc);
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(vdt, d));
    _mm256_storeu_pd(out + i, _mm256_max_pd(v, vfloor));
  }
  for (; i < n; ++i) {
    double d = div[i] - a * u_nu[i] + source;
    double v = u[i] + dt * d;
    out[i] = v < floor_val ? floor_val : v;
  }
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_min_pd(lo, hi);
  m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

double reduce_max(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    m = hmax(vm);
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double reduce_min(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vm = _mm256_min_pd(vm, _mm256_loadu_pd(x + i));
    m = hmin(vm);
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vm = _mm256_max_pd(vm, _mm256_andnot_pd(signmask, d));
  }
  double m = (i > 0) ? hmax(vm) : 0.0;
  for (; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double min_diff(const double* a, const double* b, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_sub_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
    for (i = 4; i + 4 <= n; i += 4)
      vm = _mm256_min_pd(vm, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    m = hmin(vm);
  }
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    if (d < m) m = d;
  }
  return m;
}

double dot(const double* w, const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(v + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * v[i];
  return s;
}

double dot3(const double* w, const double* k, const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(k + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, _mm256_loadu_pd(v + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * k[i] * v[i];
  return s;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t = {
      "avx2",         pow_field, scaled_diff, flux_divergence, explicit_update,
      reduce_max,     reduce_min, max_abs_diff, min_diff, dot, dot3};
  return &t;
}

}  // namespace pmlab::kern

#else

namespace pmlab::kern {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pmlab::kern

#endif
