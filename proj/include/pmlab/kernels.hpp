#pragma once

// Runtime-dispatched arithmetic kernels for the cell-array hot loops.
//
// The scalar implementations are the semantic reference. The AVX2 variants
// must match them bit for bit on every elementwise operation: both sides use
// the same operation order and the same pow classification, and the whole
// project builds with -ffp-contract=off so neither side silently fuses
// mul+add. Reductions that reassociate a sum (dot, dot3) may differ from the
// reference by rounding and are equivalence-tested at 1e-13 relative;
// min/max style reductions are order-insensitive and must be exact.
//
// Backend selection: PMLAB_KERNELS=scalar|avx2|auto (default auto, meaning
// AVX2 whenever the CPU supports it), or programmatically via select().

#include <cstddef>
#include <string_view>

namespace pmlab::kern {

// Classified plan for x -> x^e so hot loops avoid libm for common exponents.
// One: e == 1. Sqrt: e == 0.5 (IEEE sqrt, exact in both backends).
// IntPow: e integral in [0, 32], evaluated by square-and-multiply with a
// fixed multiplication order. Libm: anything else, std::pow per element.
struct PowPlan {
  enum class Kind { One, Sqrt, IntPow, Libm };
  Kind kind;
  int ipow;     // exponent when kind == IntPow
  double expo;  // the original exponent, always set
};

PowPlan make_pow_plan(double e);

struct KernelTable {
  const char* name;

  // out[i] = x[i]^e per the plan
  void (*pow_field)(const double* x, double* out, std::size_t n, const PowPlan& p);
  // out[j] = coef[j] * (v[j+1] - v[j])   (n face gradients from n+1 values)
  void (*scaled_diff)(const double* v, const double* coef, double* out, std::size_t n);
  // out[i] = (f[i+1] - f[i]) * inv_vol[i]       (flux divergence)
  void (*flux_divergence)(const double* f, const double* inv_vol, double* out, std::size_t n);
  // out[i] = max(floor_val, u[i] + dt*(div[i] - a*u_nu[i] + source))
  void (*explicit_update)(const double* u, const double* div, const double* u_nu,
                          double dt, double a, double source, double floor_val,
                          double* out, std::size_t n);

  double (*reduce_max)(const double* x, std::size_t n);
  double (*reduce_min)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  double (*min_diff)(const double* a, const double* b, std::size_t n);  // min(a[i]-b[i])
  double (*dot)(const double* w, const double* v, std::size_t n);
  double (*dot3)(const double* w, const double* k, const double* v, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled for x86-64
bool cpu_has_avx2();

const KernelTable& active();
void select(std::string_view name);  // "auto" | "scalar" | "avx2"; throws on bad name
const char* active_name();

}  // namespace pmlab::kern
