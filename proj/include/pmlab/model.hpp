#pragma once

// Problem data for the degenerate diffusion-absorption equation
//
//     u_t = lap(u^mu) - a u^nu          in Omega x (0, T],   mu > 1
//     du/dn = integral_Omega k(x,y,t) u^l(y,t) dy   on the boundary
//     u(.,0) = u0 >= 0
//
// This header owns the value types (exponents, kernel, domain reference,
// initial data) and the validation/exponent-relation operations. Everything
// downstream consumes a ValidatedSpec.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pmlab/errors.hpp"

namespace pmlab {

// ------------------------------------------------------------------ domain --

struct Interval {
  double x_left;
  double x_right;
};

// Radially symmetric ball in R^dim; fields on it are functions of r in [0,R].
struct Ball {
  int dim;
  double radius;
};

using DomainRef = std::variant<Interval, Ball>;

double domain_inradius(const DomainRef& d);

// ------------------------------------------------------------------ kernel --

// k(x,y,t) restricted to the forms the tool supports: time-constant, split
// into a per-boundary-face factor and an interior profile, or tabulated on a
// concrete grid (rows = boundary faces, cols = cells).

struct ConstantKernel {
  double k0;
};

struct AffineProfile {
  double c0;
  double c1;  // value(y) = c0 + c1*y, y the space coordinate (x or r)
};

struct SpaceProductKernel {
  std::vector<double> face_values;  // one entry per boundary face
  AffineProfile profile;            // interior factor
};

struct TabulatedKernel {
  std::vector<std::vector<double>> rows;  // rows[face][cell]
};

using Kernel = std::variant<ConstantKernel, SpaceProductKernel, TabulatedKernel>;

// ------------------------------------------------------------ initial data --

struct ConstantValue {
  double value;
};

struct Sampled {
  std::vector<double> values;  // one per cell of the run grid
};

// Small closed-form menu. "affine": c0 + c1*y. "bump": c0 + c1*exp(-c2*(y-c3)^2).
struct ClosedForm {
  std::string name;
  std::array<double, 4> params;
};

using InitialData = std::variant<ConstantValue, Sampled, ClosedForm>;

double initial_value_at(const InitialData& u0, double y);  // not valid for Sampled

// ------------------------------------------------------------------- spec ---

struct ProblemSpec {
  double mu = 2.0;   // diffusion exponent, > 1
  double nu = 1.0;   // absorption exponent, > 0
  double a = 1.0;    // absorption coefficient, > 0
  double l = 1.0;    // boundary nonlinearity exponent, > 0
  double horizon = 1.0;
  Kernel kernel = ConstantKernel{1.0};
  DomainRef domain = Interval{0.0, 1.0};
  InitialData initial = ConstantValue{1.0};
};

// ProblemSpec whose invariants have been checked, plus the derived scalars
// every later stage needs. Construct only through validate().
struct ValidatedSpec {
  ProblemSpec spec;
  double kernel_sup = 0.0;  // ess sup of k over faces x domain
  double kernel_inf = 0.0;  // ess inf (the k0 of the blow-up conditions)
  double u0_sup = 0.0;
  double u0_inf = 0.0;
};

// Throws ConfigError subtypes: exponent_out_of_range, negative_kernel,
// negative_initial_data, ... Idempotent: re-validating the contained spec
// reproduces the same ValidatedSpec.
ValidatedSpec validate(const ProblemSpec& s);
ValidatedSpec validate(const ValidatedSpec& s);

// ------------------------------------------------- exponent relations -------

enum class Order { Below, Equal, Above };

// Three-way compare with relative tolerance 1e-12 (doubles are binary
// rationals, so integer-valued regime boundaries compare exactly).
Order fuzzy_compare(double x, double y);

struct ExponentReport {
  double l_plus_mu;
  double crit_nu;              // mu + l - 1
  Order l_plus_mu_vs_two;      // Below = subcritical boundary coupling
  Order nu_vs_crit;            // absorption vs. boundary-source balance
};

ExponentReport exponent_relations(const ValidatedSpec& s);

const char* to_string(Order o);

}  // namespace pmlab
