#pragma once

// Comparison functions (super- and subsolutions) for the absorption equation
// with nonlinear nonlocal boundary flux, certification of their defining
// differential inequalities on a grid, and deterministic parameter search.
//
// Residual conventions, with L u = u_t - lap(u^mu) + a u^nu:
//   supersolutions need  L u >= 0,  du/dn - flux >= 0,  u(.,0) >= u0
//   subsolutions need    L u <= 0,  du/dn - flux <= 0,  u(.,0) <= u0
// where flux is the nonlocal boundary integral of k u^l. certify() reports
// role-signed margins (>= 0 means the inequality holds) with a
// resolution-aware tolerance: 10x the residual change under one mesh
// doubling.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"

namespace pmlab {

// ---------------------------------------------------------------- families --

// Short-time bound w = [1 - alpha (mu-1) t]^(-1/(mu-1)) * zeta(x) with
// zeta = c1 + c2 psi(x); dominates every iterate of the lagged boundary
// scheme on the window [0, 1/(2 alpha (mu-1))].
struct LocalBoundBarrier {
  double alpha, c1, c2;
  PsiProfile psi;
};

// u = [(1-l)(psi + (alpha t + beta)^p)]^(1/(1-l)), p = (1-l)/(2-l-mu);
// requires l + mu < 2.
struct SubcriticalSuper {
  double alpha, beta;
  PsiProfile psi;
};

// u = [(1-l)(psi + beta e^(alpha t))]^(1/(1-l)); requires l + mu = 2.
struct CriticalExpSuper {
  double alpha, beta;
  PsiProfile psi;
};

// Time-independent bound. For l < 1: u = [(1-l)(psi + beta)]^(1/(1-l)).
// For l = 1 (with nu = mu): u = (psi + beta)^(1/mu).
struct StationarySuper {
  double beta;
  PsiProfile psi;
};

// Boundary-layer profile in the depth coordinate s:
// u^mu = [ (rho s + eps)^(-gamma) - omega^(-gamma) ]_+^(beta/gamma) + A,
// constant A^(1/mu) outside the layer. Requires l >= 1, nu > mu+l-1, and
// beta strictly inside (max{mu/l, 2mu/(nu-mu)}, 2mu/(l-1)).
struct BoundaryLayerSuper {
  double rho, eps, omega, beta, gamma, A, delta;
};

// u = [(1-gt)(psi + (T-t)^(-alpha) + A)]^(1/(1-gt)) with gt < min(1, l),
// nu < mu + gt - 1, gt + mu > 2, alpha > (1-gt)/(gt+mu-2). Blows up at T.
struct BlowupSub {
  double gamma_tilde, alpha, A, T;
  PsiProfile psi;
};

// u = B (T-t)^(-alpha) e^(psi(x)), B >= 1, alpha > 1/(mu-1);
// requires l = 1 and nu = mu.
struct ExpBlowupSub {
  double B, alpha, T;
  PsiProfile psi;
};

// Strip profile xi(s,t) = C (t0 + s - t)^(-sigma) on 0 <= s <= depth,
// t < t0; requires l > 1, nu < mu+l-1, sigma > 2/(l-1), and
// sigma < 2/(nu-mu) when nu > mu. The strip's far edge is controlled by
// the ODE lower bound.
struct BoundaryLayerSub {
  double C, sigma, t0, depth;
};

// Space-constant decay solution of w' = -2 a w^nu, w(0) = A:
//   nu < 1: [A^(1-nu) - 2(1-nu) a t]^(1/(1-nu))   (positivity-limited window)
//   nu = 1: A e^(-2 a t)
//   nu > 1: [A^(1-nu) + 2(nu-1) a t]^(-1/(nu-1))
// For nu > 1 the equivalent offset form uses t0 = A^(1-nu)/(2(nu-1)a).
struct OdeBarrier {
  double A;
};

using BarrierSpec = std::variant<LocalBoundBarrier, SubcriticalSuper, CriticalExpSuper,
                                 StationarySuper, BoundaryLayerSuper, BlowupSub,
                                 ExpBlowupSub, BoundaryLayerSub, OdeBarrier>;

enum class BarrierFamily {
  LocalBound,
  SubcriticalSuper,
  CriticalExpSuper,
  StationarySuper,
  BoundaryLayerSuper,
  BlowupSub,
  ExpBlowupSub,
  BoundaryLayerSub,
  OdeBarrier,
};

enum class BarrierRole { Super, Sub };

BarrierFamily family_of(const BarrierSpec& b);
BarrierRole role_of(const BarrierSpec& b);
const char* family_name(BarrierFamily f);
std::optional<BarrierFamily> family_from_name(std::string_view name);

// Parameter and exponent-regime checks. Throws bad_barrier_params when a
// stated parameter inequality is violated and FamilyIncompatible when the
// problem's exponents rule the family out entirely.
void check_barrier(const BarrierSpec& b, const ValidatedSpec& vs);

// End of the time window on which the family's formula is defined and its
// inequalities are claimed (+infinity when unconstrained).
double validity_end(const BarrierSpec& b, const ValidatedSpec& vs);

// Point evaluation. coord is x (or r) for domain families and the boundary
// depth s for BoundaryLayerSub. Throws outside_validity_window for t outside
// [0, validity_end).
double evaluate(const BarrierSpec& b, const ValidatedSpec& vs, double coord, double t);

// ---------------------------------------------------------------- residuals --

struct ResidualSample {
  double coord;  // x, r, or s depending on the family
  double value;  // L u at that point (raw sign, not role-adjusted)
};

// Interior residual sampled at cell centers (strip samples for
// BoundaryLayerSub): analytic u_t plus second-order discrete Laplacian with
// spacing grid.h.
std::vector<ResidualSample> residual_interior(const BarrierSpec& b, const ValidatedSpec& vs,
                                              const Grid& grid, double t);

struct BoundaryResidualSample {
  int face;
  double value;  // du/dn - nonlocal flux (raw sign)
};

std::vector<BoundaryResidualSample> residual_boundary(const BarrierSpec& b,
                                                      const ValidatedSpec& vs,
                                                      const Grid& grid, double t);

// ------------------------------------------------------------ certification --

enum class CertVerdict { Certified, Violated };

struct BarrierCheckReport {
  BarrierFamily family;
  BarrierRole role;
  CertVerdict verdict;
  // Role-signed margins. The resolution-aware tolerance is applied per
  // sample (each residual is trusted only up to its own change under one
  // mesh doubling); the margin and tolerance reported are those of the
  // binding sample, so margin >= -tol reflects the decision.
  double interior_margin;
  double boundary_margin;
  double initial_margin;
  double side_margin;  // BoundaryLayerSub strip edge vs ODE bound; +inf otherwise
  double tol_interior;
  double tol_boundary;
  double worst_coord;  // location of the binding interior sample
  double worst_time;
  int grid_cells;      // resolution actually used (layer families refine)
  int time_samples;
};

BarrierCheckReport certify(const BarrierSpec& b, const ValidatedSpec& vs, const Grid& grid,
                           int time_samples);

// Deterministic parameter search; returns a spec that certify() accepts on
// the given grid or throws SearchExhausted / FamilyIncompatible.
BarrierSpec suggest_parameters(BarrierFamily f, const ValidatedSpec& vs, const Grid& grid);

// The ODE decay floor w_nu(t) from starting level A (used for the strip side
// condition and the solver's lower-bound checks). Returns 0 past the
// positivity window when nu < 1.
double ode_floor_value(double A, double a, double nu, double t);

}  // namespace pmlab
