#pragma once

// Uniform cell-centered grids on the two supported domains, exact cell
// measures, boundary-layer constants, the auxiliary Neumann profile psi with
// lap(psi) = b and d(psi)/dn = b|Omega|/|bd Omega|, and the nonlocal
// boundary-flux quadrature.

#include <vector>

#include "pmlab/model.hpp"

namespace pmlab {

struct BoundaryFace {
  int cell;            // adjacent cell index
  double position;     // x (interval) or r = R (ball)
  double measure;      // |face|: 1 per interval endpoint, surface area for a ball
  int orientation;     // +1 if outward normal points toward +coordinate, else -1
};

struct Grid {
  DomainRef domain;
  int n = 0;                      // cell count
  double h = 0.0;                 // uniform spacing
  std::vector<double> centers;    // cell center coordinate (x or r)
  std::vector<double> weights;    // exact cell measures; sum = |Omega|
  std::vector<double> inv_weights;
  std::vector<double> face_w;     // face measures, index 0..n (position i*h offset)
  std::vector<double> face_coef;  // face_w[j]/h for interior faces j=1..n-1 (size n-1)
  std::vector<BoundaryFace> boundary;
  double gmax = 0.0;              // max_i (face_w[i]+face_w[i+1])/(h*weights[i]), CFL factor
};

// Cell-averaged (to second order: midpoint-sampled) field on a Grid.
struct GridField {
  std::vector<double> values;
  double time = 0.0;
};

struct GeometryConstants {
  double volume;
  double perimeter;        // |bd Omega|
  double inradius;
  double jac_sup;          // sup of the boundary-layer area element over depth < delta
  double jac_inf;          // inf of the same
  double curvature_sup;    // sup over the layer of the layer-Laplacian drift term
  double layer_depth;      // the delta these three were evaluated at
};

// Throws too_few_cells for n < 4. Weights are exact (shell volumes for balls),
// so sum(weights) = |Omega| to roundoff.
Grid build_grid(const DomainRef& d, int n_cells);

double domain_volume(const DomainRef& d);
double domain_perimeter(const DomainRef& d);

// jac bounds for the boundary layer of depth delta; throws layer_too_deep
// unless 0 < delta < inradius.
GeometryConstants geometry_constants(const DomainRef& d, double delta);

// Drift coefficient of the Laplacian in boundary-layer coordinates
// (distance s from the boundary): lap g = g_ss - curvature_term * g_s.
// 0 on intervals, (dim-1)/(R-s) on balls. Requires 0 <= s < inradius.
double curvature_term(const DomainRef& d, double s);

// distance from a grid point to the boundary
double boundary_distance(const DomainRef& d, double coord);

// ------------------------------------------------------------------ psi -----

struct PsiProfile {
  double b = 1.0;        // lap(psi) = b
  double psi_min = 1.0;  // normalization: min over the closure
};

double psi_value(const DomainRef& d, const PsiProfile& p, double coord);
double psi_gradient(const DomainRef& d, const PsiProfile& p, double coord);  // d psi / d coord
double psi_normal_derivative(const DomainRef& d, const PsiProfile& p);       // b|Omega|/|bd|
double psi_sup(const DomainRef& d, const PsiProfile& p);
double psi_gradient_sup(const DomainRef& d, const PsiProfile& p);

// Discrete Neumann solve (conservative flux integration, then min-shift to
// psi_min). Exists as an independent cross-check of the closed forms.
GridField solve_auxiliary_psi(const Grid& g, const PsiProfile& p);

// ------------------------------------------------------ nonlocal flux -------

// kernel values k(face, y_i) sampled along the cells of g
std::vector<double> kernel_row(const Kernel& k, const Grid& g, int face_index);

// integral_Omega k(x_face, y) field(y)^l dy by midpoint quadrature with the
// exact cell weights. field must be nonnegative.
double nonlocal_flux(const Grid& g, const Kernel& k, const GridField& field, double l,
                     int face_index);

// sample initial data onto a grid (cell centers; Sampled must match n)
GridField sample_initial(const InitialData& u0, const Grid& g);

}  // namespace pmlab
