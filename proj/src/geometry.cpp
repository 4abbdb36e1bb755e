#include "pmlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmlab/kernels.hpp"

namespace pmlab {

namespace {

// surface area of the unit sphere in R^dim
double unit_sphere_area(int dim) {
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace

double domain_volume(const DomainRef& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return iv->x_right - iv->x_left;
  const auto& b = std::get<Ball>(d);
  return unit_sphere_area(b.dim) * std::pow(b.radius, b.dim) / b.dim;
}

double domain_perimeter(const DomainRef& d) {
  if (std::holds_alternative<Interval>(d)) return 2.0;
  const auto& b = std::get<Ball>(d);
  return unit_sphere_area(b.dim) * std::pow(b.radius, b.dim - 1);
}

double curvature_term(const DomainRef& d, double s) {
  if (std::holds_alternative<Interval>(d)) return 0.0;
  const auto& b = std::get<Ball>(d);
  if (s < 0.0 || s >= b.radius)
    throw layer_too_deep("curvature_term: depth outside [0, R)");
  return (b.dim - 1) / (b.radius - s);
}

double boundary_distance(const DomainRef& d, double coord) {
  if (const auto* iv = std::get_if<Interval>(&d))
    return std::min(coord - iv->x_left, iv->x_right - coord);
  return std::get<Ball>(d).radius - coord;
}

Grid build_grid(const DomainRef& d, int n_cells) {
  if (n_cells < 4) {
    std::ostringstream os;
    os << "grid needs at least 4 cells, got " << n_cells;
    throw too_few_cells(os.str());
  }
  Grid g;
  g.domain = d;
  g.n = n_cells;
  g.centers.resize(n_cells);
  g.weights.resize(n_cells);
  g.inv_weights.resize(n_cells);
  g.face_w.resize(n_cells + 1);

  if (const auto* iv = std::get_if<Interval>(&d)) {
    double L = iv->x_right - iv->x_left;
    g.h = L / n_cells;
    for (int i = 0; i < n_cells; ++i) {
      g.centers[i] = iv->x_left + (i + 0.5) * g.h;
      g.weights[i] = g.h;
    }
    std::fill(g.face_w.begin(), g.face_w.end(), 1.0);
    g.boundary.push_back({0, iv->x_left, 1.0, -1});
    g.boundary.push_back({n_cells - 1, iv->x_right, 1.0, +1});
  } else {
    const auto& b = std::get<Ball>(d);
    double omega = unit_sphere_area(b.dim);
    g.h = b.radius / n_cells;
    for (int i = 0; i <= n_cells; ++i)
      g.face_w[i] = omega * std::pow(i * g.h, b.dim - 1);
    for (int i = 0; i < n_cells; ++i) {
      g.centers[i] = (i + 0.5) * g.h;
      double r0 = i * g.h, r1 = (i + 1) * g.h;
      g.weights[i] = omega * (std::pow(r1, b.dim) - std::pow(r0, b.dim)) / b.dim;
    }
    g.boundary.push_back({n_cells - 1, b.radius, g.face_w[n_cells], +1});
  }

  g.face_coef.resize(n_cells - 1);
  for (int j = 1; j < n_cells; ++j) g.face_coef[j - 1] = g.face_w[j] / g.h;
  for (int i = 0; i < n_cells; ++i) {
    g.inv_weights[i] = 1.0 / g.weights[i];
    g.gmax = std::max(g.gmax, (g.face_w[i] + g.face_w[i + 1]) / (g.h * g.weights[i]));
  }
  return g;
}

GeometryConstants geometry_constants(const DomainRef& d, double delta) {
  double inr = domain_inradius(d);
  if (!(delta > 0.0) || !(delta < inr)) {
    std::ostringstream os;
    os << "layer depth " << delta << " must lie in (0, inradius = " << inr << ")";
    throw layer_too_deep(os.str());
  }
  GeometryConstants c;
  c.volume = domain_volume(d);
  c.perimeter = domain_perimeter(d);
  c.inradius = inr;
  c.layer_depth = delta;
  if (std::holds_alternative<Interval>(d)) {
    c.jac_sup = c.jac_inf = 2.0;
    c.curvature_sup = 0.0;
  } else {
    const auto& b = std::get<Ball>(d);
    // area element at depth s is perim * (1 - s/R)^(dim-1), decreasing in s
    c.jac_sup = c.perimeter;
    c.jac_inf = c.perimeter * std::pow(1.0 - delta / b.radius, b.dim - 1);
    c.curvature_sup = (b.dim - 1) / (b.radius - delta);
  }
  return c;
}

// ------------------------------------------------------------------ psi -----

double psi_value(const DomainRef& d, const PsiProfile& p, double coord) {
  if (const auto* iv = std::get_if<Interval>(&d)) {
    double mid = 0.5 * (iv->x_left + iv->x_right);
    return 0.5 * p.b * (coord - mid) * (coord - mid) + p.psi_min;
  }
  const auto& b = std::get<Ball>(d);
  return p.b * coord * coord / (2.0 * b.dim) + p.psi_min;
}

double psi_gradient(const DomainRef& d, const PsiProfile& p, double coord) {
  if (const auto* iv = std::get_if<Interval>(&d)) {
    double mid = 0.5 * (iv->x_left + iv->x_right);
    return p.b * (coord - mid);
  }
  const auto& b = std::get<Ball>(d);
  return p.b * coord / b.dim;
}

double psi_normal_derivative(const DomainRef& d, const PsiProfile& p) {
  return p.b * domain_volume(d) / domain_perimeter(d);
}

double psi_sup(const DomainRef& d, const PsiProfile& p) {
  if (const auto* iv = std::get_if<Interval>(&d)) {
    double L = iv->x_right - iv->x_left;
    return p.psi_min + p.b * L * L / 8.0;
  }
  const auto& b = std::get<Ball>(d);
  return p.psi_min + p.b * b.radius * b.radius / (2.0 * b.dim);
}

double psi_gradient_sup(const DomainRef& d, const PsiProfile& p) {
  return std::fabs(psi_normal_derivative(d, p));
}

GridField solve_auxiliary_psi(const Grid& g, const PsiProfile& p) {
  // Conservative flux integration of div(grad psi) = b: starting from the
  // known outward flux at the left/inner boundary face, each cell balance
  // fixes the next face flux, and the midpoint update recovers psi itself.
  // Compatibility (total source = total boundary flux) holds exactly because
  // the weights are exact, so on an interval the recursion lands on the right
  // boundary flux to roundoff; asserted below.
  const int n = g.n;
  double gn = p.b * domain_volume(g.domain) / domain_perimeter(g.domain);

  std::vector<double> flux(n + 1);  // face_w * dpsi/dcoord at each face
  if (std::holds_alternative<Interval>(g.domain)) {
    flux[0] = -gn;  // outward normal at the left end points toward -x
  } else {
    flux[0] = 0.0;  // no face at the origin
  }
  for (int i = 0; i < n; ++i) flux[i + 1] = flux[i] + p.b * g.weights[i];

  if (std::holds_alternative<Interval>(g.domain)) {
    double mismatch = std::fabs(flux[n] - gn);
    if (mismatch > 1e-10 * std::max(1.0, std::fabs(gn)))
      throw Error("psi_flux_mismatch", "discrete Neumann compatibility failed");
  }

  GridField psi;
  psi.values.resize(n);
  psi.values[0] = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    double grad_face = flux[i + 1] / g.face_w[i + 1];
    psi.values[i + 1] = psi.values[i] + g.h * grad_face;
  }
  double lo = kern::active().reduce_min(psi.values.data(), psi.values.size());
  for (double& v : psi.values) v += p.psi_min - lo;
  return psi;
}

// ------------------------------------------------------ nonlocal flux -------

std::vector<double> kernel_row(const Kernel& k, const Grid& g, int face_index) {
  if (face_index < 0 || face_index >= static_cast<int>(g.boundary.size()))
    throw ConfigError("bad_face_index", "boundary face index out of range");
  std::vector<double> row(g.n);
  if (const auto* ck = std::get_if<ConstantKernel>(&k)) {
    std::fill(row.begin(), row.end(), ck->k0);
  } else if (const auto* sp = std::get_if<SpaceProductKernel>(&k)) {
    if (sp->face_values.size() != g.boundary.size())
      throw ConfigError("bad_kernel_shape", "kernel face count does not match domain");
    double fv = sp->face_values[face_index];
    for (int i = 0; i < g.n; ++i)
      row[i] = fv * (sp->profile.c0 + sp->profile.c1 * g.centers[i]);
  } else {
    const auto& tk = std::get<TabulatedKernel>(k);
    if (tk.rows.size() != g.boundary.size() ||
        tk.rows[face_index].size() != static_cast<std::size_t>(g.n)) {
      std::ostringstream os;
      os << "tabulated kernel shape (" << tk.rows.size() << " x "
         << (tk.rows.empty() ? 0 : tk.rows[0].size()) << ") does not match grid ("
         << g.boundary.size() << " x " << g.n << ")";
      throw ConfigError("bad_kernel_shape", os.str());
    }
    row = tk.rows[face_index];
  }
  return row;
}

double nonlocal_flux(const Grid& g, const Kernel& k, const GridField& field, double l,
                     int face_index) {
  auto row = kernel_row(k, g, face_index);
  std::vector<double> upl(g.n);
  auto plan = kern::make_pow_plan(l);
  const auto& kt = kern::active();
  kt.pow_field(field.values.data(), upl.data(), g.n, plan);
  return kt.dot3(g.weights.data(), row.data(), upl.data(), g.n);
}

GridField sample_initial(const InitialData& u0, const Grid& g) {
  GridField f;
  f.values.resize(g.n);
  f.time = 0.0;
  if (const auto* s = std::get_if<Sampled>(&u0)) {
    if (s->values.size() != static_cast<std::size_t>(g.n)) {
      std::ostringstream os;
      os << "sampled initial data has " << s->values.size() << " values for a grid of "
         << g.n << " cells";
      throw ConfigError("bad_initial_shape", os.str());
    }
    f.values = s->values;
    return f;
  }
  for (int i = 0; i < g.n; ++i) f.values[i] = initial_value_at(u0, g.centers[i]);
  return f;
}

}  // namespace pmlab
