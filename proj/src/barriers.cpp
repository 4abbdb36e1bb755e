#include "pmlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pmlab/kernels.hpp"

namespace pmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw bad_barrier_params(msg);
}

void require_psi(const PsiProfile& p) {
  require(p.b > 0.0 && p.psi_min > 0.0, "auxiliary profile needs b > 0 and psi_min > 0");
}

double coord_span(const DomainRef& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return iv->x_right - iv->x_left;
  return std::get<Ball>(d).radius;
}

double coord_lo(const DomainRef& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return iv->x_left;
  return 0.0;
}

bool is_ball(const DomainRef& d) { return std::holds_alternative<Ball>(d); }

// Kernel value at an off-center point y (tabulated rows are looked up by
// nearest cell of their own resolution).
double kernel_value_at(const Kernel& k, const DomainRef& d, int face, double y) {
  return std::visit(
      overloaded{[&](const ConstantKernel& c) { return c.k0; },
                 [&](const SpaceProductKernel& sp) {
                   return sp.face_values[face] * (sp.profile.c0 + sp.profile.c1 * y);
                 },
                 [&](const TabulatedKernel& tk) {
                   const auto& row = tk.rows[face];
                   double frac = (y - coord_lo(d)) / coord_span(d);
                   int idx = static_cast<int>(frac * static_cast<double>(row.size()));
                   idx = std::clamp(idx, 0, static_cast<int>(row.size()) - 1);
                   return row[idx];
                 }},
      k);
}

double initial_at(const InitialData& u0, const Grid& data_grid, double y) {
  if (const auto* s = std::get_if<Sampled>(&u0)) {
    double frac = (y - coord_lo(data_grid.domain)) / coord_span(data_grid.domain);
    int idx = std::clamp(static_cast<int>(frac * data_grid.n), 0, data_grid.n - 1);
    return s->values[idx];
  }
  return initial_value_at(u0, y);
}

// ---------------------------------------------------------------- raw forms --
// Raw closed-form evaluation without window checks. For domain families the
// coordinate is x (or r; negative r means the even reflection through the
// origin). The strip family takes the boundary depth s directly.

double lb_tau(const LocalBoundBarrier& p, double mu, double t) {
  return std::pow(1.0 - p.alpha * (mu - 1.0) * t, -1.0 / (mu - 1.0));
}

double power_form(double one_minus, double inner) {
  return std::pow(one_minus * inner, 1.0 / one_minus);
}

double subcrit_p(double mu, double l) { return (1.0 - l) / (2.0 - l - mu); }

double layer_super_from_depth(const BoundaryLayerSuper& p, double mu, double s) {
  double z = p.rho * s + p.eps;
  // smooth extension for stencil neighbors slightly outside the domain
  double base = std::pow(z, -p.gamma) - std::pow(p.omega, -p.gamma);
  double f = base > 0.0 ? std::pow(base, p.beta / p.gamma) : 0.0;
  return std::pow(f + p.A, 1.0 / mu);
}

double raw_value(const BarrierSpec& b, const ValidatedSpec& vs, double coord, double t) {
  const auto& d = vs.spec.domain;
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l;
  double c = is_ball(d) ? std::fabs(coord) : coord;
  return std::visit(
      overloaded{
          [&](const LocalBoundBarrier& p) {
            double zeta = p.c1 + p.c2 * psi_value(d, p.psi, c);
            return lb_tau(p, mu, t) * zeta;
          },
          [&](const SubcriticalSuper& p) {
            double g = std::pow(p.alpha * t + p.beta, subcrit_p(mu, l));
            return power_form(1.0 - l, psi_value(d, p.psi, c) + g);
          },
          [&](const CriticalExpSuper& p) {
            double g = p.beta * std::exp(p.alpha * t);
            return power_form(1.0 - l, psi_value(d, p.psi, c) + g);
          },
          [&](const StationarySuper& p) {
            double psiv = psi_value(d, p.psi, c);
            if (fuzzy_compare(l, 1.0) == Order::Equal)
              return std::pow(psiv + p.beta, 1.0 / mu);
            return power_form(1.0 - l, psiv + p.beta);
          },
          [&](const BoundaryLayerSuper& p) {
            return layer_super_from_depth(p, mu, boundary_distance(d, c));
          },
          [&](const BlowupSub& p) {
            double g = std::pow(p.T - t, -p.alpha);
            return power_form(1.0 - p.gamma_tilde, psi_value(d, p.psi, c) + g + p.A);
          },
          [&](const ExpBlowupSub& p) {
            return p.B * std::pow(p.T - t, -p.alpha) * std::exp(psi_value(d, p.psi, c));
          },
          [&](const BoundaryLayerSub& p) {
            return p.C * std::pow(p.t0 + coord - t, -p.sigma);  // coord is s here
          },
          [&](const OdeBarrier& p) { return ode_floor_value(p.A, vs.spec.a, nu, t); }},
      b);
}

// analytic time derivative at the same point
double raw_time_derivative(const BarrierSpec& b, const ValidatedSpec& vs, double coord,
                           double t) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l, a = vs.spec.a;
  return std::visit(
      overloaded{
          [&](const LocalBoundBarrier& p) {
            double zeta = p.c1 + p.c2 * psi_value(vs.spec.domain, p.psi, coord);
            double tau = lb_tau(p, mu, t);
            return p.alpha * std::pow(tau, mu) * zeta;
          },
          [&](const SubcriticalSuper& p) {
            double pw = subcrit_p(mu, l);
            double gp = pw * p.alpha * std::pow(p.alpha * t + p.beta, pw - 1.0);
            return std::pow(raw_value(b, vs, coord, t), l) * gp;
          },
          [&](const CriticalExpSuper& p) {
            double gp = p.alpha * p.beta * std::exp(p.alpha * t);
            return std::pow(raw_value(b, vs, coord, t), l) * gp;
          },
          [&](const StationarySuper&) { return 0.0; },
          [&](const BoundaryLayerSuper&) { return 0.0; },
          [&](const BlowupSub& p) {
            double gp = p.alpha * std::pow(p.T - t, -p.alpha - 1.0);
            return std::pow(raw_value(b, vs, coord, t), p.gamma_tilde) * gp;
          },
          [&](const ExpBlowupSub& p) {
            return p.alpha / (p.T - t) * raw_value(b, vs, coord, t);
          },
          [&](const BoundaryLayerSub& p) {
            return p.sigma * p.C * std::pow(p.t0 + coord - t, -p.sigma - 1.0);
          },
          [&](const OdeBarrier& p) {
            double w = ode_floor_value(p.A, a, nu, t);
            return -2.0 * a * std::pow(w, nu);
          }},
      b);
}

// analytic outward normal derivative at a boundary face
double raw_normal_derivative(const BarrierSpec& b, const ValidatedSpec& vs,
                             const BoundaryFace& face, double t) {
  const auto& d = vs.spec.domain;
  const double mu = vs.spec.mu, l = vs.spec.l;
  double xb = face.position;
  return std::visit(
      overloaded{
          [&](const LocalBoundBarrier& p) {
            return lb_tau(p, mu, t) * p.c2 * psi_normal_derivative(d, p.psi);
          },
          [&](const SubcriticalSuper& p) {
            double ub = raw_value(b, vs, xb, t);
            return std::pow(ub, l) * psi_normal_derivative(d, p.psi);
          },
          [&](const CriticalExpSuper& p) {
            double ub = raw_value(b, vs, xb, t);
            return std::pow(ub, l) * psi_normal_derivative(d, p.psi);
          },
          [&](const StationarySuper& p) {
            double pn = psi_normal_derivative(d, p.psi);
            if (fuzzy_compare(l, 1.0) == Order::Equal) {
              double psib = psi_value(d, p.psi, xb);
              return pn / mu * std::pow(psib + p.beta, (1.0 - mu) / mu);
            }
            double ub = raw_value(b, vs, xb, t);
            return std::pow(ub, l) * pn;
          },
          [&](const BoundaryLayerSuper& p) {
            double base0 = std::pow(p.eps, -p.gamma) - std::pow(p.omega, -p.gamma);
            double f0 = std::pow(base0, p.beta / p.gamma);
            return p.rho * p.beta / mu * std::pow(p.eps, -p.gamma - 1.0) *
                   std::pow(base0, (p.beta - p.gamma) / p.gamma) *
                   std::pow(f0 + p.A, (1.0 - mu) / mu);
          },
          [&](const BlowupSub& p) {
            double ub = raw_value(b, vs, xb, t);
            return std::pow(ub, p.gamma_tilde) * psi_normal_derivative(d, p.psi);
          },
          [&](const ExpBlowupSub& p) {
            return raw_value(b, vs, xb, t) * psi_normal_derivative(d, p.psi);
          },
          [&](const BoundaryLayerSub& p) {
            return p.sigma * p.C * std::pow(p.t0 - t, -p.sigma - 1.0);
          },
          [&](const OdeBarrier&) { return 0.0; }},
      b);
}

// -------------------------------------------------------- interior sampling --

// Second-order stencil for lap(u^mu) at given points with spacing h; pts are
// domain coordinates (cell centers or finer). The closed forms extend
// smoothly past the boundary, and even reflection handles the ball origin.
std::vector<ResidualSample> interior_at_points(const BarrierSpec& b, const ValidatedSpec& vs,
                                               const std::vector<double>& pts, double h,
                                               double t) {
  const auto& d = vs.spec.domain;
  const double mu = vs.spec.mu, nu = vs.spec.nu, a = vs.spec.a;
  bool ball = is_ball(d);
  int dim = ball ? std::get<Ball>(d).dim : 1;

  if (const auto* ls = std::get_if<BoundaryLayerSuper>(&b)) {
    if (ls->rho * 0.5 * h >= ls->eps) {
      std::ostringstream os;
      os << "stencil spacing " << h << " too coarse for the boundary layer (need h < "
         << 2.0 * ls->eps / ls->rho << ")";
      throw too_few_cells(os.str());
    }
  }

  std::vector<ResidualSample> out;
  out.reserve(pts.size());
  for (double x : pts) {
    double f0 = raw_value(b, vs, x, t);
    double fp = raw_value(b, vs, x + h, t);
    double fm = raw_value(b, vs, x - h, t);
    double m0 = std::pow(f0, mu), mp = std::pow(fp, mu), mm = std::pow(fm, mu);
    double lap = (mm - 2.0 * m0 + mp) / (h * h);
    if (ball && dim > 1) lap += (dim - 1) / x * (mp - mm) / (2.0 * h);
    double r = raw_time_derivative(b, vs, x, t) - lap + a * std::pow(f0, nu);
    out.push_back({x, r});
  }
  return out;
}

// strip quadrature resolution tied to a grid's spacing
struct StripQuad {
  int n;
  double hs;
};

StripQuad strip_resolution(const BoundaryLayerSub& p, double grid_h) {
  double target = std::min(grid_h, p.depth / 16.0);
  int n = static_cast<int>(std::ceil(p.depth / target));
  n = std::clamp(n, 16, 32768);
  return {n, p.depth / n};
}

std::vector<double> strip_points(const StripQuad& q) {
  std::vector<double> s(q.n);
  for (int i = 0; i < q.n; ++i) s[i] = (i + 0.5) * q.hs;
  return s;
}

// strip interior residual: stencil in the depth coordinate with the layer
// Laplacian drift
std::vector<ResidualSample> strip_interior_at(const BoundaryLayerSub& p,
                                              const ValidatedSpec& vs,
                                              const std::vector<double>& spts, double hs,
                                              double t) {
  const auto& d = vs.spec.domain;
  const double mu = vs.spec.mu, nu = vs.spec.nu, a = vs.spec.a;
  if (t < 0.0 || t >= p.t0 - hs) {
    std::ostringstream os;
    os << "strip residual needs t in [0, t0 - hs); t = " << t << ", t0 = " << p.t0
       << ", hs = " << hs;
    throw outside_validity_window(os.str());
  }
  auto ximu = [&](double s) {
    return std::pow(p.C * std::pow(p.t0 + s - t, -p.sigma), mu);
  };
  std::vector<ResidualSample> out;
  out.reserve(spts.size());
  for (double s : spts) {
    double xi = p.C * std::pow(p.t0 + s - t, -p.sigma);
    double xit = p.sigma / (p.t0 + s - t) * xi;
    double lap = (ximu(s - hs) - 2.0 * ximu(s) + ximu(s + hs)) / (hs * hs) -
                 curvature_term(d, s) * (ximu(s + hs) - ximu(s - hs)) / (2.0 * hs);
    out.push_back({s, xit - lap + a * std::pow(xi, nu)});
  }
  return out;
}

// strip boundary flux: integral of k * xi^l over the strip only (the
// subsolution lives on the strip and is zero elsewhere)
double strip_flux(const BoundaryLayerSub& p, const ValidatedSpec& vs, int face,
                  const StripQuad& q, double t) {
  const auto& d = vs.spec.domain;
  const double l = vs.spec.l;
  double acc = 0.0;
  if (const auto* ball = std::get_if<Ball>(&d)) {
    double perim = domain_perimeter(d);
    for (int i = 0; i < q.n; ++i) {
      double s = (i + 0.5) * q.hs;
      double y = ball->radius - s;
      double jac = perim * std::pow(y / ball->radius, ball->dim - 1);
      double xi = p.C * std::pow(p.t0 + s - t, -p.sigma);
      acc += q.hs * jac * kernel_value_at(vs.spec.kernel, d, face, y) * std::pow(xi, l);
    }
  } else {
    const auto& iv = std::get<Interval>(d);
    for (int i = 0; i < q.n; ++i) {
      double s = (i + 0.5) * q.hs;
      double xi = p.C * std::pow(p.t0 + s - t, -p.sigma);
      double k_both = kernel_value_at(vs.spec.kernel, d, face, iv.x_left + s) +
                      kernel_value_at(vs.spec.kernel, d, face, iv.x_right - s);
      acc += q.hs * k_both * std::pow(xi, l);
    }
  }
  return acc;
}

// window end of the certified claim (the LocalBound formula outlives its
// claim by a factor of two)
double claim_end(const BarrierSpec& b, const ValidatedSpec& vs) {
  if (const auto* p = std::get_if<LocalBoundBarrier>(&b))
    return 0.5 / (p->alpha * (vs.spec.mu - 1.0));
  return validity_end(b, vs);
}

double probe_alpha_bound(const DomainRef& d, const PsiProfile& psi, double c1, double c2,
                         double mu) {
  double lo = coord_lo(d), span = coord_span(d);
  double worst = 0.0;
  for (int j = 0; j <= 1024; ++j) {
    double x = lo + span * j / 1024.0;
    double zeta = c1 + c2 * psi_value(d, psi, x);
    double g = psi_gradient(d, psi, x);
    double lapzm = mu * c2 * psi.b * std::pow(zeta, mu - 1.0) +
                   mu * (mu - 1.0) * c2 * c2 * g * g * std::pow(zeta, mu - 2.0);
    worst = std::max(worst, lapzm / zeta);
  }
  return worst;
}

double quad_zeta_power(const DomainRef& d, const PsiProfile& psi, double c1, double c2,
                       double l) {
  Grid qg = build_grid(d, 2048);
  double acc = 0.0;
  for (int i = 0; i < qg.n; ++i)
    acc += qg.weights[i] * std::pow(c1 + c2 * psi_value(d, psi, qg.centers[i]), l);
  return acc;
}

}  // namespace

// ------------------------------------------------------------------ basics --

BarrierFamily family_of(const BarrierSpec& b) {
  return std::visit(
      overloaded{[](const LocalBoundBarrier&) { return BarrierFamily::LocalBound; },
                 [](const SubcriticalSuper&) { return BarrierFamily::SubcriticalSuper; },
                 [](const CriticalExpSuper&) { return BarrierFamily::CriticalExpSuper; },
                 [](const StationarySuper&) { return BarrierFamily::StationarySuper; },
                 [](const BoundaryLayerSuper&) { return BarrierFamily::BoundaryLayerSuper; },
                 [](const BlowupSub&) { return BarrierFamily::BlowupSub; },
                 [](const ExpBlowupSub&) { return BarrierFamily::ExpBlowupSub; },
                 [](const BoundaryLayerSub&) { return BarrierFamily::BoundaryLayerSub; },
                 [](const OdeBarrier&) { return BarrierFamily::OdeBarrier; }},
      b);
}

BarrierRole role_of(const BarrierSpec& b) {
  switch (family_of(b)) {
    case BarrierFamily::LocalBound:
    case BarrierFamily::SubcriticalSuper:
    case BarrierFamily::CriticalExpSuper:
    case BarrierFamily::StationarySuper:
    case BarrierFamily::BoundaryLayerSuper:
      return BarrierRole::Super;
    default:
      return BarrierRole::Sub;
  }
}

const char* family_name(BarrierFamily f) {
  switch (f) {
    case BarrierFamily::LocalBound: return "local_bound";
    case BarrierFamily::SubcriticalSuper: return "subcritical_super";
    case BarrierFamily::CriticalExpSuper: return "critical_exp_super";
    case BarrierFamily::StationarySuper: return "stationary_super";
    case BarrierFamily::BoundaryLayerSuper: return "boundary_layer_super";
    case BarrierFamily::BlowupSub: return "blowup_sub";
    case BarrierFamily::ExpBlowupSub: return "exp_blowup_sub";
    case BarrierFamily::BoundaryLayerSub: return "boundary_layer_sub";
    case BarrierFamily::OdeBarrier: return "ode_barrier";
  }
  return "?";
}

std::optional<BarrierFamily> family_from_name(std::string_view name) {
  for (int f = 0; f <= static_cast<int>(BarrierFamily::OdeBarrier); ++f)
    if (name == family_name(static_cast<BarrierFamily>(f)))
      return static_cast<BarrierFamily>(f);
  return std::nullopt;
}

double ode_floor_value(double A, double a, double nu, double t) {
  switch (fuzzy_compare(nu, 1.0)) {
    case Order::Below: {
      double bracket = std::pow(A, 1.0 - nu) - 2.0 * (1.0 - nu) * a * t;
      return bracket <= 0.0 ? 0.0 : std::pow(bracket, 1.0 / (1.0 - nu));
    }
    case Order::Equal:
      return A * std::exp(-2.0 * a * t);
    case Order::Above:
      return std::pow(std::pow(A, 1.0 - nu) + 2.0 * (nu - 1.0) * a * t,
                      -1.0 / (nu - 1.0));
  }
  return 0.0;
}

// ------------------------------------------------------------------- checks --

void check_barrier(const BarrierSpec& b, const ValidatedSpec& vs) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l;
  ExponentReport er = exponent_relations(vs);

  std::visit(
      overloaded{
          [&](const LocalBoundBarrier& p) {
            require_psi(p.psi);
            require(p.alpha > 0.0 && p.c1 >= 0.0 && p.c2 > 0.0,
                    "short-time bound needs alpha > 0, c1 >= 0, c2 > 0");
            double zeta_inf = p.c1 + p.c2 * p.psi.psi_min;
            require(zeta_inf >= std::max(1.0, vs.u0_sup) * (1.0 - 1e-12),
                    "zeta must dominate max(1, sup u0) everywhere");
            double bound = probe_alpha_bound(vs.spec.domain, p.psi, p.c1, p.c2, mu);
            require(p.alpha > bound,
                    "alpha must exceed sup |lap(zeta^mu)| / zeta");
            double theta = std::max(1.0, std::pow(2.0, (l - 1.0) / (mu - 1.0)));
            double lhs = p.c2 * psi_normal_derivative(vs.spec.domain, p.psi);
            double rhs =
                theta * vs.kernel_sup * quad_zeta_power(vs.spec.domain, p.psi, p.c1, p.c2, l);
            require(lhs >= rhs * (1.0 - 1e-9),
                    "boundary growth of zeta too weak for this kernel");
          },
          [&](const SubcriticalSuper& p) {
            if (er.l_plus_mu_vs_two != Order::Below)
              throw FamilyIncompatible("subcritical bound needs l + mu < 2");
            require_psi(p.psi);
            require(p.alpha > 0.0 && p.beta > 0.0, "needs alpha > 0 and beta > 0");
          },
          [&](const CriticalExpSuper& p) {
            if (er.l_plus_mu_vs_two != Order::Equal)
              throw FamilyIncompatible("exponential bound needs l + mu = 2");
            require_psi(p.psi);
            require(p.alpha > 0.0 && p.beta > 0.0, "needs alpha > 0 and beta > 0");
          },
          [&](const StationarySuper& p) {
            Order lv1 = fuzzy_compare(l, 1.0);
            if (lv1 == Order::Above)
              throw FamilyIncompatible("stationary bound needs l < 1, or l = 1 with nu = mu");
            if (lv1 == Order::Below && er.nu_vs_crit == Order::Below)
              throw FamilyIncompatible(
                  "stationary bound with l < 1 needs nu >= mu + l - 1");
            if (lv1 == Order::Equal && fuzzy_compare(nu, mu) != Order::Equal)
              throw FamilyIncompatible("stationary bound with l = 1 needs nu = mu");
            require_psi(p.psi);
            require(p.beta > 0.0, "needs beta > 0");
          },
          [&](const BoundaryLayerSuper& p) {
            if (fuzzy_compare(l, 1.0) == Order::Below)
              throw FamilyIncompatible("layer bound needs l >= 1");
            if (er.nu_vs_crit != Order::Above)
              throw FamilyIncompatible("layer bound needs nu > mu + l - 1");
            double inr = domain_inradius(vs.spec.domain);
            require(p.delta > 0.0 && p.delta < inr, "delta must lie in (0, inradius)");
            require(p.rho > 0.0, "rho must be positive");
            require(p.eps > 0.0 && p.eps < p.omega &&
                        p.omega < std::min(p.delta * p.rho, 1.0),
                    "need 0 < eps < omega < min(delta*rho, 1)");
            double beta_lo = std::max(mu / l, nu > mu ? 2.0 * mu / (nu - mu) : 0.0);
            require(p.beta > beta_lo, "beta at or below its lower bound");
            if (fuzzy_compare(l, 1.0) == Order::Above)
              require(p.beta < 2.0 * mu / (l - 1.0), "beta at or above 2mu/(l-1)");
            require(p.gamma > 0.0 && p.gamma < 0.5 * p.beta,
                    "need 0 < gamma < beta/2");
            require(p.A > 0.0 && std::pow(p.A, mu) >= vs.u0_sup * (1.0 - 1e-12),
                    "need A^mu >= sup u0");
          },
          [&](const BlowupSub& p) {
            double lo = std::max({0.0, 2.0 - mu, nu - mu + 1.0});
            double hi = std::min(1.0, l);
            if (!(lo < hi))
              throw FamilyIncompatible(
                  "no admissible blow-up exponent: need max(0, 2-mu, nu-mu+1) < min(1, l)");
            require_psi(p.psi);
            require(p.gamma_tilde > 0.0 && p.gamma_tilde < 1.0,
                    "gamma_tilde must lie in (0, 1)");
            require(p.gamma_tilde < l, "gamma_tilde must be below l");
            require(nu < mu + p.gamma_tilde - 1.0,
                    "need nu < mu + gamma_tilde - 1");
            require(p.gamma_tilde + mu > 2.0, "need gamma_tilde + mu > 2");
            require(p.alpha > (1.0 - p.gamma_tilde) / (p.gamma_tilde + mu - 2.0),
                    "alpha at or below (1 - gamma_tilde)/(gamma_tilde + mu - 2)");
            require(p.T > 0.0 && p.A > 0.0, "need T > 0 and A > 0");
          },
          [&](const ExpBlowupSub& p) {
            if (fuzzy_compare(l, 1.0) != Order::Equal ||
                fuzzy_compare(nu, mu) != Order::Equal)
              throw FamilyIncompatible("exponential blow-up needs l = 1 and nu = mu");
            require_psi(p.psi);
            require(p.B >= 1.0, "need B >= 1");
            require(p.alpha > 1.0 / (mu - 1.0), "alpha at or below 1/(mu-1)");
            require(p.T > 0.0, "need T > 0");
          },
          [&](const BoundaryLayerSub& p) {
            if (fuzzy_compare(l, 1.0) != Order::Above)
              throw FamilyIncompatible("strip blow-up needs l > 1");
            if (er.nu_vs_crit != Order::Below)
              throw FamilyIncompatible("strip blow-up needs nu < mu + l - 1");
            require(p.sigma > 2.0 / (l - 1.0), "sigma at or below 2/(l-1)");
            if (nu > mu)
              require(p.sigma < 2.0 / (nu - mu), "sigma at or above 2/(nu-mu)");
            require(p.C > 0.0 && p.t0 > 0.0, "need C > 0 and t0 > 0");
            double inr = domain_inradius(vs.spec.domain);
            require(p.depth > 0.0 && p.depth < inr, "depth must lie in (0, inradius)");
          },
          [&](const OdeBarrier& p) {
            if (fuzzy_compare(nu, 1.0) != Order::Above)
              require(p.A > 1.0, "decay floor needs A > 1 when nu <= 1");
            else
              require(p.A > 0.0, "decay floor needs A > 0");
          }},
      b);
}

double validity_end(const BarrierSpec& b, const ValidatedSpec& vs) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, a = vs.spec.a;
  return std::visit(
      overloaded{[&](const LocalBoundBarrier& p) { return 1.0 / (p.alpha * (mu - 1.0)); },
                 [&](const SubcriticalSuper&) { return kInf; },
                 [&](const CriticalExpSuper&) { return kInf; },
                 [&](const StationarySuper&) { return kInf; },
                 [&](const BoundaryLayerSuper&) { return kInf; },
                 [&](const BlowupSub& p) { return p.T; },
                 [&](const ExpBlowupSub& p) { return p.T; },
                 [&](const BoundaryLayerSub& p) { return p.t0; },
                 [&](const OdeBarrier& p) {
                   if (fuzzy_compare(nu, 1.0) == Order::Below)
                     return std::pow(p.A, 1.0 - nu) / (2.0 * (1.0 - nu) * a);
                   return kInf;
                 }},
      b);
}

double evaluate(const BarrierSpec& b, const ValidatedSpec& vs, double coord, double t) {
  if (const auto* p = std::get_if<BoundaryLayerSub>(&b)) {
    // the strip profile is defined wherever t0 + s - t stays positive
    if (t < 0.0 || p->t0 + coord - t <= 0.0) {
      std::ostringstream os;
      os << "strip profile needs t >= 0 and t0 + s - t > 0 (t = " << t << ", s = " << coord
         << ", t0 = " << p->t0 << ")";
      throw outside_validity_window(os.str());
    }
    return raw_value(b, vs, coord, t);
  }
  double end = validity_end(b, vs);
  if (t < 0.0 || t >= end) {
    std::ostringstream os;
    os << "t = " << t << " outside the validity window [0, " << end << ")";
    throw outside_validity_window(os.str());
  }
  return raw_value(b, vs, coord, t);
}

// ---------------------------------------------------------------- residuals --

std::vector<ResidualSample> residual_interior(const BarrierSpec& b, const ValidatedSpec& vs,
                                              const Grid& grid, double t) {
  if (const auto* p = std::get_if<BoundaryLayerSub>(&b)) {
    StripQuad q = strip_resolution(*p, grid.h);
    return strip_interior_at(*p, vs, strip_points(q), q.hs, t);
  }
  double end = validity_end(b, vs);
  if (t < 0.0 || t >= end) {
    std::ostringstream os;
    os << "residual time " << t << " outside the validity window [0, " << end << ")";
    throw outside_validity_window(os.str());
  }
  return interior_at_points(b, vs, grid.centers, grid.h, t);
}

std::vector<BoundaryResidualSample> residual_boundary(const BarrierSpec& b,
                                                      const ValidatedSpec& vs,
                                                      const Grid& grid, double t) {
  std::vector<BoundaryResidualSample> out;
  if (const auto* p = std::get_if<BoundaryLayerSub>(&b)) {
    if (t < 0.0 || t >= p->t0)
      throw outside_validity_window("strip boundary residual needs 0 <= t < t0");
    StripQuad q = strip_resolution(*p, grid.h);
    double dn = p->sigma * p->C * std::pow(p->t0 - t, -p->sigma - 1.0);
    for (int f = 0; f < static_cast<int>(grid.boundary.size()); ++f)
      out.push_back({f, dn - strip_flux(*p, vs, f, q, t)});
    return out;
  }
  double end = validity_end(b, vs);
  if (t < 0.0 || t >= end)
    throw outside_validity_window("boundary residual time outside the validity window");
  GridField field;
  field.time = t;
  field.values.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) field.values[i] = raw_value(b, vs, grid.centers[i], t);
  for (int f = 0; f < static_cast<int>(grid.boundary.size()); ++f) {
    double flux = nonlocal_flux(grid, vs.spec.kernel, field, vs.spec.l, f);
    out.push_back({f, raw_normal_derivative(b, vs, grid.boundary[f], t) - flux});
  }
  return out;
}

// ------------------------------------------------------------ certification --

BarrierCheckReport certify(const BarrierSpec& b, const ValidatedSpec& vs, const Grid& grid,
                           int time_samples) {
  check_barrier(b, vs);
  BarrierFamily fam = family_of(b);
  BarrierRole role = role_of(b);
  double sign = role == BarrierRole::Super ? 1.0 : -1.0;
  bool tabulated = std::holds_alternative<TabulatedKernel>(vs.spec.kernel);

  // working resolution: the layer profile needs the mesh to resolve eps/rho
  int n_cert = grid.n;
  if (const auto* p = std::get_if<BoundaryLayerSuper>(&b); p && !tabulated) {
    double span = coord_span(vs.spec.domain);
    double needed = std::ceil(span * 4.0 * p->rho / p->eps);
    n_cert = std::clamp(static_cast<int>(std::min(needed, 32768.0)), grid.n, 32768);
  }
  Grid cg = n_cert == grid.n ? grid : build_grid(vs.spec.domain, n_cert);

  // sample points and stencil spacing
  const BoundaryLayerSub* strip = std::get_if<BoundaryLayerSub>(&b);
  std::vector<double> pts;
  double hstep;
  if (strip) {
    StripQuad q = strip_resolution(*strip, cg.h);
    pts = strip_points(q);
    hstep = q.hs;
  } else {
    pts = cg.centers;
    hstep = cg.h;
  }

  // time window of the certified claim
  double W = claim_end(b, vs);
  double hi = std::isinf(W) ? vs.spec.horizon : std::min(vs.spec.horizon, W * (1.0 - 1e-3));
  if (strip) hi = std::min(hi, strip->t0 - 2.0 * hstep);
  if (fam == BarrierFamily::LocalBound) hi = std::min(vs.spec.horizon, W);
  if (!(hi > 0.0))
    throw too_few_cells("certification window collapsed at this resolution");
  int K = std::max(2, time_samples);

  BarrierCheckReport rep{};
  rep.family = fam;
  rep.role = role;
  rep.interior_margin = kInf;
  rep.boundary_margin = kInf;
  rep.side_margin = kInf;
  rep.worst_coord = pts.empty() ? 0.0 : pts.front();
  rep.worst_time = 0.0;
  rep.grid_cells = cg.n;
  rep.time_samples = K;

  // Barrier values can span many orders of magnitude across the window
  // (blow-up profiles near T), so a single window-wide tolerance would be
  // dominated by the largest samples and mask genuine violations elsewhere.
  // Each sample is therefore trusted only up to its own change under one
  // mesh doubling, and the binding sample (least slack) decides.
  double slack_r = kInf, slack_b = kInf;

  Grid cg2;
  bool have_cg2 = !tabulated;
  if (have_cg2) cg2 = build_grid(vs.spec.domain, 2 * cg.n);

  for (int k = 0; k < K; ++k) {
    double t = hi * k / (K - 1);

    std::vector<ResidualSample> r1, r2;
    if (strip) {
      r1 = strip_interior_at(*strip, vs, pts, hstep, t);
      r2 = strip_interior_at(*strip, vs, pts, 0.5 * hstep, t);
    } else {
      r1 = interior_at_points(b, vs, pts, hstep, t);
      r2 = interior_at_points(b, vs, pts, 0.5 * hstep, t);
    }
    for (std::size_t i = 0; i < r1.size(); ++i) {
      double m = sign * r1[i].value;
      double tol = 10.0 * std::fabs(r1[i].value - r2[i].value) +
                   1e-12 * std::fabs(r1[i].value);
      if (m + tol < slack_r) {
        slack_r = m + tol;
        rep.interior_margin = m;
        rep.tol_interior = tol;
        rep.worst_coord = r1[i].coord;
        rep.worst_time = t;
      }
    }

    auto b1 = residual_boundary(b, vs, cg, t);
    std::vector<BoundaryResidualSample> b2;
    if (have_cg2) b2 = residual_boundary(b, vs, cg2, t);
    for (std::size_t f = 0; f < b1.size(); ++f) {
      double m = sign * b1[f].value;
      double tol = have_cg2 ? 10.0 * std::fabs(b1[f].value - b2[f].value) +
                                  1e-12 * std::fabs(b1[f].value)
                            : 1e-9 * (1.0 + std::fabs(b1[f].value));
      if (m + tol < slack_b) {
        slack_b = m + tol;
        rep.boundary_margin = m;
        rep.tol_boundary = tol;
      }
    }

    if (strip) {
      double w = ode_floor_value(vs.u0_inf, vs.spec.a, vs.spec.nu, t);
      double edge = strip->C * std::pow(strip->t0 + strip->depth - t, -strip->sigma);
      rep.side_margin = std::min(rep.side_margin, w - edge);
    }
  }

  // data domination at t = 0, on the caller's grid (matches sampled data)
  double init_scale = 1.0 + vs.u0_sup;
  if (strip) {
    StripQuad q = strip_resolution(*strip, grid.h);
    rep.initial_margin = kInf;
    for (int i = 0; i < q.n; ++i) {
      double s = (i + 0.5) * q.hs;
      double xi = strip->C * std::pow(strip->t0 + s, -strip->sigma);
      init_scale = std::max(init_scale, 1.0 + xi);
      if (const auto* ball = std::get_if<Ball>(&vs.spec.domain)) {
        double u0v = initial_at(vs.spec.initial, grid, ball->radius - s);
        rep.initial_margin = std::min(rep.initial_margin, u0v - xi);
      } else {
        const auto& iv = std::get<Interval>(vs.spec.domain);
        double lo = initial_at(vs.spec.initial, grid, iv.x_left + s);
        double hi2 = initial_at(vs.spec.initial, grid, iv.x_right - s);
        rep.initial_margin = std::min(rep.initial_margin, std::min(lo, hi2) - xi);
      }
    }
  } else {
    GridField u0f = sample_initial(vs.spec.initial, grid);
    rep.initial_margin = kInf;
    for (int i = 0; i < grid.n; ++i) {
      double v = raw_value(b, vs, grid.centers[i], 0.0);
      init_scale = std::max(init_scale, 1.0 + v);
      double m = role == BarrierRole::Super ? v - u0f.values[i] : u0f.values[i] - v;
      rep.initial_margin = std::min(rep.initial_margin, m);
    }
  }

  double tol_misc = 1e-9 * init_scale;

  bool ok = slack_r >= 0.0 && slack_b >= 0.0 && rep.initial_margin >= -tol_misc &&
            (std::isinf(rep.side_margin) || rep.side_margin >= -tol_misc);
  rep.verdict = ok ? CertVerdict::Certified : CertVerdict::Violated;
  return rep;
}

// -------------------------------------------------------- parameter search --

namespace {

bool certified(const BarrierSpec& cand, const ValidatedSpec& vs, const Grid& grid) {
  try {
    return certify(cand, vs, grid, 9).verdict == CertVerdict::Certified;
  } catch (const Error&) {
    return false;
  }
}

// analytic interior residual minimum for the layer profile (cheap prefilter
// before the full discrete certification)
double layer_super_interior_min(const BoundaryLayerSuper& p, const ValidatedSpec& vs) {
  const auto& d = vs.spec.domain;
  const double mu = vs.spec.mu, nu = vs.spec.nu, a = vs.spec.a;
  double s_sup = (p.omega - p.eps) / p.rho;
  double worst = kInf;
  for (int j = 0; j <= 512; ++j) {
    double frac = j / 512.0;
    double s = s_sup * frac * frac;  // cluster samples at the boundary
    double z = p.rho * s + p.eps;
    double base = std::pow(z, -p.gamma) - std::pow(p.omega, -p.gamma);
    double r;
    if (base <= 0.0) {
      r = a * std::pow(p.A, nu / mu);
    } else {
      double bg = p.beta / p.gamma;
      double f = std::pow(base, bg);
      double fp = -p.beta * p.rho * std::pow(z, -p.gamma - 1.0) * std::pow(base, bg - 1.0);
      double fpp = p.beta * (p.gamma + 1.0) * p.rho * p.rho *
                       std::pow(z, -p.gamma - 2.0) * std::pow(base, bg - 1.0) +
                   p.beta * (p.beta - p.gamma) * p.rho * p.rho *
                       std::pow(z, -2.0 * p.gamma - 2.0) * std::pow(base, bg - 2.0);
      double curv = curvature_term(d, s);
      r = a * std::pow(f + p.A, nu / mu) - (fpp - curv * fp);
    }
    worst = std::min(worst, r);
  }
  return worst;
}

BarrierSpec suggest_local_bound(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu;
  double c1 = std::max(1.0, vs.u0_sup);
  PsiProfile psi{1.0, 1.0};
  for (int k = 0; k <= 40; ++k) {
    int e = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;  // 0, -1, 1, -2, 2, ...
    double c2 = std::ldexp(1.0, e);
    double bound = probe_alpha_bound(vs.spec.domain, psi, c1, c2, mu);
    LocalBoundBarrier cand{1.05 * bound + 1e-9, c1, c2, psi};
    if (certified(cand, vs, grid)) return cand;
  }
  throw search_exhausted("no certified short-time bound: kernel too strong for zeta = c1 + c2*psi");
}

BarrierSpec suggest_subcritical(const ValidatedSpec& vs, const Grid& grid) {
  if (exponent_relations(vs).l_plus_mu_vs_two != Order::Below)
    throw FamilyIncompatible("subcritical bound needs l + mu < 2");
  const double mu = vs.spec.mu, l = vs.spec.l;
  double p = subcrit_p(mu, l);
  double need = std::pow(vs.u0_sup, 1.0 - l) / (1.0 - l) - 1.0;  // psi_min = 1
  double beta_floor = need > 0.0 ? std::pow(need, 1.0 / p) : 1e-6;
  for (int eb = 0; eb <= 12; ++eb) {
    PsiProfile psi{std::ldexp(1.0, eb), 1.0};
    for (int e = 0; e <= 20; ++e) {
      double scale = std::ldexp(1.0, e);
      SubcriticalSuper cand{scale, std::max(beta_floor, scale), psi};
      if (certified(cand, vs, grid)) return cand;
    }
  }
  throw search_exhausted("no certified subcritical bound within the doubling budget");
}

BarrierSpec suggest_critical_exp(const ValidatedSpec& vs, const Grid& grid) {
  if (exponent_relations(vs).l_plus_mu_vs_two != Order::Equal)
    throw FamilyIncompatible("exponential bound needs l + mu = 2");
  const double l = vs.spec.l;
  double beta_floor = std::max(1e-6, std::pow(vs.u0_sup, 1.0 - l) / (1.0 - l) - 1.0);
  for (int eb = 0; eb <= 12; ++eb) {
    PsiProfile psi{std::ldexp(1.0, eb), 1.0};
    for (int e = 0; e <= 20; ++e) {
      double scale = std::ldexp(1.0, e);
      CriticalExpSuper cand{scale, std::max(beta_floor, scale), psi};
      if (certified(cand, vs, grid)) return cand;
    }
  }
  throw search_exhausted("no certified exponential-in-time bound within the doubling budget");
}

BarrierSpec suggest_stationary(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l, a = vs.spec.a;
  Order lv1 = fuzzy_compare(l, 1.0);
  ExponentReport er = exponent_relations(vs);
  if (lv1 == Order::Above)
    throw FamilyIncompatible("stationary bound needs l < 1, or l = 1 with nu = mu");
  double perim = domain_perimeter(vs.spec.domain);

  if (lv1 == Order::Below) {
    if (er.nu_vs_crit == Order::Below)
      throw FamilyIncompatible("stationary bound with l < 1 needs nu >= mu + l - 1");
    double beta_floor = std::max(1e-6, std::pow(vs.u0_sup, 1.0 - l) / (1.0 - l) - 1.0);
    std::vector<double> bs;
    if (er.nu_vs_crit == Order::Equal) {
      // on the balance line b must sit between the kernel strength and a/mu
      double blo = vs.kernel_sup * perim, bhi = a / mu;
      if (!(blo < bhi))
        throw search_exhausted(
            "stationary bound on the critical line needs a/K > mu*|boundary|");
      for (int j = 1; j <= 7; ++j) bs.push_back(blo + (bhi - blo) * j / 8.0);
    } else {
      for (int eb = 0; eb <= 16; ++eb) bs.push_back(std::ldexp(1.0, eb));
    }
    for (double bval : bs) {
      PsiProfile psi{bval, 1.0};
      for (int e = 0; e <= 24; ++e) {
        StationarySuper cand{std::max(beta_floor, std::ldexp(1.0, e)), psi};
        if (certified(cand, vs, grid)) return cand;
      }
    }
    throw search_exhausted("no certified stationary bound within the doubling budget");
  }

  // l = 1, nu = mu: value (psi + B)^(1/mu); the boundary inequality pins b
  // between mu*K*|bd|*(sup psi + B) and a*(min psi + B)
  if (fuzzy_compare(nu, mu) != Order::Equal)
    throw FamilyIncompatible("stationary bound with l = 1 needs nu = mu");
  double phi_unit = psi_sup(vs.spec.domain, PsiProfile{1.0, 0.0});  // psi span per unit b
  for (int eB = 0; eB <= 40; ++eB) {
    double B = std::ldexp(1.0, eB);
    double coef = 1.0 - mu * vs.kernel_sup * perim * phi_unit;
    if (coef <= 0.0)
      throw search_exhausted("stationary bound: kernel too strong for this domain size");
    double blo = mu * vs.kernel_sup * perim * (1.0 + B) / coef;
    double bhi = a * (1.0 + B);
    if (!(blo < bhi)) continue;
    StationarySuper cand{B, PsiProfile{std::sqrt(blo * bhi), 1.0}};
    if (certified(cand, vs, grid)) return cand;
  }
  throw search_exhausted("no certified stationary bound: a/K at or below mu*|boundary|");
}

BarrierSpec suggest_layer_super(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l;
  if (fuzzy_compare(l, 1.0) == Order::Below)
    throw FamilyIncompatible("layer bound needs l >= 1");
  if (exponent_relations(vs).nu_vs_crit != Order::Above)
    throw FamilyIncompatible("layer bound needs nu > mu + l - 1");

  double delta = 0.4 * domain_inradius(vs.spec.domain);
  double beta_lo = std::max(mu / l, 2.0 * mu / (nu - mu));
  double beta = fuzzy_compare(l, 1.0) == Order::Above
                    ? 0.5 * (beta_lo + 2.0 * mu / (l - 1.0))
                    : std::max(1.5 * beta_lo, beta_lo + 1.0);
  double gamma = 0.25 * beta;
  double A = std::max(1.0, std::pow(vs.u0_sup, mu));
  double span = coord_span(vs.spec.domain);

  for (int er = 0; er <= 8; ++er) {
    double rho = std::ldexp(1.0, -er);
    double omega = 0.5 * std::min(delta * rho, 1.0);
    for (int ek = 1; ek <= 30; ++ek) {
      double eps = omega * std::ldexp(1.0, -ek);
      if (span * 4.0 * rho / eps > 32768.0) break;  // beyond the resolution cap
      BoundaryLayerSuper cand{rho, eps, omega, beta, gamma, A, delta};
      bool interior_ok = false;
      for (int ea = 0; ea <= 20; ++ea) {
        cand.A = A * std::ldexp(1.0, ea);
        if (layer_super_interior_min(cand, vs) > 0.0) {
          interior_ok = true;
          break;
        }
      }
      if (!interior_ok) continue;
      if (certified(cand, vs, grid)) return cand;
    }
  }
  throw search_exhausted("no certified layer bound within the doubling budget");
}

BarrierSpec suggest_blowup_sub(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l;
  double lo = std::max({0.0, 2.0 - mu, nu - mu + 1.0});
  double hi = std::min(1.0, l);
  if (!(lo < hi))
    throw FamilyIncompatible(
        "no admissible blow-up exponent: need max(0, 2-mu, nu-mu+1) < min(1, l)");
  if (vs.kernel_sup <= 0.0)
    throw search_exhausted("blow-up profile needs a nonvanishing kernel");

  double w = hi - lo;
  double gts[5] = {lo + 0.5 * w, lo + 0.25 * w, lo + 0.75 * w, lo + 0.05 * w,
                   lo + 0.95 * w};
  double T = std::min(1.0, vs.spec.horizon);
  for (double gt : gts) {
    double alpha = 2.0 * (1.0 - gt) / (gt + mu - 2.0);
    for (int eb = 0; eb <= 3; ++eb) {
      PsiProfile psi{std::ldexp(1.0, eb), 1.0};
      for (int ea = 0; ea <= 40; ++ea) {
        BlowupSub cand{gt, alpha, std::ldexp(1.0, ea), T, psi};
        try {
          auto rep = certify(cand, vs, grid, 9);
          if (rep.verdict == CertVerdict::Certified) return cand;
          // growing A raises the profile: once it overshoots the data there
          // is nothing left to gain on this (gt, b) branch
          if (rep.initial_margin < 0.0) break;
        } catch (const Error&) {
        }
      }
    }
  }
  throw search_exhausted("no certified blow-up profile: initial data too small?");
}

BarrierSpec suggest_exp_blowup(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu, a = vs.spec.a;
  if (fuzzy_compare(vs.spec.l, 1.0) != Order::Equal ||
      fuzzy_compare(vs.spec.nu, mu) != Order::Equal)
    throw FamilyIncompatible("exponential blow-up needs l = 1 and nu = mu");
  if (vs.kernel_sup <= 0.0)
    throw search_exhausted("blow-up profile needs a nonvanishing kernel");
  double T = std::min(1.0, vs.spec.horizon);
  double alpha = 2.0 / (mu - 1.0);
  for (int k = 0; k <= 50; ++k) {
    double bval = a / mu * (1.0 + std::ldexp(1.0, -k));
    PsiProfile psi{bval, 1.0};
    double bfloor = std::pow(alpha / (T * (mu * bval - a)), 1.0 / (mu - 1.0)) *
                    std::pow(T, alpha) * std::exp(-1.0);
    double B0 = std::max(1.0, 2.0 * bfloor);
    for (int eB = 0; eB <= 10; ++eB) {
      ExpBlowupSub cand{B0 * std::ldexp(1.0, eB), alpha, T, psi};
      try {
        auto rep = certify(cand, vs, grid, 9);
        if (rep.verdict == CertVerdict::Certified) return cand;
        if (rep.boundary_margin < 0.0) break;  // B cannot fix the flux balance
      } catch (const Error&) {
      }
    }
  }
  throw search_exhausted(
      "no certified exponential blow-up profile: a/k at or above mu*|boundary|?");
}

BarrierSpec suggest_layer_sub(const ValidatedSpec& vs, const Grid& grid) {
  const double mu = vs.spec.mu, nu = vs.spec.nu, l = vs.spec.l, a = vs.spec.a;
  if (fuzzy_compare(l, 1.0) != Order::Above)
    throw FamilyIncompatible("strip blow-up needs l > 1");
  if (exponent_relations(vs).nu_vs_crit != Order::Below)
    throw FamilyIncompatible("strip blow-up needs nu < mu + l - 1");
  double sigma = nu > mu ? 0.5 * (2.0 / (l - 1.0) + 2.0 / (nu - mu))
                         : 1.25 * 2.0 / (l - 1.0);
  double inr = domain_inradius(vs.spec.domain);
  double cap = nu < 1.0 ? std::min(vs.spec.horizon, 0.999 / (2.0 * a)) : vs.spec.horizon;
  for (int j = 0; j <= 6; ++j) {
    double depth = 0.45 * inr * std::ldexp(1.0, -j);
    for (int k = 0; k <= 24; ++k) {
      double t0 = cap * std::ldexp(1.0, -k);
      double w_end = ode_floor_value(vs.u0_inf, a, nu, t0);
      if (w_end <= 0.0) continue;
      double C = 0.9 * std::min(vs.u0_inf * std::pow(t0, sigma),
                                w_end * std::pow(depth, sigma));
      if (!(C > 0.0)) continue;
      BoundaryLayerSub cand{C, sigma, t0, depth};
      if (certified(cand, vs, grid)) return cand;
    }
  }
  throw search_exhausted("no certified strip profile: initial data too small for blow-up");
}

BarrierSpec suggest_ode(const ValidatedSpec& vs, const Grid& grid) {
  if (fuzzy_compare(vs.spec.nu, 1.0) != Order::Above) {
    if (vs.u0_inf <= 1.0)
      throw search_exhausted("decay floor needs inf u0 > 1 when nu <= 1");
  } else if (vs.u0_inf <= 0.0) {
    throw search_exhausted("decay floor needs inf u0 > 0");
  }
  OdeBarrier cand{vs.u0_inf};
  if (certified(cand, vs, grid)) return cand;
  throw search_exhausted("decay floor failed certification");
}

}  // namespace

BarrierSpec suggest_parameters(BarrierFamily f, const ValidatedSpec& vs, const Grid& grid) {
  switch (f) {
    case BarrierFamily::LocalBound: return suggest_local_bound(vs, grid);
    case BarrierFamily::SubcriticalSuper: return suggest_subcritical(vs, grid);
    case BarrierFamily::CriticalExpSuper: return suggest_critical_exp(vs, grid);
    case BarrierFamily::StationarySuper: return suggest_stationary(vs, grid);
    case BarrierFamily::BoundaryLayerSuper: return suggest_layer_super(vs, grid);
    case BarrierFamily::BlowupSub: return suggest_blowup_sub(vs, grid);
    case BarrierFamily::ExpBlowupSub: return suggest_exp_blowup(vs, grid);
    case BarrierFamily::BoundaryLayerSub: return suggest_layer_sub(vs, grid);
    case BarrierFamily::OdeBarrier: return suggest_ode(vs, grid);
  }
  throw ConfigError("bad_family", "unknown barrier family");
}

}  // namespace pmlab
