#include "pmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmlab {

double domain_inradius(const DomainRef& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return 0.5 * (iv->x_right - iv->x_left);
  return std::get<Ball>(d).radius;
}

double initial_value_at(const InitialData& u0, double y) {
  if (const auto* c = std::get_if<ConstantValue>(&u0)) return c->value;
  if (const auto* f = std::get_if<ClosedForm>(&u0)) {
    const auto& p = f->params;
    if (f->name == "affine") return p[0] + p[1] * y;
    if (f->name == "bump") return p[0] + p[1] * std::exp(-p[2] * (y - p[3]) * (y - p[3]));
    throw ConfigError("unknown_initial_form", "unknown closed-form initial data '" + f->name + "'");
  }
  throw ConfigError("sampled_not_pointwise",
                    "sampled initial data has no off-grid point values");
}

namespace {

// coordinate range of the domain (x for intervals, r for balls)
std::pair<double, double> coord_range(const DomainRef& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return {iv->x_left, iv->x_right};
  return {0.0, std::get<Ball>(d).radius};
}

std::pair<double, double> profile_range(const AffineProfile& p, const DomainRef& d) {
  auto [lo, hi] = coord_range(d);
  double a = p.c0 + p.c1 * lo, b = p.c0 + p.c1 * hi;
  return {std::min(a, b), std::max(a, b)};
}

// sup/inf of the initial data over the domain; closed forms are probed
// densely (the bump extremum may be interior)
std::pair<double, double> initial_range(const InitialData& u0, const DomainRef& d) {
  if (const auto* c = std::get_if<ConstantValue>(&u0)) return {c->value, c->value};
  if (const auto* s = std::get_if<Sampled>(&u0)) {
    if (s->values.empty())
      throw negative_initial_data("sampled initial data must not be empty");
    double lo = s->values[0], hi = s->values[0];
    for (double v : s->values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }
  auto [a, b] = coord_range(d);
  const int probes = 4097;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < probes; ++i) {
    double y = a + (b - a) * static_cast<double>(i) / (probes - 1);
    double v = initial_value_at(u0, y);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

ValidatedSpec validate(const ProblemSpec& s) {
  if (!(s.mu > 1.0))
    throw exponent_out_of_range("mu must be > 1 (got " + std::to_string(s.mu) + ")");
  if (!(s.nu > 0.0))
    throw exponent_out_of_range("nu must be > 0 (got " + std::to_string(s.nu) + ")");
  if (!(s.l > 0.0))
    throw exponent_out_of_range("l must be > 0 (got " + std::to_string(s.l) + ")");
  if (!(s.a > 0.0))
    throw exponent_out_of_range("a must be > 0 (got " + std::to_string(s.a) + ")");
  if (!(s.horizon > 0.0))
    throw ConfigError("bad_horizon", "horizon must be > 0");

  if (const auto* iv = std::get_if<Interval>(&s.domain)) {
    if (!(iv->x_right > iv->x_left))
      throw ConfigError("bad_domain", "interval needs x_right > x_left");
  } else {
    const auto& b = std::get<Ball>(s.domain);
    if (b.dim < 1) throw ConfigError("bad_domain", "ball dimension must be >= 1");
    if (!(b.radius > 0.0)) throw ConfigError("bad_domain", "ball radius must be > 0");
  }

  ValidatedSpec out;
  out.spec = s;

  if (const auto* ck = std::get_if<ConstantKernel>(&s.kernel)) {
    if (ck->k0 < 0.0) throw negative_kernel("constant kernel must be >= 0");
    out.kernel_sup = out.kernel_inf = ck->k0;
  } else if (const auto* sp = std::get_if<SpaceProductKernel>(&s.kernel)) {
    std::size_t nfaces = std::holds_alternative<Interval>(s.domain) ? 2 : 1;
    if (sp->face_values.size() != nfaces) {
      std::ostringstream os;
      os << "space-product kernel needs " << nfaces << " face values, got "
         << sp->face_values.size();
      throw ConfigError("bad_kernel_shape", os.str());
    }
    auto [plo, phi] = profile_range(sp->profile, s.domain);
    if (plo < 0.0) throw negative_kernel("kernel interior profile dips below 0 on the domain");
    double flo = *std::min_element(sp->face_values.begin(), sp->face_values.end());
    double fhi = *std::max_element(sp->face_values.begin(), sp->face_values.end());
    if (flo < 0.0) throw negative_kernel("kernel face value below 0");
    out.kernel_sup = fhi * phi;
    out.kernel_inf = flo * plo;
  } else {
    const auto& tk = std::get<TabulatedKernel>(s.kernel);
    std::size_t nfaces = std::holds_alternative<Interval>(s.domain) ? 2 : 1;
    if (tk.rows.size() != nfaces)
      throw ConfigError("bad_kernel_shape", "tabulated kernel row count must match face count");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : tk.rows) {
      if (row.empty()) throw ConfigError("bad_kernel_shape", "empty tabulated kernel row");
      if (row.size() != tk.rows[0].size())
        throw ConfigError("bad_kernel_shape", "ragged tabulated kernel");
      for (double v : row) {
        if (v < 0.0) throw negative_kernel("tabulated kernel entry below 0");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    out.kernel_sup = hi;
    out.kernel_inf = lo;
  }

  auto [ulo, uhi] = initial_range(s.initial, s.domain);
  if (ulo < 0.0) throw negative_initial_data("initial data dips below 0");
  out.u0_inf = ulo;
  out.u0_sup = uhi;
  return out;
}

ValidatedSpec validate(const ValidatedSpec& s) { return validate(s.spec); }

Order fuzzy_compare(double x, double y) {
  double tol = 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
  if (std::fabs(x - y) <= tol) return Order::Equal;
  return x < y ? Order::Below : Order::Above;
}

ExponentReport exponent_relations(const ValidatedSpec& s) {
  ExponentReport r;
  r.l_plus_mu = s.spec.l + s.spec.mu;
  r.crit_nu = s.spec.mu + s.spec.l - 1.0;
  r.l_plus_mu_vs_two = fuzzy_compare(r.l_plus_mu, 2.0);
  r.nu_vs_crit = fuzzy_compare(s.spec.nu, r.crit_nu);
  return r;
}

const char* to_string(Order o) {
  switch (o) {
    case Order::Below: return "below";
    case Order::Equal: return "equal";
    default: return "above";
  }
}

}  // namespace pmlab
