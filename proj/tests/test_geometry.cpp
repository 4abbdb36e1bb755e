// Grids and exact cell measures, boundary faces, layer constants, the
// auxiliary Neumann profile (closed forms cross-checked by the independent
// discrete solve), and the nonlocal boundary-flux quadrature.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "pmlab/errors.hpp"
#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"

using namespace pmlab;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double max_abs_err(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double psi_oracle_error(const DomainRef& d, const PsiProfile& p, int n) {
  Grid g = build_grid(d, n);
  GridField num = solve_auxiliary_psi(g, p);
  std::vector<double> exact(g.n);
  for (int i = 0; i < g.n; ++i) exact[i] = psi_value(d, p, g.centers[i]);
  return max_abs_err(num.values, exact);
}

}  // namespace

TEST_CASE("grid measures are exact and faces carry the right data") {
  Grid gi = build_grid(Interval{-1.0, 3.0}, 16);
  CHECK(gi.h == 0.25);
  CHECK(gi.centers.front() == -1.0 + 0.125);
  CHECK(gi.centers.back() == 3.0 - 0.125);
  CHECK(sum(gi.weights) == doctest::Approx(4.0).epsilon(1e-14));
  REQUIRE(gi.boundary.size() == 2);
  CHECK(gi.boundary[0].cell == 0);
  CHECK(gi.boundary[0].orientation == -1);
  CHECK(gi.boundary[0].measure == 1.0);
  CHECK(gi.boundary[0].position == -1.0);
  CHECK(gi.boundary[1].cell == 15);
  CHECK(gi.boundary[1].orientation == +1);
  CHECK(gi.boundary[1].position == 3.0);
  CHECK(gi.face_coef.size() == 15);
  CHECK(gi.face_coef[3] == doctest::Approx(1.0 / 0.25).epsilon(1e-15));
  CHECK(gi.gmax == doctest::Approx(2.0 / (0.25 * 0.25)).epsilon(1e-15));

  for (int dim : {1, 2, 3}) {
    Grid gb = build_grid(Ball{dim, 1.5}, 48);
    CHECK_MESSAGE(sum(gb.weights) == doctest::Approx(domain_volume(Ball{dim, 1.5})).epsilon(1e-13),
                  "dim=" << dim);
    REQUIRE(gb.boundary.size() == 1);
    CHECK(gb.boundary[0].cell == 47);
    CHECK(gb.boundary[0].orientation == +1);
    CHECK(gb.boundary[0].position == 1.5);
    CHECK(gb.boundary[0].measure ==
          doctest::Approx(domain_perimeter(Ball{dim, 1.5})).epsilon(1e-13));
    // gmax matches its defining formula
    double want = 0.0;
    for (int i = 0; i < gb.n; ++i)
      want = std::max(want, (gb.face_w[i] + gb.face_w[i + 1]) / (gb.h * gb.weights[i]));
    CHECK(gb.gmax == want);
  }

  CHECK_THROWS_AS((void)build_grid(Interval{0.0, 1.0}, 3), ConfigError);
  try {
    (void)build_grid(Interval{0.0, 1.0}, 3);
  } catch (const ConfigError& e) {
    CHECK(e.code() == "too_few_cells");
  }
}

TEST_CASE("domain volume and perimeter closed forms") {
  CHECK(domain_volume(Interval{0.0, 2.5}) == 2.5);
  CHECK(domain_perimeter(Interval{0.0, 2.5}) == 2.0);
  CHECK(domain_volume(Ball{1, 2.0}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(domain_perimeter(Ball{1, 2.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(domain_volume(Ball{2, 2.0}) == doctest::Approx(M_PI * 4.0).epsilon(1e-14));
  CHECK(domain_perimeter(Ball{2, 2.0}) == doctest::Approx(2.0 * M_PI * 2.0).epsilon(1e-14));
  CHECK(domain_volume(Ball{3, 2.0}) == doctest::Approx(4.0 / 3.0 * M_PI * 8.0).epsilon(1e-14));
  CHECK(domain_perimeter(Ball{3, 2.0}) == doctest::Approx(4.0 * M_PI * 4.0).epsilon(1e-14));
}

TEST_CASE("geometry constants of the boundary layer") {
  GeometryConstants ci = geometry_constants(Interval{0.0, 1.0}, 0.1);
  CHECK(ci.volume == 1.0);
  CHECK(ci.perimeter == 2.0);
  CHECK(ci.inradius == 0.5);
  CHECK(ci.jac_sup == 2.0);
  CHECK(ci.jac_inf == 2.0);
  CHECK(ci.curvature_sup == 0.0);
  CHECK(ci.layer_depth == 0.1);

  GeometryConstants cb = geometry_constants(Ball{2, 2.0}, 0.5);
  CHECK(cb.perimeter == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(cb.jac_sup == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(cb.jac_inf == doctest::Approx(3.0 * M_PI).epsilon(1e-14));
  CHECK(cb.curvature_sup == doctest::Approx(1.0 / 1.5).epsilon(1e-14));

  GeometryConstants c3 = geometry_constants(Ball{3, 1.0}, 0.2);
  CHECK(c3.jac_inf == doctest::Approx(4.0 * M_PI * 0.64).epsilon(1e-14));
  CHECK(c3.curvature_sup == doctest::Approx(2.0 / 0.8).epsilon(1e-14));

  CHECK_THROWS_AS((void)geometry_constants(Interval{0.0, 1.0}, 0.0), ConfigError);
  CHECK_THROWS_AS((void)geometry_constants(Interval{0.0, 1.0}, 0.5), ConfigError);
  try {
    (void)geometry_constants(Ball{2, 1.0}, 1.5);
  } catch (const ConfigError& e) {
    CHECK(e.code() == "layer_too_deep");
  }
}

TEST_CASE("curvature term and boundary distance") {
  CHECK(curvature_term(Interval{0.0, 1.0}, 0.3) == 0.0);
  CHECK(curvature_term(Ball{3, 2.0}, 0.5) == doctest::Approx(2.0 / 1.5).epsilon(1e-15));
  CHECK(curvature_term(Ball{1, 2.0}, 0.5) == 0.0);
  CHECK_THROWS_AS((void)curvature_term(Ball{2, 1.0}, 1.0), ConfigError);
  CHECK_THROWS_AS((void)curvature_term(Ball{2, 1.0}, -0.1), ConfigError);

  CHECK(boundary_distance(Interval{0.0, 1.0}, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(boundary_distance(Interval{0.0, 1.0}, 0.8) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(boundary_distance(Ball{2, 1.5}, 0.25) == 1.25);
}

TEST_CASE("auxiliary profile closed forms satisfy the stated identities") {
  PsiProfile p{2.5, 0.25};

  Interval iv{0.0, 1.0};
  CHECK(psi_value(iv, p, 0.5) == 0.25);  // minimum at the midpoint
  CHECK(psi_value(iv, p, 1.0) == doctest::Approx(0.25 + 2.5 / 8.0).epsilon(1e-15));
  CHECK(psi_gradient(iv, p, 1.0) == doctest::Approx(2.5 * 0.5).epsilon(1e-15));
  CHECK(psi_gradient(iv, p, 0.0) == doctest::Approx(-2.5 * 0.5).epsilon(1e-15));
  CHECK(psi_normal_derivative(iv, p) == doctest::Approx(2.5 * 1.0 / 2.0).epsilon(1e-15));
  CHECK(psi_sup(iv, p) == psi_value(iv, p, 0.0));
  CHECK(psi_gradient_sup(iv, p) == doctest::Approx(1.25).epsilon(1e-15));

  Ball b3{3, 1.0};
  CHECK(psi_value(b3, p, 0.0) == 0.25);
  CHECK(psi_value(b3, p, 1.0) == doctest::Approx(0.25 + 2.5 / 6.0).epsilon(1e-15));
  CHECK(psi_gradient(b3, p, 1.0) == doctest::Approx(2.5 / 3.0).epsilon(1e-15));
  // normal derivative equals b |Omega| / |boundary| = b R / dim
  CHECK(psi_normal_derivative(b3, p) == doctest::Approx(2.5 / 3.0).epsilon(1e-14));
  CHECK(psi_sup(b3, p) == psi_value(b3, p, 1.0));

  // second difference of the closed form reproduces lap(psi) = b on intervals
  double h = 1e-3;
  double lap = (psi_value(iv, p, 0.3 + h) - 2.0 * psi_value(iv, p, 0.3) +
                psi_value(iv, p, 0.3 - h)) /
               (h * h);
  CHECK(lap == doctest::Approx(2.5).epsilon(1e-7));
}

TEST_CASE("discrete Neumann solve agrees with the closed form at order 2") {
  PsiProfile p{3.0, 1.0};
  struct CaseDef {
    DomainRef d;
    const char* tag;
  };
  const CaseDef cases[] = {
      {Interval{0.0, 1.0}, "interval"},
      {Ball{2, 1.0}, "disc"},
      {Ball{3, 1.25}, "ball3"},
  };
  for (const auto& c : cases) {
    double e32 = psi_oracle_error(c.d, p, 32);
    double e64 = psi_oracle_error(c.d, p, 64);
    double span = 2.0 * domain_inradius(c.d);
    double h32 = std::holds_alternative<Interval>(c.d) ? span / 32 : domain_inradius(c.d) / 32;
    double h64 = 0.5 * h32;
    CHECK_MESSAGE(e32 <= 5.0 * h32 * h32 * p.b, c.tag << " e32=" << e32);
    CHECK_MESSAGE(e64 <= 5.0 * h64 * h64 * p.b, c.tag << " e64=" << e64);
    if (e64 > 1e-13) {
      double order = std::log2(e32 / e64);
      CHECK_MESSAGE(order >= 1.9, c.tag << " order=" << order);
    }
  }
}

TEST_CASE("kernel rows: values per variant, shape violations") {
  Grid g = build_grid(Interval{0.0, 1.0}, 8);

  std::vector<double> row = kernel_row(ConstantKernel{0.75}, g, 0);
  REQUIRE(row.size() == 8);
  for (double v : row) CHECK(v == 0.75);

  Kernel sp = SpaceProductKernel{{2.0, 0.5}, AffineProfile{1.0, 1.0}};
  row = kernel_row(sp, g, 0);
  CHECK(row[0] == doctest::Approx(2.0 * (1.0 + g.centers[0])).epsilon(1e-15));
  row = kernel_row(sp, g, 1);
  CHECK(row[7] == doctest::Approx(0.5 * (1.0 + g.centers[7])).epsilon(1e-15));

  std::vector<std::vector<double>> rows = {{1, 2, 3, 4, 5, 6, 7, 8}, {8, 7, 6, 5, 4, 3, 2, 1}};
  Kernel tk = TabulatedKernel{rows};
  CHECK(kernel_row(tk, g, 1) == rows[1]);

  CHECK_THROWS_AS((void)kernel_row(ConstantKernel{1.0}, g, 2), ConfigError);
  CHECK_THROWS_AS((void)kernel_row(ConstantKernel{1.0}, g, -1), ConfigError);
  Kernel short_tk = TabulatedKernel{{{1.0, 2.0}, {3.0, 4.0}}};  // 2 cols vs 8 cells
  CHECK_THROWS_AS((void)kernel_row(short_tk, g, 0), ConfigError);
  Kernel one_row = TabulatedKernel{{{1, 2, 3, 4, 5, 6, 7, 8}}};
  CHECK_THROWS_AS((void)kernel_row(one_row, g, 0), ConfigError);
  Kernel one_face = SpaceProductKernel{{2.0}, AffineProfile{1.0, 0.0}};
  CHECK_THROWS_AS((void)kernel_row(one_face, g, 0), ConfigError);
}

TEST_CASE("nonlocal flux quadrature matches hand integrals") {
  Grid g = build_grid(Interval{0.0, 1.0}, 64);

  // constant field c, constant kernel k0: integral = k0 * c^l * |Omega|
  GridField fld;
  fld.values.assign(64, 2.0);
  double q = nonlocal_flux(g, ConstantKernel{0.5}, fld, 3.0, 0);
  CHECK(q == doctest::Approx(0.5 * 8.0).epsilon(1e-13));

  // affine field with l = 1: midpoint quadrature is exact for polynomials
  // of degree <= 1 per cell; integral of (1 + y) over [0,1] is 1.5
  for (int i = 0; i < 64; ++i) fld.values[i] = 1.0 + g.centers[i];
  q = nonlocal_flux(g, ConstantKernel{2.0}, fld, 1.0, 1);
  CHECK(q == doctest::Approx(2.0 * 1.5).epsilon(1e-13));

  // space-product kernel contributes its own affine factor: integrand
  // (1+y)*(1+y) = quadratic; midpoint quadrature err = O(h^2), small at n=64
  Kernel sp = SpaceProductKernel{{1.0, 3.0}, AffineProfile{1.0, 1.0}};
  q = nonlocal_flux(g, sp, fld, 1.0, 1);
  CHECK(q == doctest::Approx(3.0 * 7.0 / 3.0).epsilon(1e-4));

  // ball: constant field over Ball(3,1): k0 * c^l * volume
  Grid gb = build_grid(Ball{3, 1.0}, 32);
  GridField fb;
  fb.values.assign(32, 3.0);
  q = nonlocal_flux(gb, ConstantKernel{1.0}, fb, 2.0, 0);
  CHECK(q == doctest::Approx(9.0 * domain_volume(Ball{3, 1.0})).epsilon(1e-13));
}

TEST_CASE("initial data sampling onto grids") {
  Grid g = build_grid(Interval{0.0, 1.0}, 8);

  GridField f = sample_initial(ConstantValue{1.25}, g);
  REQUIRE(f.values.size() == 8);
  for (double v : f.values) CHECK(v == 1.25);
  CHECK(f.time == 0.0);

  f = sample_initial(ClosedForm{"affine", {1.0, 2.0, 0.0, 0.0}}, g);
  for (int i = 0; i < 8; ++i)
    CHECK(f.values[i] == doctest::Approx(1.0 + 2.0 * g.centers[i]).epsilon(1e-15));

  std::vector<double> vals = {1, 2, 3, 4, 5, 6, 7, 8};
  f = sample_initial(Sampled{vals}, g);
  CHECK(f.values == vals);

  try {
    (void)sample_initial(Sampled{{1.0, 2.0}}, g);
    FAIL_CHECK("expected bad_initial_shape");
  } catch (const ConfigError& e) {
    CHECK(e.code() == "bad_initial_shape");
  }
}
