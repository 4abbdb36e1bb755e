#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pmlab/barriers.hpp"
#include "pmlab/errors.hpp"
#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"

using namespace pmlab;

namespace {

ValidatedSpec make_vs(double mu, double nu, double a, double l, double horizon,
                      Kernel k = ConstantKernel{1.0}, DomainRef d = Interval{0.0, 1.0},
                      InitialData u0 = ConstantValue{1.0}) {
  ProblemSpec s;
  s.mu = mu;
  s.nu = nu;
  s.a = a;
  s.l = l;
  s.horizon = horizon;
  s.kernel = k;
  s.domain = d;
  s.initial = u0;
  return validate(s);
}

// Analytic interior residual for the power-of-psi profiles: with
// grad u = u^q grad psi one gets
//   lap u^mu = mu b u^(mu+q-1) + mu (mu+q-1) |psi'|^2 u^(mu+2q-2).
double power_profile_residual(const ValidatedSpec& vs, const PsiProfile& psi, double q,
                              double u, double gprime, double x) {
  double gpsi = psi_gradient(vs.spec.domain, psi, x);
  double lap = vs.spec.mu * psi.b * std::pow(u, vs.spec.mu + q - 1.0) +
               vs.spec.mu * (vs.spec.mu + q - 1.0) * gpsi * gpsi *
                   std::pow(u, vs.spec.mu + 2.0 * q - 2.0);
  return std::pow(u, q) * gprime - lap + vs.spec.a * std::pow(u, vs.spec.nu);
}

double max_oracle_gap(const BarrierSpec& b, const ValidatedSpec& vs, const PsiProfile& psi,
                      double q, double gprime, const Grid& g, double t) {
  auto r = residual_interior(b, vs, g, t);
  double worst = 0.0;
  for (const auto& s : r) {
    double u = evaluate(b, vs, s.coord, t);
    double exact = power_profile_residual(vs, psi, q, u, gprime, s.coord);
    worst = std::max(worst, std::fabs(s.value - exact));
  }
  return worst;
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (int f = 0; f <= static_cast<int>(BarrierFamily::OdeBarrier); ++f) {
    auto fam = static_cast<BarrierFamily>(f);
    auto back = family_from_name(family_name(fam));
    REQUIRE(back.has_value());
    CHECK(*back == fam);
  }
  CHECK(!family_from_name("no_such_family").has_value());
}

TEST_CASE("roles match families") {
  ValidatedSpec vs = make_vs(1.4, 0.7, 1.0, 0.5, 1.0);
  SubcriticalSuper sc{1.0, 1.0, PsiProfile{1.0, 1.0}};
  CHECK(role_of(BarrierSpec{sc}) == BarrierRole::Super);
  CHECK(family_of(BarrierSpec{sc}) == BarrierFamily::SubcriticalSuper);
  OdeBarrier ob{2.0};
  CHECK(role_of(BarrierSpec{ob}) == BarrierRole::Sub);
  (void)vs;
}

TEST_CASE("closed-form point values") {
  SUBCASE("subcritical profile at the domain midpoint") {
    // mu = 1.4, l = 0.5: p = 0.5/0.1 = 5; at the midpoint psi = psi_min = 1
    // and g(0) = beta^p = 1, so u = [(1/2)(1+1)]^2 = 1.
    ValidatedSpec vs = make_vs(1.4, 0.7, 1.0, 0.5, 1.0);
    SubcriticalSuper sc{2.0, 1.0, PsiProfile{1.0, 1.0}};
    CHECK(evaluate(BarrierSpec{sc}, vs, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("strip profile at the wall at time zero") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 1.0, 2.0, 1.0);
    BoundaryLayerSub strip{1.0, 2.5, 1.0, 0.2};
    CHECK(evaluate(BarrierSpec{strip}, vs, 0.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("decay floor, linear absorption") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 0.5, 1.0, 2.0);
    OdeBarrier ob{2.0};
    CHECK(evaluate(BarrierSpec{ob}, vs, 0.3, 1.0) ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("decay floor residual is -a w^nu exactly") {
    // w' = -2 a w^nu makes the interior operator come out at -a w^nu; the
    // profile is space-constant so the stencil is exact.
    ValidatedSpec vs = make_vs(2.0, 2.0, 1.0, 1.0, 1.0);
    Grid g = build_grid(vs.spec.domain, 16);
    auto r = residual_interior(BarrierSpec{OdeBarrier{1.0}}, vs, g, 0.0);
    for (const auto& s : r) CHECK(s.value == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("ode floor branches") {
  // sublinear absorption: hits zero at the end of the positivity window
  CHECK(ode_floor_value(4.0, 1.0, 0.5, 0.5) ==
        doctest::Approx(std::pow(2.0 - 1.0 * 0.5, 2.0)).epsilon(1e-12));
  CHECK(ode_floor_value(4.0, 1.0, 0.5, 100.0) == 0.0);
  // superlinear: algebraic decay, never zero
  double w = ode_floor_value(1.0, 1.0, 2.0, 3.0);
  CHECK(w == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(ode_floor_value(1.0, 1.0, 3.0, 1e9) > 0.0);
}

TEST_CASE("parameter rejection") {
  ValidatedSpec sub_vs = make_vs(1.4, 0.7, 1.0, 0.5, 1.0);  // l + mu < 2
  SUBCASE("subcritical needs positive alpha and beta") {
    for (double bad : {-1.0, 0.0}) {
      CHECK_THROWS_AS(
          check_barrier(BarrierSpec{SubcriticalSuper{bad, 1.0, PsiProfile{1.0, 1.0}}},
                        sub_vs),
          ConfigError);
      CHECK_THROWS_AS(
          check_barrier(BarrierSpec{SubcriticalSuper{1.0, bad, PsiProfile{1.0, 1.0}}},
                        sub_vs),
          ConfigError);
    }
  }
  SUBCASE("psi profile must be positive") {
    CHECK_THROWS_AS(
        check_barrier(BarrierSpec{SubcriticalSuper{1.0, 1.0, PsiProfile{0.0, 1.0}}},
                      sub_vs),
        ConfigError);
    CHECK_THROWS_AS(
        check_barrier(BarrierSpec{SubcriticalSuper{1.0, 1.0, PsiProfile{1.0, -1.0}}},
                      sub_vs),
        ConfigError);
  }
  SUBCASE("rejection carries the barrier-parameter code") {
    try {
      check_barrier(BarrierSpec{SubcriticalSuper{0.0, 1.0, PsiProfile{1.0, 1.0}}}, sub_vs);
      FAIL("expected a throw");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.code()) == "invalid_barrier_parameters");
    }
  }
  SUBCASE("blow-up profile exponent window is open") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0);
    for (double gt : {-0.1, 0.0, 1.0, 1.5}) {
      CHECK_THROWS_AS(
          check_barrier(BarrierSpec{BlowupSub{gt, 2.0, 1.0, 1.0, PsiProfile{1.0, 1.0}}},
                        vs),
          ConfigError);
    }
    // alpha exactly at its bound is rejected (strict inequality)
    double gt = 0.5;
    double alpha_min = (1.0 - gt) / (gt + 2.0 - 2.0);
    CHECK_THROWS_AS(
        check_barrier(
            BarrierSpec{BlowupSub{gt, alpha_min, 1.0, 1.0, PsiProfile{1.0, 1.0}}}, vs),
        ConfigError);
    CHECK_NOTHROW(check_barrier(
        BarrierSpec{BlowupSub{gt, alpha_min * 1.01, 1.0, 1.0, PsiProfile{1.0, 1.0}}}, vs));
  }
  SUBCASE("layer bound parameter ordering") {
    ValidatedSpec vs = make_vs(2.0, 4.0, 1.0, 2.0, 1.0);  // nu > mu + l - 1 = 3
    BoundaryLayerSuper ok{1.0, 0.01, 0.1, 3.0, 0.75, 2.0, 0.2};
    CHECK_NOTHROW(check_barrier(BarrierSpec{ok}, vs));
    auto reject = [&](BoundaryLayerSuper p) {
      CHECK_THROWS_AS(check_barrier(BarrierSpec{p}, vs), ConfigError);
    };
    reject({1.0, 0.1, 0.1, 3.0, 0.75, 2.0, 0.2});    // eps = omega
    reject({1.0, 0.2, 0.1, 3.0, 0.75, 2.0, 0.2});    // eps > omega
    reject({1.0, 0.01, 0.3, 3.0, 0.75, 2.0, 0.2});   // omega > delta*rho
    reject({1.0, 0.01, 0.1, 2.0, 0.75, 2.0, 0.2});   // beta at lower bound 2mu/(nu-mu)
    reject({1.0, 0.01, 0.1, 4.0, 0.75, 2.0, 0.2});   // beta at upper bound 2mu/(l-1)
    reject({1.0, 0.01, 0.1, 3.0, 1.5, 2.0, 0.2});    // gamma = beta/2
    reject({1.0, 0.01, 0.1, 3.0, 0.75, 0.0, 0.2});   // A = 0
    reject({1.0, 0.01, 0.1, 3.0, 0.75, 2.0, 0.6});   // delta past the inradius
  }
  SUBCASE("strip exponent bound is strict") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0);  // nu < mu + l - 1
    CHECK_THROWS_AS(
        check_barrier(BarrierSpec{BoundaryLayerSub{1.0, 2.0, 1.0, 0.2}}, vs),
        ConfigError);  // sigma = 2/(l-1) exactly
    CHECK_NOTHROW(check_barrier(BarrierSpec{BoundaryLayerSub{1.0, 2.5, 1.0, 0.2}}, vs));
  }
  SUBCASE("decay floor level") {
    ValidatedSpec nu_small = make_vs(2.0, 0.5, 1.0, 1.0, 1.0);
    CHECK_THROWS_AS(check_barrier(BarrierSpec{OdeBarrier{1.0}}, nu_small), ConfigError);
    CHECK_NOTHROW(check_barrier(BarrierSpec{OdeBarrier{1.5}}, nu_small));
    ValidatedSpec nu_big = make_vs(2.0, 2.0, 1.0, 1.0, 1.0);
    CHECK_NOTHROW(check_barrier(BarrierSpec{OdeBarrier{0.5}}, nu_big));
  }
}

TEST_CASE("exponent-regime gates") {
  SUBCASE("subcritical profile refuses l + mu >= 2") {
    ValidatedSpec at = make_vs(1.5, 0.7, 1.0, 0.5, 1.0);   // l + mu = 2
    ValidatedSpec above = make_vs(2.0, 0.7, 1.0, 0.5, 1.0);
    SubcriticalSuper sc{1.0, 1.0, PsiProfile{1.0, 1.0}};
    CHECK_THROWS_AS(check_barrier(BarrierSpec{sc}, at), FamilyIncompatible);
    CHECK_THROWS_AS(check_barrier(BarrierSpec{sc}, above), FamilyIncompatible);
  }
  SUBCASE("exponential bound wants the balance line exactly") {
    ValidatedSpec off = make_vs(1.4, 0.7, 1.0, 0.5, 1.0);
    CriticalExpSuper ce{1.0, 1.0, PsiProfile{1.0, 1.0}};
    CHECK_THROWS_AS(check_barrier(BarrierSpec{ce}, off), FamilyIncompatible);
    ValidatedSpec on = make_vs(1.5, 0.7, 1.0, 0.5, 1.0);
    CHECK_NOTHROW(check_barrier(BarrierSpec{ce}, on));
  }
  SUBCASE("stationary bound refuses l > 1 and weak absorption") {
    StationarySuper st{1.0, PsiProfile{1.0, 1.0}};
    CHECK_THROWS_AS(check_barrier(BarrierSpec{st}, make_vs(2.0, 3.0, 1.0, 1.5, 1.0)),
                    FamilyIncompatible);
    // l < 1 needs nu >= mu + l - 1
    CHECK_THROWS_AS(check_barrier(BarrierSpec{st}, make_vs(2.0, 1.0, 1.0, 0.5, 1.0)),
                    FamilyIncompatible);
    CHECK_NOTHROW(check_barrier(BarrierSpec{st}, make_vs(2.0, 2.0, 1.0, 0.5, 1.0)));
    // l = 1 needs nu = mu
    CHECK_THROWS_AS(check_barrier(BarrierSpec{st}, make_vs(2.0, 1.0, 1.0, 1.0, 1.0)),
                    FamilyIncompatible);
    CHECK_NOTHROW(check_barrier(BarrierSpec{st}, make_vs(2.0, 2.0, 1.0, 1.0, 1.0)));
  }
  SUBCASE("blow-up profile needs an admissible exponent window") {
    // mu + min(1, l) <= max(2, nu + 1) closes the window
    ValidatedSpec vs = make_vs(2.0, 4.0, 1.0, 2.0, 1.0);  // nu - mu + 1 = 3 > 1
    CHECK_THROWS_AS(
        check_barrier(BarrierSpec{BlowupSub{0.5, 2.0, 1.0, 1.0, PsiProfile{1.0, 1.0}}},
                      vs),
        FamilyIncompatible);
  }
  SUBCASE("strip profile needs supercritical boundary growth") {
    BoundaryLayerSub strip{1.0, 2.5, 1.0, 0.2};
    CHECK_THROWS_AS(check_barrier(BarrierSpec{strip}, make_vs(2.0, 1.0, 1.0, 1.0, 1.0)),
                    FamilyIncompatible);  // l = 1
    CHECK_THROWS_AS(check_barrier(BarrierSpec{strip}, make_vs(2.0, 3.0, 1.0, 2.0, 1.0)),
                    FamilyIncompatible);  // nu = mu + l - 1
  }
}

TEST_CASE("validity windows") {
  SUBCASE("blow-up time bounds evaluation") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0);
    BarrierSpec b{BlowupSub{0.5, 2.0, 1.0, 0.75, PsiProfile{1.0, 1.0}}};
    CHECK(validity_end(b, vs) == doctest::Approx(0.75));
    CHECK_NOTHROW(evaluate(b, vs, 0.5, 0.74));
    CHECK_THROWS_AS(evaluate(b, vs, 0.5, 0.75), Error);
    CHECK_THROWS_AS(evaluate(b, vs, 0.5, -0.1), Error);
    try {
      evaluate(b, vs, 0.5, 2.0);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(std::string(e.code()) == "outside_validity_window");
    }
  }
  SUBCASE("strip window depends on depth") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0);
    BarrierSpec b{BoundaryLayerSub{1.0, 2.5, 0.5, 0.2}};
    CHECK_NOTHROW(evaluate(b, vs, 0.1, 0.55));  // t0 + s - t = 0.05 > 0
    CHECK_THROWS_AS(evaluate(b, vs, 0.0, 0.5), Error);
  }
  SUBCASE("sublinear decay floor has a finite positivity window") {
    ValidatedSpec vs = make_vs(2.0, 0.5, 1.0, 1.0, 5.0);
    BarrierSpec b{OdeBarrier{4.0}};
    double end = validity_end(b, vs);
    CHECK(end == doctest::Approx(2.0));  // A^(1/2)/(2*(1/2)*a)
    CHECK_NOTHROW(evaluate(b, vs, 0.5, 1.9));
    CHECK_THROWS_AS(evaluate(b, vs, 0.5, 2.1), Error);
  }
  SUBCASE("short-time bound outlives its claim by a factor of two") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 1.0, 1.0, 1.0,
                               ConstantKernel{0.01});
    LocalBoundBarrier lb{4.0, 1.0, 1.0, PsiProfile{1.0, 1.0}};
    BarrierSpec b{lb};
    CHECK(validity_end(b, vs) == doctest::Approx(0.25));
    CHECK_NOTHROW(evaluate(b, vs, 0.5, 0.2));
    CHECK_THROWS_AS(evaluate(b, vs, 0.5, 0.25), Error);
  }
}

TEST_CASE("interior residual converges at second order to the analytic form") {
  SUBCASE("interval, subcritical profile") {
    ValidatedSpec vs = make_vs(1.4, 0.7, 0.8, 0.5, 1.0);
    PsiProfile psi{4.0, 1.0};
    SubcriticalSuper sc{2.0, 1.5, psi};
    BarrierSpec b{sc};
    double t = 0.3;
    double p = 0.5 / (2.0 - 0.5 - 1.4);
    double gp = p * 2.0 * std::pow(2.0 * t + 1.5, p - 1.0);
    std::vector<double> gaps;
    for (int n : {32, 64, 128})
      gaps.push_back(max_oracle_gap(b, vs, psi, 0.5, gp, build_grid(vs.spec.domain, n),
                                    t));
    CHECK(std::log2(gaps[0] / gaps[1]) > 1.9);
    CHECK(std::log2(gaps[1] / gaps[2]) > 1.9);
  }
  SUBCASE("ball, blow-up profile") {
    ValidatedSpec vs = make_vs(2.5, 1.2, 1.0, 0.8, 1.0, ConstantKernel{1.0},
                               Ball{3, 1.0});
    PsiProfile psi{2.0, 1.0};
    BlowupSub bs{0.5, 1.0, 1.0, 0.5, psi};
    BarrierSpec b{bs};
    double t = 0.2;
    double gp = 1.0 * std::pow(0.5 - t, -2.0);
    std::vector<double> gaps;
    for (int n : {32, 64, 128})
      gaps.push_back(max_oracle_gap(b, vs, psi, 0.5, gp, build_grid(vs.spec.domain, n),
                                    t));
    CHECK(std::log2(gaps[0] / gaps[1]) > 1.9);
    CHECK(std::log2(gaps[1] / gaps[2]) > 1.9);
  }
}

TEST_CASE("blow-up profile grows without bound inside its window") {
  ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0);
  BarrierSpec b{BlowupSub{0.5, 2.0, 1.0, 1.0, PsiProfile{1.0, 1.0}}};
  double v0 = evaluate(b, vs, 0.5, 0.0);
  double v_late = evaluate(b, vs, 0.5, 1.0 - 1e-6);
  CHECK(v_late > 1e6 * v0);
  // and it is nondecreasing along a time ladder
  double prev = v0;
  for (int k = 1; k <= 20; ++k) {
    double v = evaluate(b, vs, 0.5, (1.0 - 1e-6) * k / 20.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("certification catches a vanishing kernel for the blow-up profile") {
  // with k = 0 the boundary inequality du/dn <= flux = 0 cannot hold
  ValidatedSpec vs = make_vs(2.0, 1.0, 0.1, 2.0, 1.0, ConstantKernel{0.0},
                             Interval{0.0, 1.0}, ConstantValue{50.0});
  Grid g = build_grid(vs.spec.domain, 64);
  BarrierSpec b{BlowupSub{0.5, 2.0, 1.0, 1.0, PsiProfile{1.0, 1.0}}};
  auto rep = certify(b, vs, g, 5);
  CHECK(rep.verdict == CertVerdict::Violated);
  CHECK(rep.boundary_margin < 0.0);
}

TEST_CASE("certified suggestions") {
  SUBCASE("stationary bound, linear boundary growth") {
    ValidatedSpec vs = make_vs(2.0, 2.0, 1.0, 1.0, 1.0, ConstantKernel{0.05});
    Grid g = build_grid(vs.spec.domain, 64);
    BarrierSpec got = suggest_parameters(BarrierFamily::StationarySuper, vs, g);
    auto rep = certify(got, vs, g, 9);
    CHECK(rep.verdict == CertVerdict::Certified);
    CHECK(rep.interior_margin >= -rep.tol_interior);
    CHECK(rep.boundary_margin >= -rep.tol_boundary);
    CHECK(rep.initial_margin >= -1e-6);
  }
  SUBCASE("short-time bound") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 1.0, 1.0, 1.0, ConstantKernel{0.01});
    Grid g = build_grid(vs.spec.domain, 64);
    BarrierSpec got = suggest_parameters(BarrierFamily::LocalBound, vs, g);
    CHECK(certify(got, vs, g, 9).verdict == CertVerdict::Certified);
    CHECK(std::isfinite(validity_end(got, vs)));
  }
  SUBCASE("decay floor") {
    ValidatedSpec vs = make_vs(2.0, 2.0, 1.0, 1.0, 1.0, ConstantKernel{1.0},
                               Interval{0.0, 1.0}, ConstantValue{3.0});
    Grid g = build_grid(vs.spec.domain, 64);
    BarrierSpec got = suggest_parameters(BarrierFamily::OdeBarrier, vs, g);
    CHECK(certify(got, vs, g, 9).verdict == CertVerdict::Certified);
    CHECK(evaluate(got, vs, 0.5, 0.0) == doctest::Approx(3.0));
  }
  SUBCASE("strip profile needs big data, then certifies") {
    ValidatedSpec small = make_vs(2.0, 1.0, 0.1, 2.0, 2.0, ConstantKernel{1.0},
                                  Interval{0.0, 1.0}, ConstantValue{1.0});
    Grid g = build_grid(small.spec.domain, 64);
    CHECK_THROWS_AS(suggest_parameters(BarrierFamily::BoundaryLayerSub, small, g),
                    InconclusiveError);
    ValidatedSpec big = make_vs(2.0, 1.0, 0.1, 2.0, 2.0, ConstantKernel{1.0},
                                Interval{0.0, 1.0}, ConstantValue{3000.0});
    BarrierSpec got = suggest_parameters(BarrierFamily::BoundaryLayerSub, big, g);
    auto rep = certify(got, big, g, 9);
    CHECK(rep.verdict == CertVerdict::Certified);
    CHECK(rep.side_margin >= 0.0);
  }
  SUBCASE("incompatible family propagates") {
    ValidatedSpec vs = make_vs(2.0, 1.0, 1.0, 1.0, 1.0);
    Grid g = build_grid(vs.spec.domain, 64);
    CHECK_THROWS_AS(suggest_parameters(BarrierFamily::SubcriticalSuper, vs, g),
                    FamilyIncompatible);
  }
}

TEST_CASE("boundary residual tightens under refinement") {
  // the flux quadrature is the only discretized piece; the residual at a
  // face should settle down as the grid doubles
  ValidatedSpec vs = make_vs(1.4, 0.7, 0.8, 0.5, 1.0, ConstantKernel{0.3});
  BarrierSpec b{SubcriticalSuper{2.0, 1.5, PsiProfile{2.0, 1.0}}};
  double t = 0.2;
  auto r64 = residual_boundary(b, vs, build_grid(vs.spec.domain, 64), t);
  auto r128 = residual_boundary(b, vs, build_grid(vs.spec.domain, 128), t);
  auto r256 = residual_boundary(b, vs, build_grid(vs.spec.domain, 256), t);
  for (std::size_t f = 0; f < r64.size(); ++f) {
    double d1 = std::fabs(r64[f].value - r128[f].value);
    double d2 = std::fabs(r128[f].value - r256[f].value);
    CHECK(d2 < d1);
    CHECK(d2 < 1e-4);
  }
}
