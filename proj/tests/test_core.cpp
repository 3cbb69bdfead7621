#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monokin/config.hpp"
#include "monokin/expression.hpp"
#include "monokin/fit.hpp"
#include "monokin/grid.hpp"
#include "monokin/initial.hpp"
#include "monokin/io.hpp"
#include "monokin/numerics.hpp"
#include "monokin/parallel.hpp"
#include "monokin/state.hpp"
#include "support/oracles.hpp"

using namespace monokin;
using std::numbers::pi;

TEST_SUITE("core") {

TEST_CASE("quadrature_x examples") {
  const TorusGrid g(64);
  CHECK(quadrature_x(Field(64, 1.0), g) == doctest::Approx(1.0).epsilon(1e-15));
  for (int n : {4, 7, 64, 129}) {
    const TorusGrid gn(n);
    const Field s = sample(gn, [](double x) { return std::sin(2 * pi * x); });
    CHECK(std::fabs(quadrature_x(s, gn)) <= 1e-12);
  }
  const Field c2 = sample(g, [](double x) { return std::cos(2 * pi * x) * std::cos(2 * pi * x); });
  // closed form: int_0^1 cos^2(2 pi x) dx = x/2 + sin(4 pi x)/(8 pi) |_0^1
  CHECK(std::fabs(quadrature_x(c2, g) - 0.5) <= 1e-12);
}

TEST_CASE("quadrature is translation invariant and shifts wrap") {
  const TorusGrid g(50, 2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  Field f(50);
  for (double& v : f) v = U(rng);
  CHECK(shift_cells(f, 50) == f);
  CHECK(shift_cells(f, -100) == f);
  const Field s = shift_cells(f, 17);
  CHECK(s[17] == f[0]);
  CHECK(quadrature_x(s, g) == doctest::Approx(quadrature_x(f, g)).epsilon(1e-14));
  CHECK(g.wrap(-1) == 49);
  CHECK(g.wrap(123) == 23);
  CHECK(g.periodic_distance(0.1, 1.9) == doctest::Approx(0.2));
}

TEST_CASE("xi grid is symmetric") {
  const XiGrid xg(10, 2.5);
  for (int j = 0; j < 10; ++j) CHECK(xg.center(j) == doctest::Approx(-xg.center(xg.mirror(j))));
  CHECK(xg.dxi() == doctest::Approx(0.5));
}

TEST_CASE("quadrature_phase examples") {
  const PhaseGrid pg{TorusGrid(16), XiGrid(128, 8.0)};
  Profile zero(pg);
  CHECK(quadrature_phase(zero) == 0.0);
  const Field rho(16, 1.0);
  const Profile gauss = gaussian_profile(pg, rho, 1.0);
  CHECK(std::fabs(quadrature_phase(gauss) - 1.0) <= 1e-8);
  Profile one(pg);
  one.at(3, 40) = 1.0;
  CHECK(quadrature_phase(one) == doctest::Approx(pg.cell_measure()).epsilon(1e-15));
  // marginal composition
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  Profile r(pg);
  for (double& v : r.g) v = U(rng);
  CHECK(quadrature_phase(r) == doctest::Approx(quadrature_x(r.marginal(), pg.x)).epsilon(1e-13));
}

TEST_CASE("tridiagonal solve matches dense elimination") {
  const int n = 6;
  std::vector<double> lo = {0, 1, -1, 2, 0.5, 1}, di = {4, 5, 6, 7, 5, 4},
                      up = {1, 2, 1, -1, 1, 0}, rhs = {1, 2, 3, 4, 5, 6};
  std::vector<double> x = rhs;
  REQUIRE(solve_tridiagonal(lo, di, up, x));
  for (int i = 0; i < n; ++i) {
    double r = di[i] * x[i];
    if (i > 0) r += lo[i] * x[i - 1];
    if (i < n - 1) r += up[i] * x[i + 1];
    CHECK(r == doctest::Approx(rhs[i]).epsilon(1e-13));
  }
}

TEST_CASE("periodic spline reproduces second derivatives of a trig mode") {
  const int n = 128;
  const double h = 1.0 / n;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = std::sin(2 * pi * i * h);
  const std::vector<double> m = periodic_spline_second_derivatives(y, h);
  double err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::fabs(m[i] + 4 * pi * pi * y[i]));
  CHECK(err < 1e-2 * 4 * pi * pi);
}

TEST_CASE("conjugate gradient solves a weighted SPD system") {
  const int n = 20;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + 0.1 * i;
  // A = I + (1/w) L, self-adjoint in the w-product when L symmetric
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    for (int i = 0; i < n; ++i) {
      const double lap = 2 * x[i] - x[(i + 1) % n] - x[(i + n - 1) % n];
      y[i] = x[i] + lap / w[i];
    }
  };
  std::vector<double> b(n), x(n, 0.0), r(n);
  for (int i = 0; i < n; ++i) b[i] = std::cos(i);
  conjugate_gradient(apply, w, b, x, 1e-13, 200);
  apply(x, r);
  for (int i = 0; i < n; ++i) CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-10));
}

TEST_CASE("bisect finds the root") {
  CHECK(bisect([](double x) { return x * x - 2; }, 0, 2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("expression compiler") {
  CHECK(Expression::compile("2*x+1")(3) == doctest::Approx(7));
  CHECK(Expression::compile("cos(2*pi*x)/(3*pi)")(0.1) ==
        doctest::Approx(u0_symmetric(0.1)).epsilon(1e-15));
  CHECK(Expression::compile("-x^2")(3) == doctest::Approx(-9));
  CHECK_THROWS_AS(Expression::compile("sin(x"), ExpressionError);
  CHECK_THROWS_AS(Expression::compile("foo(x)"), ExpressionError);
}

TEST_CASE("initial data of the symmetric and asymmetric cases") {
  CHECK(std::fabs(u0_symmetric(0.25)) < 1e-15);
  CHECK(std::fabs(u0_symmetric(0.75)) < 1e-15);
  // odd about its zeros
  for (double y : {0.01, 0.1, 0.2}) CHECK(u0_symmetric(0.25 + y) == doctest::Approx(-u0_symmetric(0.25 - y)));
  // the asymmetric profile is not odd about x = 1/4 (or any fixed point tested)
  double worst = 0.0;
  for (double y : {0.05, 0.1, 0.2}) worst = std::max(worst, std::fabs(u0_asymmetric(0.25 + y) + u0_asymmetric(0.25 - y)));
  CHECK(worst > 1e-3);
}

TEST_CASE("config: symmetric case file") {
  const RunConfig c = parse_config(
      "# symmetric case\nscenario = eas\nnx = 64\nnxi = 32\nxi_max = 2.53\nkernel = const\n");
  CHECK(c.scenario == Scenario::Eas);
  CHECK(c.kernel.kind == KernelKind::Constant);
  CHECK(c.kernel(0.3) == 1.0);
  CHECK(c.sigma_g0 == doctest::Approx(0.1));
  CHECK(c.u0 == "sym");
  CHECK(c.sample_times() == std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
}

TEST_CASE("config errors") {
  const std::string base = "scenario = vlasov\nnx = 64\nnxi = 32\nxi_max = 2.53\n";
  SUBCASE("epsilon = 0") {
    try {
      parse_config(base + "epsilon = 0\n");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "epsilon");
    }
  }
  SUBCASE("missing xi_max") {
    try {
      parse_config("scenario = eas\nnx = 64\nnxi = 32\n");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "xi_max");
      CHECK(std::string(e.what()).find("xi_max") != std::string::npos);
    }
  }
  SUBCASE("bogus scenario") {
    try {
      parse_config("scenario = bogus\nnx = 64\nnxi = 32\nxi_max = 2\n");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "scenario");
    }
  }
  SUBCASE("line numbers in parse errors") {
    try {
      parse_config("scenario = eas\n\nnx 64\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("unknown key") {
    CHECK_THROWS_AS(parse_config(base + "bogus_key = 1\n"), ValidationError);
  }
  SUBCASE("nx below 4") {
    CHECK_THROWS_AS(parse_config("scenario = eas\nnx = 3\nnxi = 32\nxi_max = 2\n"), ValidationError);
  }
  SUBCASE("fp needs sigma > 0 and xi_max >= 6") {
    CHECK_THROWS_AS(parse_config("scenario = fp\nnx = 64\nnxi = 32\nxi_max = 8\nsigma = 0\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("scenario = fp\nnx = 64\nnxi = 32\nxi_max = 4\nsigma = 0.1\n"),
                    ValidationError);
  }
  SUBCASE("bad u0 expression") {
    CHECK_THROWS_AS(parse_config(base + "u0 = sin(\n"), ValidationError);
  }
}

TEST_CASE("sigma_from_eps solves sigma log(1/sigma) = eps on (0, 1/e)") {
  for (double eps : {0.2, 0.1, 0.05, 1e-3}) {
    const double s = sigma_from_eps(eps);
    CHECK(s > 0.0);
    CHECK(s < std::exp(-1.0));
    CHECK(s * std::log(1.0 / s) == doctest::Approx(eps).epsilon(1e-12));
  }
  // independent check at eps = 0.1 by a fixed-point iteration s = eps / log(1/s)
  double s = 0.01;
  for (int k = 0; k < 200; ++k) s = 0.1 / std::log(1.0 / s);
  CHECK(sigma_from_eps(0.1) == doctest::Approx(s).epsilon(1e-10));
  CHECK_THROWS(sigma_from_eps(0.5));
}

TEST_CASE("sweep plan coupling and ordering") {
  const std::string base = "scenario = fp\nnx = 64\nnxi = 32\nxi_max = 8\nsigma = 0.1\n";
  const SweepPlan p = parse_plan(base + "sweep_param = epsilon\nsweep_values = 0.2, 0.1, 0.05\ncoupling = optimal\n");
  CHECK(p.values.size() == 3);
  const RunConfig m = plan_member(p, 0.1);
  CHECK(m.params.epsilon == 0.1);
  CHECK(m.params.delta == doctest::Approx(0.01));
  CHECK(m.params.sigma == doctest::Approx(sigma_from_eps(0.1)));
  CHECK_THROWS_AS(parse_plan(base + "sweep_param = epsilon\nsweep_values = 0.05, 0.1\n"), ValidationError);
  CHECK_THROWS_AS(parse_plan(base + "sweep_param = epsilon\nsweep_values = 0.1, 0.1\n"), ValidationError);
}

TEST_CASE("time tags follow the {:.4} format") {
  CHECK(format_time_tag(0.0) == "0.0");
  CHECK(format_time_tag(0.5) == "0.5");
  CHECK(format_time_tag(1.0) == "1.0");
  CHECK(format_time_tag(1.0 / 3.0) == "0.3333");
  CHECK(format_time_tag(2.0 / 3.0) == "0.6667");
  CHECK(format_time_tag(10.0) == "10.0");
  CHECK(format_time_tag(12345.0) == "1.234e+04");
  CHECK(format_time_tag(1e-5) == "1e-05");
}

TEST_CASE("diagnostics csv leaves missing values empty") {
  DiagnosticsRecord r;
  r.t = 0.5;
  r.set("mass", 1.0);
  const std::string csv = diagnostics_csv({r});
  CHECK(csv.rfind("t,mass,momentum,energy,mod_energy,boltzmann,rel_entropy,fisher,e_min,e_total,"
                  "w1_rho,w1_mom,w1_g,xi_m2\n", 0) == 0);
  CHECK(csv.find("\n0.5,1,,,,,,,,,,,,\n") != std::string::npos);
  CHECK_THROWS(r.set("energy", NAN));
}

TEST_CASE("line fits") {
  const std::vector<double> x = {1, 2, 4, 8}, y = {3, 12, 48, 192};
  const LineFit f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> x2 = {0, 1, 2, 3, 4}, y2 = {0.1, 0.9, 2.2, 2.8, 4.1};
  const LineFit g = fit_line(x2, y2);
  CHECK(g.slope_lo < g.slope);
  CHECK(g.slope_hi > g.slope);
  // two points: no interval
  const std::vector<double> x3 = {1, 2}, y3 = {1, 2};
  CHECK(std::isnan(fit_line(x3, y3).slope_lo));
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](int i) { hits[i] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, [](int i) {
    if (i == 7) throw std::runtime_error("x");
  }, 3));
}

}  // TEST_SUITE
