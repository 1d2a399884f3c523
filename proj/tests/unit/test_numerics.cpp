#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "revsphere/numerics.hpp"
#include "revsphere/ode.hpp"

using namespace revsphere;
using Catch::Approx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("interval rejects empty and non-finite ranges", "[numerics]") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, INFINITY), DomainError);
  CHECK(Interval(0.0, 2.0).mid() == 1.0);
}

TEST_CASE("adaptive quadrature", "[numerics]") {
  const double pi = std::numbers::pi;
  CHECK_THAT(integrate_adaptive([](double x) { return std::sin(x); }, Interval(0.0, pi)).value, WithinAbs(2.0, 1e-13));
  CHECK_THAT(integrate_adaptive([](double x) { return std::exp(x); }, 1.0, 0.0).value,
             WithinAbs(1.0 - std::exp(1.0), 1e-13));
  // Kink at 1/3 forces subdivision.
  const QuadResult q = integrate_adaptive([](double x) { return std::abs(x - 1.0 / 3.0); }, Interval(0.0, 1.0), 1e-12);
  CHECK_THAT(q.value, WithinAbs(5.0 / 18.0, 1e-12));
  CHECK(q.err_estimate <= 1e-12);

  SECTION("budget exhaustion reports the best estimate") {
    try {
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, Interval(0.0, 1.0), 1e-15, 8);
      FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
      CHECK(e.best().value > 1.0);
    }
  }
}

TEST_CASE("adaptive quadrature agrees with composite Gauss on smooth integrands", "[numerics][property]") {
  gen::for_all(40, 11, [](gen::Source& g) {
    const double a = g.real(-2.0, 2.0), w = g.real(0.1, 3.0), k = g.real(0.5, 6.0), c = g.real(-1.0, 1.0);
    auto f = [&](double x) { return std::cos(k * x + c) * std::exp(-0.3 * x * x); };
    const double ref = oracle::gauss5(f, a, a + w, 400);
    CHECK_THAT(integrate_adaptive(f, Interval(a, a + w), 1e-12).value, WithinAbs(ref, 1e-11));
  });
}

TEST_CASE("square-root singular ends", "[numerics]") {
  const double pi = std::numbers::pi;
  // integral_0^1 dx / sqrt(x (1 - x)) = pi
  CHECK_THAT(integrate_sqrt_singular([](double) { return 1.0; }, Interval(0.0, 1.0), SingularEnd::both).value,
             WithinAbs(pi, 1e-12));
  // integral_0^1 cos x / sqrt(x) dx = sqrt(2 pi) C(sqrt(2/pi)), C the Fresnel integral.
  CHECK_THAT(integrate_sqrt_singular([](double x) { return std::cos(x); }, Interval(0.0, 1.0), SingularEnd::lower).value,
             WithinAbs(1.8090484758005441, 1e-12));
  // integral_0^1 dx / sqrt(1 - x) = 2
  CHECK_THAT(integrate_sqrt_singular([](double) { return 1.0; }, Interval(0.0, 1.0), SingularEnd::upper).value,
             WithinAbs(2.0, 1e-13));
  CHECK_THROWS_AS(integrate_sqrt_singular([](double x) { return 1.0 / x; }, Interval(0.0, 1.0), SingularEnd::lower),
                  SingularityOrderError);
}

TEST_CASE("monotone inversion", "[numerics]") {
  const double x = invert_monotone([](double t) { return t * t * t + t; }, 10.0, Interval(0.0, 3.0));
  CHECK_THAT(x, WithinAbs(2.0, 1e-14));
  CHECK_THROWS(invert_monotone([](double t) { return t; }, 5.0, Interval(0.0, 1.0)));

  gen::for_all(100, 12, [](gen::Source& g) {
    const double k = g.real(0.2, 5.0);
    auto f = [k](double t) { return std::atan(k * t) + 0.01 * t; };
    const double target = g.real(-1.0, 1.0);
    const double ref = oracle::bisect([&](double t) { return f(t) - target; }, -50.0, 50.0);
    CHECK_THAT(invert_monotone(f, target, Interval(-50.0, 50.0)), WithinAbs(ref, 1e-12));
  });
}

TEST_CASE("golden-section minimum", "[numerics]") {
  const Minimum m = minimize_scalar([](double x) { return (x - 0.7) * (x - 0.7) + 1.0; }, Interval(0.0, 2.0), 1e-12);
  CHECK_THAT(m.x, WithinAbs(0.7, 1e-7));
  CHECK_THAT(m.f, WithinAbs(1.0, 1e-13));
}

TEST_CASE("sign changes and grids", "[numerics]") {
  const std::vector<std::pair<double, double>> v = {{0, 0.0}, {1, 1.0}, {2, 0.0}, {3, -1.0}, {4, -2.0}, {5, 3.0}};
  const auto sc = sign_changes(v);
  REQUIRE(sc.size() == 2);
  CHECK(sc[0] == IndexPair{2, 3});
  CHECK(sc[1] == IndexPair{4, 5});

  const auto mg = midpoint_grid(Interval(0.0, 1.0), 4);
  CHECK(mg == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  const auto cg = closed_grid(Interval(0.0, 1.0), 5);
  CHECK(cg.front() == 0.0);
  CHECK(cg.back() == 1.0);
  CHECK(cg[2] == 0.5);
}

TEST_CASE("DOP853 on linear systems", "[numerics][ode]") {
  const double pi = std::numbers::pi;
  auto rot = [](double, const OdeState<2>& y) { return OdeState<2>{-y[1], y[0]}; };
  const auto sol = ode_solve<2>(rot, {1.0, 0.0}, Interval(0.0, 20 * pi), 1e-12);
  const auto end = sol.final_state();
  CHECK_THAT(end[0], WithinAbs(1.0, 1e-9));
  CHECK_THAT(end[1], WithinAbs(0.0, 1e-9));

  SECTION("dense output between steps") {
    gen::for_all(50, 13, [&](gen::Source& g) {
      const double t = g.real(0.0, 20 * pi);
      const auto y = sol(t);
      CHECK_THAT(y[0], WithinAbs(std::cos(t), 1e-9));
      CHECK_THAT(y[1], WithinAbs(std::sin(t), 1e-9));
    });
  }

  SECTION("decay against the exact exponential") {
    auto decay = [](double, const OdeState<1>& y) { return OdeState<1>{-3.0 * y[0]}; };
    const auto d = ode_solve<1>(decay, {1.0}, Interval(0.0, 2.0), 1e-12);
    CHECK_THAT(d.final_state()[0], WithinRel(std::exp(-6.0), 1e-9));
  }

  SECTION("non-finite field is reported") {
    auto blowup = [](double, const OdeState<1>& y) { return OdeState<1>{y[0] * y[0]}; };
    CHECK_THROWS_AS(ode_solve<1>(blowup, {1.0}, Interval(0.0, 2.0), 1e-10), IntegrationError);
  }
}
