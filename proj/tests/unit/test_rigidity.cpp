#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thermoforge/error.hpp"
#include "thermoforge/pressure.hpp"
#include "thermoforge/rigidity.hpp"

using namespace thermoforge;

namespace {

double f_value(const FabcFamily& f, double t) {
  const double e = std::exp(-f.c * t * t);
  return f.a * t + f.b + e + e / t;
}

// Richardson-extrapolated central difference of order k (2 or 3) of F. The
// affine part a t + b drops out, so only the Gaussian part is differenced.
double fd_derivative(const FabcFamily& f, double t, int k) {
  auto g = [&](long double x) {
    const long double e = std::exp(-f.c * x * x);
    return e + e / x;
  };
  const long double x = t;
  auto stencil = [&](long double h) {
    if (k == 2) return (g(x + h) - 2 * g(x) + g(x - h)) / (h * h);
    return (g(x + 2 * h) - 2 * g(x + h) + 2 * g(x - h) - g(x - 2 * h)) / (2 * h * h * h);
  };
  const long double h = 2e-3L * std::min({1.0, t, 1.0 / (f.c * t)});
  return static_cast<double>((4 * stencil(h / 2) - stencil(h)) / 3);
}

std::vector<double> grid(double a, double b, double step) {
  std::vector<double> g;
  for (double t = a; t <= b + 1e-12; t += step) g.push_back(t);
  return g;
}

}  // namespace

TEST_SUITE("rigidity") {

TEST_CASE("F_abc value and closed-form derivatives") {
  const FabcFamily f{2, 3, 1};
  const FabcDerivatives d1 = f_abc_derivs(f, 1.0);
  CHECK(d1.value == doctest::Approx(5.0 + 2.0 / std::numbers::e).epsilon(1e-15));
  // Reference shapes F^(k) e^{c t^2} from high-precision differentiation.
  const FabcDerivatives d03 = f_abc_derivs(f, 0.3);
  CHECK(d03.second_shape == doctest::Approx(80.3007407407407).epsilon(1e-12));
  CHECK(d03.third_shape == doctest::Approx(-804.743407407408).epsilon(1e-12));
  CHECK(f_abc_fourth_shape(f, 0.3) == doctest::Approx(10808.8736987654).epsilon(1e-5));
  const FabcDerivatives d2 = f_abc_derivs(f, 2.0);
  CHECK(d2.second_shape == doctest::Approx(23.25).epsilon(1e-14));
  CHECK(d2.third_shape == doctest::Approx(-73.875).epsilon(1e-14));
  CHECK(f_abc_fourth_shape(f, 2.0) == doctest::Approx(181.75).epsilon(1e-5));
  CHECK(d2.second() == doctest::Approx(23.25 * std::exp(-4.0)));
}

TEST_CASE("closed forms agree with finite differences") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const FabcFamily f{0.1 + 4 * u(rng), 0.1 + 4 * u(rng), 0.36 + 2 * u(rng)};
    const double t = 0.2 + 2.8 * u(rng);
    const FabcDerivatives d = f_abc_derivs(f, t);
    CHECK(d.second() == doctest::Approx(fd_derivative(f, t, 2)).epsilon(1e-6));
    CHECK(d.third() == doctest::Approx(fd_derivative(f, t, 3)).epsilon(1e-6));
    const double h = 1e-6;
    CHECK(d.first ==
          doctest::Approx((f_value(f, t + h) - f_value(f, t - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("F_abc is convex on (0, 100]") {
  for (const FabcFamily& f : {FabcFamily{2, 3, 1}, FabcFamily{1, 1, 0.36}}) {
    for (double t = 0.01; t <= 100.0; t += 0.01) {
      CHECK(f_abc_derivs(f, t).second_shape > 0.0);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(f_abc_derivs({2, 3, 0.35}, 1.0), DomainError);
  CHECK_THROWS_AS(f_abc_derivs({0, 3, 1}, 1.0), DomainError);
  CHECK_THROWS_AS(f_abc_derivs({2, -1, 1}, 1.0), DomainError);
  CHECK_THROWS_AS(f_abc_derivs({2, 3, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(rigidity_inequalities(FabcFamily{2, 3, 1}, {1.0}, -1.0), DomainError);
}

TEST_CASE("divergence diagnostic grows like -2 c t") {
  const FabcFamily f{2, 3, 1};
  const auto d20 = divergence_diagnostic(f, {20.0});
  CHECK(std::abs(d20[0].d / 20.0 + 2.0) < 0.15);
  const auto g = grid(0.5, 100.0, 0.5);
  const auto diag = divergence_diagnostic(f, g);
  for (double threshold : {10.0, 50.0, 100.0}) {
    bool crossed = false;
    for (const auto& p : diag) crossed = crossed || p.d < -threshold;
    CHECK(crossed);
  }
  // Eventually decreasing.
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (diag[i].t >= 5.0) CHECK(diag[i].d < diag[i - 1].d);
  }
}

TEST_CASE("constant potential is flagged everywhere") {
  const PotentialPressure flat{CylinderPotential::level0({1.0, 1.0})};
  const auto diag = divergence_diagnostic(flat, {0.5, 1.0, 2.0});
  for (const auto& p : diag) {
    CHECK(p.flagged);
    CHECK(std::isnan(p.d));
  }
  const RigidityReport rep = rigidity_inequalities(flat, {0.5, 1.0, 2.0}, 1.0);
  CHECK(rep.flagged_count == 3);
  for (const auto& p : rep.points) {
    CHECK(p.ineq50_lhs == 0.0);
    CHECK(p.ineq19_lhs == 0.0);
    CHECK(p.ineq50_holds);
    CHECK(p.ineq19_holds);
  }
}

TEST_CASE("two-point potential has a bounded diagnostic") {
  const PotentialPressure two{CylinderPotential::level0({0.0, 1.0})};
  const auto g = grid(0.5, 50.0, 0.25);
  for (const auto& p : divergence_diagnostic(two, g)) {
    CHECK_FALSE(p.flagged);
    CHECK(std::abs(p.d) < 10.0);
  }
  const RigidityReport at0 = rigidity_inequalities(two, {0.0}, 0.0);
  CHECK(at0.points[0].ineq19_lhs == doctest::Approx(0.0).scale(1.0));
  CHECK(at0.points[0].ineq19_holds);
}

TEST_CASE("report arithmetic is self-consistent") {
  const auto pot = CylinderPotential::level0({0.0, 1.0, 5.0});
  const RigidityReport rep = rigidity_inequalities(PotentialPressure{pot}, {1.0}, 0.0);
  REQUIRE(rep.points.size() == 1);
  const RigidityPoint& p = rep.points[0];
  const TaylorJet jet = pressure_jet(pot, 1.0, 4);
  const double pi = std::numbers::pi;
  const double lhs50 = std::sqrt(2 * pi * pi * pi) * std::pow(jet[2], 1.5) * std::abs(jet[3]);
  const double rhs50 = 9 * std::abs(jet[3]) + 2 * std::abs(jet[4]);
  const double lhs19 = std::abs(jet[3] * (1 - std::sqrt(2 * pi) * std::pow(jet[2], 1.5)));
  CHECK(p.ineq50_lhs == doctest::Approx(lhs50).epsilon(1e-12));
  CHECK(p.ineq50_rhs == doctest::Approx(rhs50).epsilon(1e-12));
  CHECK(p.ineq19_lhs == doctest::Approx(lhs19).epsilon(1e-12));
  CHECK(p.ineq19_rhs == 0.0);
  CHECK(std::abs(p.tension) == doctest::Approx(lhs19).epsilon(1e-12));
  CHECK(rep.tension_rhs == 0.0);
  CHECK(std::isfinite(p.d));
}

TEST_CASE("tabulated derivatives") {
  const TabulatedDerivatives tab{{1.0, 2.0}, {0.5, 0.25}, {0.1, -0.1}, {0.0, 0.0}};
  const RigidityReport rep = rigidity_inequalities(tab, {1.0, 2.0}, 1.0);
  CHECK(rep.kind == "tabulated");
  CHECK(rep.points[1].second == 0.25);
  CHECK_THROWS_AS(rigidity_inequalities(tab, {3.0}, 1.0), DomainError);
}

TEST_CASE("unit crossings of sqrt(2 pi) F''^{3/2}") {
  // Values {0, s} at t = 0 have P'' = s^2/4; the crossing sits where
  // sqrt(2 pi) (s^2/4)^{3/2} = 1.
  const TabulatedDerivatives tab{{1.0, 2.0, 3.0}, {0.2, 0.6, 0.8}, {1.0, 1.0, 1.0}, {0, 0, 0}};
  const RigidityReport rep = rigidity_inequalities(tab, {1.0, 2.0, 3.0}, 0.0);
  REQUIRE(rep.unit_crossings.size() == 1);
  CHECK(rep.unit_crossings[0].first == 1.0);
  CHECK(rep.unit_crossings[0].second == 2.0);
}

TEST_CASE("supporting lines meet the axis in a bounded interval") {
  const FabcFamily f{2, 3, 1};
  double top = f.b;
  for (double t = 0.5; t <= 100.0; t += 0.5) {
    const double b = supporting_intercept(f, t);
    CHECK(b >= f.b);
    top = std::max(top, b);
  }
  CHECK(top - f.b < 10.0);
}

}
