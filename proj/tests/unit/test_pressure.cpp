#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "thermoforge/error.hpp"
#include "thermoforge/pressure.hpp"

using namespace thermoforge;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n,
                                  double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("pressure") {

TEST_CASE("full-shift pressure is log-sum-exp") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_values(rng, 2 + trial % 9, 3.0);
    const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
    CHECK(pressure(CylinderPotential::level0(c), t) ==
          doctest::Approx(testing::log_sum_exp(c, t)).epsilon(1e-14));
  }
  CHECK(pressure(CylinderPotential::level0({0.0, 0.0, 0.0}), 5.0) ==
        doctest::Approx(std::log(3.0)));
  CHECK(pressure(CylinderPotential::level0({1000.0, 1000.0}), 1.0) ==
        doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("golden mean shift has entropy log phi") {
  const CylinderPotential pot(SubshiftSpec(2, {{1, 1}, {1, 0}}), 1, {0.0, 0.0});
  CHECK(pressure_spectral(pot, 1.0) ==
        doctest::Approx(std::log(std::numbers::phi)).epsilon(1e-13));
  CHECK_THROWS_AS(pressure(pot, 1.0), DomainError);
}

TEST_CASE("spectral pressure on the full shift matches the closed form") {
  const auto pot = CylinderPotential::level0({0.3, -1.2, 2.0});
  CHECK(pressure_spectral(pot, 0.7) ==
        doctest::Approx(pressure(pot, 0.7)).epsilon(1e-13));
}

TEST_CASE("periodic subshift still converges") {
  // The 3-cycle carries a single periodic orbit: P = t (a + b + c) / 3.
  const CylinderPotential pot(
      SubshiftSpec(3, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), 1, {1.0, 2.0, 6.0});
  CHECK(pressure_spectral(pot, 1.5) == doctest::Approx(1.5 * 3.0).epsilon(1e-12));
}

TEST_CASE("reducible matrices are rejected") {
  const CylinderPotential pot(SubshiftSpec(2, {{1, 1}, {0, 1}}), 1, {0.0, 0.0});
  CHECK_THROWS_AS(pressure_spectral(pot, 1.0), DomainError);
}

TEST_CASE("window-2 separable potential matches its one-symbol reduction") {
  // phi(x0, x1) = u(x0) + v(x1): both coordinates contribute u + v to
  // Birkhoff sums, so P = log sum_s exp(t (u_s + v_s)).
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto u = random_values(rng, n, 1.5);
    const auto v = random_values(rng, n, 1.5);
    std::vector<double> table(n * n);
    std::vector<double> folded(n);
    for (std::size_t i = 0; i < n; ++i) {
      folded[i] = u[i] + v[i];
      for (std::size_t j = 0; j < n; ++j) table[i * n + j] = u[i] + v[j];
    }
    const double t = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    const CylinderPotential pot(SubshiftSpec(n), 2, table);
    CHECK(pressure(pot, t) ==
          doctest::Approx(testing::log_sum_exp(folded, t)).epsilon(1e-12));
  }
}

TEST_CASE("window-3 potential depending on the first symbol only") {
  const std::vector<double> c{0.5, -0.25, 1.0};
  std::vector<double> table(27);
  for (std::size_t i = 0; i < 27; ++i) table[i] = c[i / 9];
  const CylinderPotential pot(SubshiftSpec(3), 3, table);
  CHECK(pressure(pot, 1.3) ==
        doctest::Approx(testing::log_sum_exp(c, 1.3)).epsilon(1e-12));
}

TEST_CASE("two-point cumulants") {
  for (double t : {-1.0, 0.0, 0.4, 2.0}) {
    const double p = 1.0 / (1.0 + std::exp(-t));
    const auto want = testing::bernoulli_cumulants(p);
    const TaylorJet jet = pressure_jet(CylinderPotential::level0({0.0, 1.0}), t, 4);
    CHECK(jet.order() == 4);
    CHECK(jet.t_star == t);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(jet[k] == doctest::Approx(want[k]).epsilon(1e-13).scale(1.0));
    }
  }
  const TaylorJet sym = pressure_jet(CylinderPotential::level0({-0.5, 0.5}), 0.0, 4);
  CHECK(sym[2] == doctest::Approx(0.25));
  CHECK(std::abs(sym[3]) < 1e-16);
  CHECK(sym[4] == doctest::Approx(-0.125));
}

TEST_CASE("jet agrees with direct moment cumulants") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_values(rng, 2 + trial % 20, 2.0);
    const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
    const TaylorJet jet = pressure_jet(CylinderPotential::level0(c), t, 4);
    const auto want = testing::direct_cumulants(c, t);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(jet[k] == doctest::Approx(want[k]).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("constant potential has vanishing higher derivatives") {
  const TaylorJet jet = pressure_jet(CylinderPotential::level0({2.5, 2.5, 2.5}), 1.0, 8);
  CHECK(jet[0] == doctest::Approx(2.5 + std::log(3.0)));
  CHECK(jet[1] == 2.5);
  for (std::size_t k = 2; k <= 8; ++k) CHECK(jet[k] == 0.0);
}

TEST_CASE("Faa di Bruno cumulants match the recursion") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_values(rng, 3 + trial % 6, 1.0);
    const auto pot = CylinderPotential::level0(c);
    const double t = std::uniform_real_distribution<double>(-1, 1)(rng);
    const auto mu = central_moments(pot, t, 6);
    const auto kappa = cumulants_via_faa_di_bruno(mu, 6);
    const TaylorJet jet = pressure_jet(pot, t, 6);
    for (std::size_t k = 2; k <= 6; ++k) {
      CHECK(kappa[k] == doctest::Approx(jet[k]).epsilon(1e-10).scale(1.0));
    }
  }
  std::vector<double> mu(8, 0.0);
  CHECK_THROWS_AS(cumulants_via_faa_di_bruno(mu, 7), DomainError);
}

TEST_CASE("finite-difference jet agrees with the closed form") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_values(rng, 2 + trial % 10, 2.0);
    const auto pot = CylinderPotential::level0(c);
    const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
    const TaylorJet fd = finite_difference_jet(pot, t, 4);
    const TaylorJet exact = pressure_jet(pot, t, 4);
    for (std::size_t k = 0; k <= 4; ++k) {
      CHECK(std::abs(fd[k] - exact[k]) / std::max(1.0, std::abs(exact[k])) < 1e-6);
    }
  }
}

TEST_CASE("finite-difference jet works on subshifts") {
  // Golden mean shift with phi = 1 on symbol 0: P(t) = log of the Perron
  // root of [[e^t, 1], [e^t, 0]], i.e. log((e^t + sqrt(e^{2t} + 4 e^t)) / 2).
  const CylinderPotential pot(SubshiftSpec(2, {{1, 1}, {1, 0}}), 1, {1.0, 0.0});
  const double t = 0.3;
  auto p = [](double s) {
    const double e = std::exp(s);
    return std::log((e + std::sqrt(e * e + 4 * e)) / 2);
  };
  const TaylorJet fd = finite_difference_jet(pot, t, 2);
  CHECK(fd[0] == doctest::Approx(p(t)).epsilon(1e-12));
  const double h = 1e-4;
  CHECK(fd[1] == doctest::Approx((p(t + h) - p(t - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("derivative formulas in the constant-eigenfunction regime") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_values(rng, 2 + trial % 12, 3.0);
    const double t = std::uniform_real_distribution<double>(-2, 2)(rng);
    const auto r = verify_derivative_formulas(CylinderPotential::level0(c), t);
    CHECK(r.within_tolerance);
    CHECK(r.second < 1e-10);
    CHECK(r.third < 1e-10);
    CHECK(r.fourth < 1e-10);
  }
}

TEST_CASE("Q2 identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto z = random_values(rng, 2 + trial % 15, 4.0);
    const double t = std::uniform_real_distribution<double>(-3, 3)(rng);
    const QValues q = q_values(z, t);
    const double rhs = q.q0 * q.r2 - q.q1 * q.q1;
    CHECK(std::abs(q.q2 - rhs) <= 1e-12 * std::max(q.q2, 1e-2 * q.q0 * q.r2));
    // P'' = Q2 / Q0^2.
    const TaylorJet jet = pressure_jet(CylinderPotential::level0(z), t, 2);
    CHECK(q.q2 / (q.q0 * q.q0) == doctest::Approx(jet[2]).epsilon(1e-10));
  }
}

TEST_CASE("Q2 vanishes for near-constant values") {
  std::vector<double> z{1.0, 1.0 + 1e-9, 1.0 - 1e-9, 1.0};
  const QValues q = q_values(z, 1.0);
  CHECK(q.q2 >= 0.0);
  CHECK(std::abs(q.q2 - (q.q0 * q.r2 - q.q1 * q.q1)) <= 1e-14 * q.q0 * q.r2);
  const QValues flat = q_values(std::vector<double>(5, 2.0), 1.0);
  CHECK(flat.q2 == 0.0);
}

TEST_CASE("unscaled Q values") {
  const std::vector<double> z{0.0, 1.0};
  const QValues q = q_values(z, 1.0);
  const double e = std::exp(1.0);
  CHECK(q.unscaled_q0() == doctest::Approx(1.0 + e));
  CHECK(q.unscaled_q1() == doctest::Approx(e));
  CHECK(q.unscaled_r2() == doctest::Approx(e));
  CHECK(q.unscaled_q2() == doctest::Approx(e));
}

TEST_CASE("jet preconditions") {
  const auto pot = CylinderPotential::level0({0.0, 1.0});
  CHECK_THROWS_AS(pressure_jet(pot, 1.0, kMaxJetOrder + 1), DomainError);
  CHECK_THROWS_AS(finite_difference_jet(pot, 1.0, 5), DomainError);
  const CylinderPotential w2(SubshiftSpec(2), 2, {0, 1, 2, 3});
  CHECK_THROWS_AS(pressure_jet(w2, 1.0, 2), DomainError);
}

}
