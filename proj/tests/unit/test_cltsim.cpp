#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thermoforge/cltsim.hpp"
#include "thermoforge/error.hpp"

using namespace thermoforge;

TEST_SUITE("cltsim") {

TEST_CASE("centering") {
  const auto half = center_potential(CylinderPotential::level0({0.0, 1.0}), 0.0);
  CHECK(half.values()[0] == doctest::Approx(-0.5));
  CHECK(half.values()[1] == doctest::Approx(0.5));
  const auto flat = center_potential(CylinderPotential::level0({3.0, 3.0}), 1.0);
  CHECK(flat.values()[0] == 0.0);
  CHECK(flat.values()[1] == 0.0);
  const double l3 = std::log(3.0);
  const auto skew = center_potential(CylinderPotential::level0({0.0, l3}), 1.0);
  CHECK(skew.values()[0] == doctest::Approx(-0.75 * l3).epsilon(1e-14));
  CHECK(skew.values()[1] == doctest::Approx(0.25 * l3).epsilon(1e-14));
}

TEST_CASE("tail bound arithmetic") {
  const double pi = std::numbers::pi;
  const double want = (2.0 * 0.125) / (std::sqrt(2 * pi * pi * pi * 100) * std::pow(0.25, 1.5));
  CHECK(clt_tail_bound(0.25, 0.0, -0.125, 100) == doctest::Approx(want).epsilon(1e-15));
  CHECK(std::abs(clt_tail_bound(0.25, 0.0, -0.125, 100) - 0.02540) < 1e-5);
  CHECK_THROWS_AS(clt_tail_bound(0.0, 0.0, 0.0, 10), DomainError);
}

TEST_CASE("Edgeworth correction") {
  CHECK(edgeworth_correction(0.7, 10, 0.3, 0.0) == 0.0);
  CHECK(std::abs(edgeworth_correction(std::sqrt(0.3), 10, 0.3, 1.0)) < 1e-16);
  CHECK(std::abs(edgeworth_correction(-std::sqrt(0.3), 10, 0.3, 1.0)) < 1e-16);
  CHECK(edgeworth_correction(0.0, 100, 0.25, 0.3) == doctest::Approx(0.005).epsilon(1e-15));
}

TEST_CASE("KS distance of exact normal quantiles is about 1/(2N)") {
  // Quantiles at (i + 1/2)/N of N(0, 2): the empirical CDF jumps straddle
  // the true CDF symmetrically.
  const std::size_t n = 1000;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    double lo = -20.0, hi = 20.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / 2.0) < p ? lo : hi) = mid;
    }
    q[i] = lo;
  }
  CHECK(ks_distance_normal(q, 2.0) == doctest::Approx(0.5 / n).epsilon(1e-6));
}

TEST_CASE("degenerate and undersized configurations") {
  SimConfig flat{CylinderPotential::level0({1.0, 1.0}), 0.0, {10}, 10000, 1, 1};
  CHECK_THROWS_AS(simulate_gm(flat), DomainError);
  SimConfig tiny{CylinderPotential::level0({0.0, 1.0}), 0.0, {10}, 100, 1, 1};
  CHECK_THROWS_AS(simulate_gm(tiny), DomainError);
  SimConfig zero_m{CylinderPotential::level0({0.0, 1.0}), 0.0, {0}, 10000, 1, 1};
  CHECK_THROWS_AS(simulate_gm(zero_m), DomainError);
}

TEST_CASE("reports do not depend on the worker count") {
  SimConfig cfg{CylinderPotential::level0({-0.5, 0.5}), 0.0, {50, 200}, 20000, 99, 1};
  const CltReport one = simulate_gm(cfg);
  cfg.threads = 3;
  const CltReport three = simulate_gm(cfg);
  const CltReport again = simulate_gm(cfg);
  REQUIRE(one.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(one.rows[i].ks_distance == three.rows[i].ks_distance);
    CHECK(one.rows[i].mean == three.rows[i].mean);
    CHECK(one.rows[i].variance == three.rows[i].variance);
    CHECK(again.rows[i].ks_distance == three.rows[i].ks_distance);
  }
  cfg.seed = 100;
  CHECK(simulate_gm(cfg).rows[0].ks_distance != one.rows[0].ks_distance);
}

TEST_CASE("sample moments match the equilibrium cumulants") {
  const double l3 = std::log(3.0);
  SimConfig cfg{CylinderPotential::level0({0.0, l3, -1.0}), 1.0, {20, 400}, 40000, 7, 0};
  const CltReport rep = simulate_gm(cfg);
  CHECK(rep.centered);
  CHECK(rep.delta2 > 0.0);
  for (const auto& row : rep.rows) {
    CHECK(std::abs(row.mean) < 4.0 * row.mean_stderr);
    CHECK(std::abs(row.variance - rep.delta2) < 4.0 * row.variance_stderr);
    CHECK(row.ks_distance >= 0.0);
    CHECK(row.ks_distance <= 1.0);
    CHECK(row.bound == doctest::Approx(clt_tail_bound(rep.delta2, rep.delta3, rep.delta4, row.m)));
  }
}

TEST_CASE("KS distance decays with the orbit length") {
  double small = 0.0;
  double large = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig cfg{CylinderPotential::level0({-0.5, 0.5}), 0.0, {100, 10000}, 20000, seed, 0};
    const CltReport rep = simulate_gm(cfg);
    small += rep.rows[0].ks_distance;
    large += rep.rows[1].ks_distance;
  }
  CHECK(large < small);
}

}
