#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "thermoforge/approx.hpp"
#include "thermoforge/cltsim.hpp"
#include "thermoforge/combinatorics.hpp"
#include "thermoforge/germfit.hpp"
#include "thermoforge/pressure.hpp"
#include "thermoforge/rigidity.hpp"

namespace thermoforge::cli {

namespace {

using Check = std::function<std::string()>;  // empty string on success

std::string partitions_and_bell() {
  const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147};
  for (unsigned j = 0; j < 10; ++j) {
    std::uint64_t sum = 0;
    for (const auto& p : partitions(j)) sum += j == 0 ? 1 : fdb_coefficient(j, p);
    if (sum != bell[j]) return fmt::format("Bell({}) = {}", j, sum);
  }
  if (partitions(5).size() != 7) return "p(5) != 7";
  return {};
}

std::string q_identity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(2 + trial % 7);
    for (double& v : z) v = u(rng);
    const QValues q = q_values(z, u(rng));
    const double rhs = q.q0 * q.r2 - q.q1 * q.q1;
    if (std::abs(q.q2 - rhs) > 1e-12 * std::max(q.q2, 1e-2 * q.q0 * q.r2)) {
      return fmt::format("trial {}: {} vs {}", trial, q.q2, rhs);
    }
  }
  return {};
}

std::string golden_mean() {
  const CylinderPotential pot(SubshiftSpec(2, {{1, 1}, {1, 0}}), 1, {0.0, 0.0});
  const double p = pressure_spectral(pot, 1.0);
  const double want = std::log(std::numbers::phi);
  return std::abs(p - want) < 1e-12 ? "" : fmt::format("{} vs {}", p, want);
}

std::string fit_round_trip() {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial * 3;
    const double t = 0.5 + 0.1 * trial;
    const double a0 = 1.0 + 0.05 * trial;
    const double lo = (a0 - std::log(static_cast<double>(n))) / t;
    const double a1 = lo + (a0 / t - lo) * std::uniform_real_distribution<>(0.05, 0.95)(rng);
    const FitResult fit = fit_level1(Germ(t, a0, a1), n);
    const double tol = 1e-10 * std::max(1.0, std::exp(a0));
    if (std::abs(fit.achieved[0] - a0) > tol || std::abs(fit.achieved[1] - a1) > tol) {
      return fmt::format("trial {}", trial);
    }
  }
  return {};
}

std::string table3_first_row() {
  const Table3Row r = table3_solve(10.0);
  const double want = -1.8599539391797653780996686364493;
  return std::abs(r.c_a - want) <= 1e-12 * std::abs(want)
             ? ""
             : fmt::format("c_a = {}", r.c_a);
}

std::string fabc_convexity() {
  const FabcFamily f{2.0, 3.0, 1.0};
  for (double t = 0.01; t <= 100.0; t += 0.37) {
    if (!(f_abc_derivs(f, t).second_shape > 0.0)) return fmt::format("t = {}", t);
  }
  return {};
}

std::string approx_monotone() {
  const DecayingPotentialSpec spec(2, 0.5, {{0.0, 1.0}});
  const auto rows = convergence_study(spec, 1.0, {1, 2, 3, 4, 5, 6});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].p_inf < rows[i - 1].p_inf - 1e-12 ||
        rows[i].p_sup > rows[i - 1].p_sup + 1e-12) {
      return fmt::format("window {}", rows[i].window);
    }
  }
  return {};
}

std::string clt_bound() {
  const double b = clt_tail_bound(0.25, 0.0, -0.125, 100);
  const double pi = std::numbers::pi;
  const double want = 0.25 / (std::sqrt(2.0 * pi * pi * pi * 100.0) * 0.125);
  return std::abs(b - want) < 1e-15 ? "" : fmt::format("{} vs {}", b, want);
}

}  // namespace

std::vector<SelftestResult> run_selftest() {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"partitions and Bell numbers", partitions_and_bell},
      {"Q2 identity", q_identity},
      {"golden mean entropy", golden_mean},
      {"level-1 fit round trip", fit_round_trip},
      {"two-block table first row", table3_first_row},
      {"F_abc convexity", fabc_convexity},
      {"approximation monotonicity", approx_monotone},
      {"CLT bound arithmetic", clt_bound},
  };
  std::vector<SelftestResult> out;
  for (const auto& [name, check] : checks) {
    SelftestResult r{name, false, {}};
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace thermoforge::cli
