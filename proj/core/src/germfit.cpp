#include "thermoforge/germfit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "thermoforge/error.hpp"
#include "thermoforge/newton.hpp"

namespace thermoforge {

namespace {

constexpr double kNewtonTolerance = 1e-13;
// Residual contract of a fit, normalized by e^{a0}. The polish aims for
// kNewtonTolerance; when rounding in large |z| prevents that, anything
// within the contract is still a solution.
constexpr double kFitTolerance = 1e-10;
constexpr int kLambdaSteps = 64;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Mass of `count` symbols at value z, normalized by e^{a0}.
double block_mass(double count, double t, double z, double a0) {
  return std::exp(std::log(count) + t * z - a0);
}

// Two-block residual system in (z_low, z_high).
System2 two_block_system(double t, double a0, double a1, double low,
                         double high) {
  return [=](const Vec2& v) {
    const double a = block_mass(low, t, v[0], a0);
    const double b = block_mass(high, t, v[1], a0);
    System2Eval e;
    e.residual = {a + b - 1.0, a * v[0] + b * v[1] - a1};
    e.jacobian = {{{t * a, t * b}, {a * (1.0 + t * v[0]), b * (1.0 + t * v[1])}}};
    return e;
  };
}

// Three-group system: `low` symbols at x, one symbol at
// s = x + lambda (y - x), `high` symbols at y.
System2 homotopy_system(double t, double a0, double a1, double low,
                        double high, double lambda) {
  return [=](const Vec2& v) {
    const double x = v[0];
    const double y = v[1];
    const double s = x + lambda * (y - x);
    const double a = block_mass(low, t, x, a0);
    const double m = std::exp(t * s - a0);
    const double b = block_mass(high, t, y, a0);
    System2Eval e;
    e.residual = {a + m + b - 1.0, a * x + m * s + b * y - a1};
    e.jacobian = {{{t * a + t * m * (1.0 - lambda), t * b + t * m * lambda},
                   {a * (1.0 + t * x) + m * (1.0 + t * s) * (1.0 - lambda),
                    b * (1.0 + t * y) + m * (1.0 + t * s) * lambda}}};
    return e;
  };
}

// Divides the first-moment equation by max(1, |a1|) so the tolerance on it
// is relative once the values are large.
System2 scale_moment_equation(System2 system, double a1) {
  const double inv = 1.0 / std::max(1.0, std::abs(a1));
  return [system = std::move(system), inv](const Vec2& v) {
    System2Eval e = system(v);
    e.residual[1] *= inv;
    e.jacobian[1][0] *= inv;
    e.jacobian[1][1] *= inv;
    return e;
  };
}

// Newton on the scaled system; `residual` is reported unscaled.
NewtonResult polish(const System2& system, double a1, const Vec2& start) {
  NewtonResult nr = damped_newton(scale_moment_equation(system, a1), start,
                                  {kNewtonTolerance, 200, 40});
  nr.residual[1] *= std::max(1.0, std::abs(a1));
  if (!nr.converged) {
    nr.converged = std::max(std::abs(nr.residual[0]),
                            std::abs(nr.residual[1])) <= kFitTolerance;
  }
  return nr;
}

double homotopy_a2(double t, double a0, double a1, double low, double high,
                   double lambda, const Vec2& v) {
  const double x = v[0];
  const double y = v[1];
  const double s = x + lambda * (y - x);
  return block_mass(low, t, x, a0) * (x - a1) * (x - a1) +
         std::exp(t * s - a0) * (s - a1) * (s - a1) +
         block_mass(high, t, y, a0) * (y - a1) * (y - a1);
}

FitResult finish_fit(const Germ& germ, std::vector<double> z) {
  FitResult out;
  out.z = std::move(z);
  const double t = germ.t_star();
  const double a0 = germ.a0();
  const double a1 = germ.a1();
  const std::size_t order = germ.has_a2() ? 2 : 1;
  out.achieved = pressure_jet(out.potential(), t, order);
  double s0 = 0.0;
  double s1 = 0.0;
  for (double v : out.z) {
    const double w = std::exp(t * v - a0);
    s0 += w;
    s1 += v * w;
  }
  const double r0 = std::abs(s0 - 1.0);
  const double r1 = std::abs(s1 - a1);
  if (!(std::max(r0, r1) <= kFitTolerance)) {
    throw NumericError("fit residual " + fmt_double(std::max(r0, r1)) +
                       " exceeds 1e-10 e^a0; the values are too large for "
                       "double precision");
  }
  // Absolute residuals; e^a0 may overflow, so exact zeros stay zero.
  const double scale = std::exp(a0);
  out.residuals = {r0 == 0.0 ? 0.0 : r0 * scale, r1 == 0.0 ? 0.0 : r1 * scale};
  if (germ.has_a2()) {
    out.residuals.push_back(std::abs(out.achieved[2] - germ.a2()));
  }
  return out;
}

std::vector<double> constant_potential(const Germ& germ, std::size_t n) {
  return std::vector<double>(
      n, (germ.a0() - std::log(static_cast<double>(n))) / germ.t_star());
}

std::vector<double> block_values(std::size_t low, double z_low,
                                 std::size_t high, double z_high) {
  std::vector<double> z(low, z_low);
  z.insert(z.end(), high, z_high);
  return z;
}

void check_alphabet_for_fit(std::size_t n) {
  if (n < 2) throw DomainError("alphabet size must be at least 2");
  if (n > kMaxAlphabet) throw SizeLimitError("alphabet size exceeds 2^16");
}

}  // namespace

Germ::Germ(double t_star, double a0, double a1)
    : t_star_(t_star), coeffs_{a0, a1} {
  if (!(t_star > 0.0)) throw DomainError("germ: t* must be positive");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("germ: coefficients must be finite");
  }
}

Germ::Germ(double t_star, double a0, double a1, double a2)
    : Germ(t_star, a0, a1) {
  if (!std::isfinite(a2)) throw DomainError("germ: coefficients must be finite");
  coeffs_.push_back(a2);
}

double Germ::a2() const {
  if (!has_a2()) throw DomainError("germ has no second-order coefficient");
  return coeffs_[2];
}

CylinderPotential FitResult::potential() const {
  return CylinderPotential::level0(z);
}

bool feasibility_level1(const Germ& germ, double n) {
  if (!(n >= 2.0)) return false;
  const double t = germ.t_star();
  return (germ.a0() - std::log(n)) / t < germ.a1() &&
         germ.a1() < germ.a0() / t;
}

bool on_constant_boundary(const Germ& germ, double n) {
  const double boundary = (germ.a0() - std::log(n)) / germ.t_star();
  return std::abs(germ.a1() - boundary) <=
         1e-12 * std::max(1.0, std::abs(boundary));
}

BlockSolution solve_two_block(double t_star, double a0, double a1,
                              double low_count, double high_count) {
  const double t = t_star;
  const double total = low_count + high_count;
  const double e = a0 - t * a1;
  if (!(low_count >= 1.0) || !(high_count >= 1.0)) {
    throw DomainError("two-block system needs at least one symbol per block");
  }
  if (!(e > 0.0)) {
    throw FeasibilityError("infeasible germ: a1 must be below a0/t*");
  }
  if (!(e < std::log(total))) {
    throw FeasibilityError("infeasible germ: a1 must exceed (a0 - log n)/t*");
  }
  if (!(std::log(high_count) < e)) {
    throw FeasibilityError("no ordered two-block solution with " +
                           fmt_double(high_count) + " high symbols");
  }

  // With p the mass of the low block, the constraints collapse to
  // H(p) + p log(low) + (1-p) log(high) = a0 - t a1, increasing in p on
  // (0, low/n); u = log p keeps tiny masses resolvable.
  const double log_low = std::log(low_count);
  const double log_high = std::log(high_count);
  auto entropy_gap = [&](double u) {
    const double p = std::exp(u);
    const double q_log = std::log1p(-p);
    return -p * u - (1.0 - p) * q_log + p * log_low + (1.0 - p) * log_high - e;
  };
  double u_hi = std::log(low_count / total);
  double u_lo = u_hi - 1.0;
  double step = 1.0;
  while (entropy_gap(u_lo) >= 0.0) {
    step *= 2.0;
    u_lo = u_hi - step;
    if (u_lo < -740.0) {
      throw NumericError("two-block solver: low-block mass underflows");
    }
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (u_lo + u_hi);
    if (mid == u_lo || mid == u_hi) break;
    (entropy_gap(mid) < 0.0 ? u_lo : u_hi) = mid;
  }
  const double u = 0.5 * (u_lo + u_hi);
  const double p = std::exp(u);
  Vec2 guess{(a0 + u - log_low) / t, (a0 + std::log1p(-p) - log_high) / t};

  NewtonResult nr =
      polish(two_block_system(t, a0, a1, low_count, high_count), a1, guess);
  if (!nr.converged) {
    throw NumericError(
        "two-block solver: Newton polish stalled with residual " +
        fmt_double(std::max(std::abs(nr.residual[0]), std::abs(nr.residual[1]))));
  }
  BlockSolution out;
  out.low_count = low_count;
  out.high_count = high_count;
  out.z_low = nr.x[0];
  out.z_high = nr.x[1];
  out.residual = nr.residual;
  out.newton_iterations = nr.iterations;
  const double a = block_mass(low_count, t, out.z_low, a0);
  const double b = block_mass(high_count, t, out.z_high, a0);
  out.a2 = a * (out.z_low - a1) * (out.z_low - a1) +
           b * (out.z_high - a1) * (out.z_high - a1);
  return out;
}

FitResult fit_level1(const Germ& germ, std::size_t n) {
  check_alphabet_for_fit(n);
  const auto nd = static_cast<double>(n);
  if (on_constant_boundary(germ, nd)) {
    return finish_fit(germ, constant_potential(germ, n));
  }
  if (!feasibility_level1(germ, nd)) {
    throw FeasibilityError(
        "infeasible germ: need (a0 - log n)/t* < a1 < a0/t*, got t*=" +
        fmt_double(germ.t_star()) + " a0=" + fmt_double(germ.a0()) +
        " a1=" + fmt_double(germ.a1()) + " n=" + std::to_string(n));
  }
  const BlockSolution b =
      solve_two_block(germ.t_star(), germ.a0(), germ.a1(), nd - 1.0, 1.0);
  return finish_fit(Germ(germ.t_star(), germ.a0(), germ.a1()),
                    block_values(n - 1, b.z_low, 1, b.z_high));
}

A2Range feasible_a2_range(const Germ& germ, std::size_t n) {
  check_alphabet_for_fit(n);
  const auto nd = static_cast<double>(n);
  A2Range range;
  if (on_constant_boundary(germ, nd)) return range;
  if (!feasibility_level1(germ, nd)) {
    throw FeasibilityError(
        "infeasible germ: need (a0 - log n)/t* < a1 < a0/t*");
  }
  const double e = germ.a0() - germ.t_star() * germ.a1();
  for (std::size_t k = 1; k < n; ++k) {
    const auto high = static_cast<double>(n - k);
    if (std::log(high) >= e) continue;
    try {
      range.family.push_back(solve_two_block(germ.t_star(), germ.a0(),
                                             germ.a1(), static_cast<double>(k),
                                             high));
    } catch (const NumericError& err) {
      range.warnings.push_back("block k=" + std::to_string(k) +
                               " skipped: " + err.what());
    }
  }
  if (range.family.empty()) {
    throw NumericError("feasible_a2_range: no two-block solution converged");
  }
  range.lo = range.hi = range.family.front().a2;
  for (const auto& b : range.family) {
    range.lo = std::min(range.lo, b.a2);
    range.hi = std::max(range.hi, b.a2);
  }
  return range;
}

FitResult fit_level2(const Germ& germ, std::size_t n) {
  check_alphabet_for_fit(n);
  const auto nd = static_cast<double>(n);
  const double t = germ.t_star();
  const double a0 = germ.a0();
  const double a1 = germ.a1();
  const double target = germ.a2();
  if (target < 0.0) {
    throw FeasibilityError("infeasible germ: a2 must be non-negative");
  }
  if (on_constant_boundary(germ, nd)) {
    if (std::abs(target) > 1e-12) {
      throw RangeError("a2 outside the feasible range [0, 0]", 0.0, 0.0);
    }
    FitResult out = finish_fit(germ, constant_potential(germ, n));
    out.feasible_a2 = std::make_pair(0.0, 0.0);
    return out;
  }

  const A2Range range = feasible_a2_range(germ, n);
  const double end_tol = 1e-12 * std::max(1.0, std::abs(target));
  if (target < range.lo - end_tol || target > range.hi + end_tol) {
    throw RangeError("a2 = " + fmt_double(target) +
                         " outside the feasible range [" +
                         fmt_double(range.lo) + ", " + fmt_double(range.hi) +
                         "]",
                     range.lo, range.hi);
  }
  auto with_range = [&](FitResult r) {
    r.feasible_a2 = std::make_pair(range.lo, range.hi);
    return r;
  };

  for (const auto& b : range.family) {
    if (std::abs(b.a2 - target) <= end_tol) {
      const auto low = static_cast<std::size_t>(b.low_count);
      return with_range(finish_fit(
          germ, block_values(low, b.z_low, n - low, b.z_high)));
    }
  }

  // Adjacent blocks k and k+1 whose a2 values bracket the target.
  const BlockSolution* with_k = nullptr;
  const BlockSolution* with_k1 = nullptr;
  for (std::size_t i = 0; i + 1 < range.family.size(); ++i) {
    const auto& lo_b = range.family[i];
    const auto& hi_b = range.family[i + 1];
    if (hi_b.low_count != lo_b.low_count + 1.0) continue;
    if ((lo_b.a2 - target) * (hi_b.a2 - target) < 0.0) {
      with_k = &lo_b;
      with_k1 = &hi_b;
      break;
    }
  }
  if (with_k == nullptr) {
    throw NumericError(
        "fit_level2: no adjacent pair of block solutions brackets a2");
  }

  const auto low = static_cast<std::size_t>(with_k->low_count);
  const auto high = n - low - 1;
  const auto lowd = static_cast<double>(low);
  const auto highd = static_cast<double>(high);

  // Continuation in lambda from block k+1 (lambda = 0) to block k (1).
  auto solve_at = [&](double lambda, const Vec2& start) {
    return polish(homotopy_system(t, a0, a1, lowd, highd, lambda), a1, start);
  };
  double lam_prev = 0.0;
  Vec2 x_prev{with_k1->z_low, with_k1->z_high};
  double g_prev = with_k1->a2 - target;
  double step = 1.0 / kLambdaSteps;
  bool bracketed = false;
  double lam_next = 0.0;
  Vec2 x_next{};
  while (lam_prev < 1.0) {
    lam_next = std::min(1.0, lam_prev + step);
    NewtonResult nr = solve_at(lam_next, x_prev);
    if (!nr.converged || !(nr.x[0] < nr.x[1])) {
      step *= 0.5;
      if (step < 1e-9) {
        throw NumericError("fit_level2: homotopy continuation failed at lambda=" +
                           fmt_double(lam_prev));
      }
      continue;
    }
    x_next = nr.x;
    const double g_next =
        homotopy_a2(t, a0, a1, lowd, highd, lam_next, x_next) - target;
    if (g_next == 0.0 || (g_prev < 0.0) != (g_next < 0.0)) {
      bracketed = true;
      break;
    }
    lam_prev = lam_next;
    x_prev = x_next;
    g_prev = g_next;
  }
  if (!bracketed) {
    throw NumericError("fit_level2: homotopy did not cross the target a2");
  }

  double lam_lo = lam_prev;
  double lam_hi = lam_next;
  Vec2 best = x_next;
  double best_lambda = lam_next;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    if (mid == lam_lo || mid == lam_hi) break;
    NewtonResult nr = solve_at(mid, x_prev);
    if (!nr.converged) {
      throw NumericError("fit_level2: Newton failed during lambda bisection");
    }
    const double g = homotopy_a2(t, a0, a1, lowd, highd, mid, nr.x) - target;
    best = nr.x;
    best_lambda = mid;
    if (std::abs(g) <= 1e-14 * std::max(1.0, target)) break;
    if ((g < 0.0) == (g_prev < 0.0)) {
      lam_lo = mid;
      x_prev = nr.x;
    } else {
      lam_hi = mid;
    }
  }

  std::vector<double> z(low, best[0]);
  z.push_back(best[0] + best_lambda * (best[1] - best[0]));
  z.insert(z.end(), high, best[1]);
  return with_range(finish_fit(germ, std::move(z)));
}

Table3Row table3_solve(double n) {
  if (!(n >= 10.0) || !std::isfinite(n)) {
    throw DomainError("table3_solve: n must be a finite real >= 10");
  }
  constexpr double t = 1.0;
  constexpr double a0 = 2.0;
  constexpr double a1 = 1.0;
  const System2 system = two_block_system(t, a0, a1, n, 1.0);
  const double log_n = std::log(n);
  const Vec2 start{-log_n - std::log(log_n) - 1.0, 2.0};
  NewtonResult nr = damped_newton(system, start, {kNewtonTolerance, 500, 40});

  Table3Row row;
  row.n = n;
  if (nr.converged && nr.x[0] < -1.0 && nr.x[0] < nr.x[1]) {
    row.c_a = nr.x[0];
    row.eta = nr.x[1];
    row.iterations = nr.iterations;
  } else {
    // Newton left the branch with z_a < -1; take the bracketed solution.
    const BlockSolution b = solve_two_block(t, a0, a1, n, 1.0);
    row.c_a = b.z_low;
    row.eta = b.z_high;
    row.iterations = nr.iterations + b.newton_iterations;
  }
  const System2Eval eval = system({row.c_a, row.eta});
  const double e2 = std::exp(2.0);
  row.residuals = {std::abs(eval.residual[0]) * e2,
                   std::abs(eval.residual[1]) * e2};
  if (std::max(row.residuals[0], row.residuals[1]) > kNewtonTolerance * e2) {
    throw NumericError("table3_solve: residual " +
                       fmt_double(std::max(row.residuals[0], row.residuals[1])) +
                       " above 1e-13 e^2 for n=" + fmt_double(n));
  }
  return row;
}

double varsigma_inverse(double y, Branch branch, double t_star) {
  if (!(t_star > 0.0)) throw DomainError("varsigma_inverse: t* must be positive");
  const double z_min = -1.0 / t_star;
  const double f_min = -std::exp(-1.0) / t_star;
  auto f = [&](double z) { return z * std::exp(t_star * z); };
  if (y < f_min) {
    throw DomainError("varsigma_inverse: y = " + fmt_double(y) +
                      " is below the minimum -1/(e t*)");
  }
  if (y == f_min) return z_min;

  double lo = 0.0;
  double hi = 0.0;
  if (branch == Branch::upper) {
    lo = z_min;
    hi = std::max(1.0, z_min + 1.0);
    while (f(hi) < y) hi = z_min + 2.0 * (hi - z_min);
  } else {
    if (y >= 0.0) {
      throw DomainError("varsigma_inverse: lower branch only covers [-1/(e t*), 0)");
    }
    hi = z_min;
    lo = z_min - 1.0;
    while (f(lo) < y) lo = z_min - 2.0 * (z_min - lo);
  }
  // f is increasing on the upper branch and decreasing on the lower one.
  const bool increasing = branch == Branch::upper;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const bool below = f(mid) < y;
    ((below == increasing) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace thermoforge
