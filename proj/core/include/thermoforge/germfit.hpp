#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermoforge/pressure.hpp"
#include "thermoforge/symbolic.hpp"

namespace thermoforge {

// a0 + a1 (t - t*) + a2/2 (t - t*)^2 truncated after two or three terms.
class Germ {
 public:
  Germ(double t_star, double a0, double a1);
  Germ(double t_star, double a0, double a1, double a2);

  double t_star() const noexcept { return t_star_; }
  double a0() const noexcept { return coeffs_[0]; }
  double a1() const noexcept { return coeffs_[1]; }
  bool has_a2() const noexcept { return coeffs_.size() == 3; }
  double a2() const;
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

 private:
  double t_star_;
  std::vector<double> coeffs_;
};

struct FitResult {
  std::vector<double> z;  // one value per symbol, non-decreasing
  TaylorJet achieved;     // recomputed from z by pressure_jet
  // |Q0 - e^a0|, |Q1 - a1 e^a0| and, for level-2 fits, |P'' - a2|.
  std::vector<double> residuals;
  std::optional<std::pair<double, double>> feasible_a2;

  CylinderPotential potential() const;
};

// Solution of the two-block system: `low_count` symbols at z_low and
// `high_count` at z_high with z_low < z_high,
//   low e^{t z_low} + high e^{t z_high} = e^{a0},
//   low z_low e^{t z_low} + high z_high e^{t z_high} = a1 e^{a0}.
struct BlockSolution {
  double low_count = 0.0;
  double high_count = 0.0;
  double z_low = 0.0;
  double z_high = 0.0;
  double a2 = 0.0;           // R2 / e^{a0} - a1^2 of this solution
  std::array<double, 2> residual{};  // normalized by e^{a0}
  int newton_iterations = 0;
};

struct A2Range {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<BlockSolution> family;  // ordered by increasing low_count
  std::vector<std::string> warnings;
};

struct Table3Row {
  double n = 0.0;
  double c_a = 0.0;
  double eta = 0.0;
  std::array<double, 2> residuals{};  // of both equations, unnormalized
  int iterations = 0;
};

enum class Branch { lower, upper };

// (a0 - log n)/t* < a1 < a0/t*, both strict. n may be any real >= 2.
bool feasibility_level1(const Germ& germ, double n);

// True when a1 sits on the lower boundary (a0 - log n)/t*, where the only
// realizing level-0 potential is the constant one.
bool on_constant_boundary(const Germ& germ, double n);

// Level-0 potential matching P and P' at t*: n-1 symbols at z_a and one at
// z_b >= z_a. Throws FeasibilityError when the germ is not realizable and
// NumericError if the solver cannot meet 1e-13 e^{a0}.
FitResult fit_level1(const Germ& germ, std::size_t n);

// Inner approximation [m_hat, M_hat] of the attainable P''(t*) among
// potentials realizing (a0, a1): the range of a2 over all two-block
// solutions (k low symbols, n-k high, k = 1..n-1).
A2Range feasible_a2_range(const Germ& germ, std::size_t n);

// Level-0 potential matching P, P', P'' at t*. a2 must lie in the range of
// feasible_a2_range (RangeError otherwise). Between adjacent block
// solutions the value of P'' is tracked along the homotopy that slides one
// coordinate from the low block to the high block.
FitResult fit_level2(const Germ& germ, std::size_t n);

// Solves the two-block system above. Counts are real so astronomically large
// alphabets never materialize. Throws FeasibilityError when no solution with
// z_low < z_high exists (high_count >= exp(a0 - t* a1)) and NumericError if
// the Newton polish cannot reach 1e-13.
BlockSolution solve_two_block(double t_star, double a0, double a1,
                              double low_count, double high_count);

// Row of the (c_a, eta(c_a)) table: n low symbols at c_a and one at
// eta(c_a), solving n e^{z_a} + e^{z_b} = e^2 and
// n z_a e^{z_a} + z_b e^{z_b} = e^2 by damped Newton started from
// z_a = -log n - log log n - 1, z_b = 2. Requires n >= 10.
Table3Row table3_solve(double n);

// Solves z e^{t* z} = y on the requested monotone branch:
// lower = (-inf, -1/t*], upper = [-1/t*, inf).
double varsigma_inverse(double y, Branch branch, double t_star);

}  // namespace thermoforge
