#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thermoforge/symbolic.hpp"

namespace thermoforge {

// Value and derivatives [P, P', ..., P^(N)] of t -> P(t phi) at t_star.
struct TaylorJet {
  double t_star = 0.0;
  std::vector<double> derivs;

  std::size_t order() const noexcept {
    return derivs.empty() ? 0 : derivs.size() - 1;
  }
  double operator[](std::size_t k) const { return derivs.at(k); }
};

// Q0 = sum e^{t z_i}, Q1 = sum z_i e^{t z_i},
// Q2 = sum_{i<j} (z_i - z_j)^2 e^{t(z_i + z_j)}, R2 = sum z_i^2 e^{t z_i}.
// Stored scaled by e^{-s} (Q2 by e^{-2s}) with s = max t z_i so that large
// arguments do not overflow; the scale cancels in P' = Q1/Q0 and
// P'' = Q2/Q0^2.
struct QValues {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double r2 = 0.0;
  double log_scale = 0.0;

  double unscaled_q0() const;
  double unscaled_q1() const;
  double unscaled_q2() const;
  double unscaled_r2() const;
};

inline constexpr std::size_t kMaxJetOrder = 12;

// P(t phi) on the full shift. Window 1 uses the closed form
// log sum_i e^{t c_i}; longer windows use the word-graph lift.
double pressure(const CylinderPotential& potential, double t);

// log of the Perron root of B(t), B_ij = A_ij e^{t c_j}, lifted to the graph
// of admissible words when the window exceeds 1. Accepts the full shift as
// the all-ones matrix. Throws DomainError for reducible matrices and
// NumericError if power iteration does not reach relative 1e-13 within
// 1e5 sweeps.
double pressure_spectral(const CylinderPotential& potential, double t);

// Cumulants of the value distribution under the equilibrium weights at
// t_star: derivs[0] = P, derivs[1] = mean, derivs[k] = k-th cumulant.
// Full shift, window 1, order <= kMaxJetOrder.
TaylorJet pressure_jet(const CylinderPotential& potential, double t_star,
                       std::size_t order);

// Central moments mu_0 = 1, mu_1 = 0, mu_2, ..., mu_order of the values
// under the equilibrium weights at t_star.
std::vector<double> central_moments(const CylinderPotential& potential,
                                    double t_star, std::size_t order);

// Cumulants kappa_2..kappa_order (index k holds kappa_k, entries 0 and 1
// are zero) from central moments through the Faa di Bruno expansion of
// log(M(s)). Independent of the recursion used by pressure_jet; order <= 6.
std::vector<double> cumulants_via_faa_di_bruno(
    std::span<const double> central_moments, std::size_t order);

QValues q_values(std::span<const double> z, double t);

struct DerivativeResiduals {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double second = 0.0;   // |P'' - m2|
  double third = 0.0;    // |P''' - m3|
  double fourth = 0.0;   // |P'''' - (m4 - 3 m2^2)|
  bool within_tolerance = false;
};

// Checks the second, third and fourth derivative formulas in the regime
// where the eigenfunction is constant (window 1, full shift): every
// eigenfunction-derivative term vanishes and the derivatives reduce to
// centered moments. Tolerance 1e-10 * max(1, |value|).
DerivativeResiduals verify_derivative_formulas(
    const CylinderPotential& potential, double t_star);

// Central differences of P with smallest step 1e-2, Richardson-extrapolated
// twice over steps {4h, 2h, h}. order <= 4.
TaylorJet finite_difference_jet(const CylinderPotential& potential,
                                double t_star, std::size_t order);

}  // namespace thermoforge
