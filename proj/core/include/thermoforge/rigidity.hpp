#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thermoforge/symbolic.hpp"

namespace thermoforge {

// F(t) = a t + b + e^{-c t^2} + e^{-c t^2} / t on (0, inf). Convex when
// a, b > 0 and c > 1/(2 sqrt 2).
struct FabcFamily {
  double a = 2.0;
  double b = 3.0;
  double c = 1.0;

  void validate() const;
};

// Derivatives of F_abc at t. The second and third derivatives are
// shape * exp(log_envelope) with log_envelope = -c t^2, so they stay
// representable long after e^{-c t^2} underflows.
struct FabcDerivatives {
  double t = 0.0;
  double value = 0.0;
  double first = 0.0;
  double second_shape = 0.0;
  double third_shape = 0.0;
  double log_envelope = 0.0;

  double second() const;
  double third() const;
};

FabcDerivatives f_abc_derivs(const FabcFamily& family, double t);

// Fourth derivative of F_abc as a shape relative to the same envelope,
// from Richardson-extrapolated central differences of the closed-form F'''.
double f_abc_fourth_shape(const FabcFamily& family, double t);

// F(t) - t F'(t): the intercept of the supporting line at t.
double supporting_intercept(const FabcFamily& family, double t);

// t -> P(t phi) for a window-1 full-shift potential.
struct PotentialPressure {
  CylinderPotential potential;
};

// User-supplied derivative values (d2, d3, d4) at fixed t.
struct TabulatedDerivatives {
  std::vector<double> t;
  std::vector<double> d2;
  std::vector<double> d3;
  std::vector<double> d4;
};

using CandidateFunction =
    std::variant<FabcFamily, PotentialPressure, TabulatedDerivatives>;

// F'', F''', F'''' at t, each equal to the stored value times
// exp(log_scale).
struct DerivativeSample {
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
  double log_scale = 0.0;
};

DerivativeSample sample_derivatives(const CandidateFunction& fn, double t);

std::string candidate_kind(const CandidateFunction& fn);

struct DiagnosticPoint {
  double t = 0.0;
  double d = 0.0;         // F'''/F'' - sqrt(2 pi F''); NaN when flagged
  bool flagged = false;   // F'' <= 0 or not finite
};

std::vector<DiagnosticPoint> divergence_diagnostic(
    const CandidateFunction& fn, const std::vector<double>& grid);

struct RigidityPoint {
  double t = 0.0;
  double second = 0.0;
  double third = 0.0;
  double fourth = 0.0;
  double log_second = 0.0;  // log F''; -inf when F'' <= 0
  double d = 0.0;
  bool flagged = false;

  // sqrt(2 pi^3) F''^{3/2} |F'''| against
  // 9|F'''| + 2|F''''| + 3 sqrt(2 pi^3) M F''^{5/2}.
  double ineq50_lhs = 0.0;
  double ineq50_rhs = 0.0;
  bool ineq50_holds = false;

  // |F'''(1 - sqrt(2 pi) F''^{3/2})| against 3 M F''.
  double ineq19_lhs = 0.0;
  double ineq19_rhs = 0.0;
  bool ineq19_holds = false;

  // F'''(1 - sqrt(2 pi) F''^{3/2}), signed. In the Bernoulli regime the
  // eigenfunction derivative vanishes and the identity would force this
  // to zero.
  double tension = 0.0;
};

struct RigidityReport {
  std::string kind;
  double m_phi = 0.0;
  std::vector<RigidityPoint> points;
  std::size_t flagged_count = 0;
  // Grid intervals on which sqrt(2 pi) F''^{3/2} crosses 1.
  std::vector<std::pair<double, double>> unit_crossings;
  // Value the right side of the tension identity takes when the
  // eigenfunction derivative is zero.
  double tension_rhs = 0.0;
};

// Evaluates both inequalities at every grid point. Asserts nothing about
// whether they should hold; M_phi must be finite and non-negative.
RigidityReport rigidity_inequalities(const CandidateFunction& fn,
                                     const std::vector<double>& grid,
                                     double m_phi);

}  // namespace thermoforge
