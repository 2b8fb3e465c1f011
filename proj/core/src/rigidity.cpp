#include "thermoforge/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thermoforge/error.hpp"
#include "thermoforge/pressure.hpp"

namespace thermoforge {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
const double kSqrt2Pi3 = std::sqrt(2.0 * kPi * kPi * kPi);

void require_positive_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("F_abc is defined for finite t > 0");
  }
}

// F''' / e^{-c t^2}.
double third_shape_at(const FabcFamily& f, double t) {
  const double c = f.c;
  const double c2 = c * c;
  const double c3 = c2 * c;
  const double t2 = t * t;
  return -8.0 * c3 * t2 * t - 8.0 * c3 * t2 + 12.0 * c2 * t -
         6.0 * c / t2 - 6.0 / (t2 * t2);
}

struct Visitor {
  double t;

  DerivativeSample operator()(const FabcFamily& f) const {
    const FabcDerivatives d = f_abc_derivs(f, t);
    return {d.second_shape, d.third_shape, f_abc_fourth_shape(f, t),
            d.log_envelope};
  }

  DerivativeSample operator()(const PotentialPressure& p) const {
    const TaylorJet jet = pressure_jet(p.potential, t, 4);
    return {jet[2], jet[3], jet[4], 0.0};
  }

  DerivativeSample operator()(const TabulatedDerivatives& tab) const {
    for (std::size_t i = 0; i < tab.t.size(); ++i) {
      if (std::abs(tab.t[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
        return {tab.d2.at(i), tab.d3.at(i), tab.d4.at(i), 0.0};
      }
    }
    throw DomainError("tabulated derivatives have no entry at the grid point");
  }
};

}  // namespace

void FabcFamily::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("F_abc requires a > 0 and b > 0");
  }
  if (!(c > 1.0 / (2.0 * std::numbers::sqrt2)) || !std::isfinite(c)) {
    throw DomainError("F_abc requires c > 1/(2 sqrt 2) for convexity");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("F_abc parameters must be finite");
  }
}

double FabcDerivatives::second() const {
  return second_shape * std::exp(log_envelope);
}

double FabcDerivatives::third() const {
  return third_shape * std::exp(log_envelope);
}

FabcDerivatives f_abc_derivs(const FabcFamily& f, double t) {
  f.validate();
  require_positive_t(t);
  const double c = f.c;
  const double c2 = c * c;
  const double t2 = t * t;
  const double e = std::exp(-c * t2);
  FabcDerivatives d;
  d.t = t;
  d.value = f.a * t + f.b + e + e / t;
  d.first = f.a + e * (-2.0 * c * t - 2.0 * c - 1.0 / t2);
  d.second_shape = 4.0 * c2 * t2 + 4.0 * c2 * t - 2.0 * c + 2.0 * c / t +
                   2.0 / (t2 * t);
  d.third_shape = third_shape_at(f, t);
  d.log_envelope = -c * t2;
  return d;
}

double f_abc_fourth_shape(const FabcFamily& f, double t) {
  f.validate();
  require_positive_t(t);
  // Length scale on which F''' changes: the poles at 0 and the Gaussian.
  const double h = 1e-2 * std::min({t, 1.0 / (f.c * t), 1.0});
  const double env = -f.c * t * t;
  auto g = [&](double s) {
    return third_shape_at(f, s) * std::exp(-f.c * s * s - env);
  };
  auto central = [&](double step) {
    return (g(t + step) - g(t - step)) / (2.0 * step);
  };
  const double coarse = central(2.0 * h);
  const double fine = central(h);
  return (4.0 * fine - coarse) / 3.0;
}

double supporting_intercept(const FabcFamily& f, double t) {
  const FabcDerivatives d = f_abc_derivs(f, t);
  return d.value - t * d.first;
}

DerivativeSample sample_derivatives(const CandidateFunction& fn, double t) {
  return std::visit(Visitor{t}, fn);
}

std::string candidate_kind(const CandidateFunction& fn) {
  switch (fn.index()) {
    case 0: return "fabc";
    case 1: return "potential";
    default: return "tabulated";
  }
}

std::vector<DiagnosticPoint> divergence_diagnostic(
    const CandidateFunction& fn, const std::vector<double>& grid) {
  std::vector<DiagnosticPoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const DerivativeSample s = sample_derivatives(fn, t);
    DiagnosticPoint p;
    p.t = t;
    if (!(s.d2 > 0.0) || !std::isfinite(s.d2) || !std::isfinite(s.d3)) {
      p.flagged = true;
      p.d = std::numeric_limits<double>::quiet_NaN();
    } else {
      p.d = s.d3 / s.d2 -
            kSqrt2Pi * std::exp(0.5 * (std::log(s.d2) + s.log_scale));
    }
    out.push_back(p);
  }
  return out;
}

RigidityReport rigidity_inequalities(const CandidateFunction& fn,
                                     const std::vector<double>& grid,
                                     double m_phi) {
  if (!(m_phi >= 0.0) || !std::isfinite(m_phi)) {
    throw DomainError("M_phi must be finite and non-negative");
  }
  RigidityReport report;
  report.kind = candidate_kind(fn);
  report.m_phi = m_phi;
  const auto diag = divergence_diagnostic(fn, grid);

  double prev_gap = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const DerivativeSample s = sample_derivatives(fn, t);
    const double scale = std::exp(s.log_scale);
    RigidityPoint p;
    p.t = t;
    p.second = s.d2 * scale;
    p.third = s.d3 * scale;
    p.fourth = s.d4 * scale;
    p.flagged = diag[i].flagged;
    p.d = diag[i].d;
    const double d2 = std::max(s.d2, 0.0);
    p.log_second = d2 > 0.0 ? std::log(d2) + s.log_scale
                            : -std::numeric_limits<double>::infinity();

    // F''^{3/2} with the envelope kept apart: d2^{3/2} e^{1.5 s}.
    const double pow32 = d2 > 0.0 ? std::exp(1.5 * p.log_second) : 0.0;
    const double unit_gap = 1.0 - kSqrt2Pi * pow32;

    // Both inequalities compared after dividing by e^{s}.
    const double lhs50 = kSqrt2Pi3 * d2 * std::sqrt(d2) * std::abs(s.d3) *
                         std::exp(1.5 * s.log_scale);
    const double rhs50 = 9.0 * std::abs(s.d3) + 2.0 * std::abs(s.d4) +
                         3.0 * kSqrt2Pi3 * m_phi * d2 * d2 * std::sqrt(d2) *
                             std::exp(1.5 * s.log_scale);
    p.ineq50_holds = lhs50 <= rhs50;
    p.ineq50_lhs = lhs50 * scale;
    p.ineq50_rhs = rhs50 * scale;

    const double lhs19 = std::abs(s.d3 * unit_gap);
    const double rhs19 = 3.0 * m_phi * d2;
    p.ineq19_holds = lhs19 <= rhs19;
    p.ineq19_lhs = lhs19 * scale;
    p.ineq19_rhs = rhs19 * scale;
    p.tension = s.d3 * unit_gap * scale;

    if (p.flagged) ++report.flagged_count;
    if (i > 0 && !p.flagged && std::isfinite(prev_gap) &&
        (prev_gap > 0.0) != (unit_gap > 0.0)) {
      report.unit_crossings.emplace_back(grid[i - 1], t);
    }
    prev_gap = p.flagged ? std::numeric_limits<double>::quiet_NaN() : unit_gap;
    report.points.push_back(p);
  }
  return report;
}

}  // namespace thermoforge
