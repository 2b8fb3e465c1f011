#include "thermoforge/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermoforge/combinatorics.hpp"
#include "thermoforge/error.hpp"

namespace thermoforge {

namespace {

constexpr double kSpectralTolerance = 1e-13;
constexpr int kSpectralIterationCap = 100000;
constexpr std::size_t kPairwiseQ2Limit = 4096;

void require_level0_full_shift(const CylinderPotential& potential,
                               const char* op) {
  if (!potential.space().is_full_shift()) {
    throw DomainError(std::string(op) + ": requires the full shift");
  }
  if (potential.window() != 1) {
    throw DomainError(std::string(op) + ": requires window 1");
  }
}

double log_sum_exp(std::span<const double> c, double t) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : c) top = std::max(top, t * v);
  double sum = 0.0;
  for (double v : c) sum += std::exp(t * v - top);
  return top + std::log(sum);
}

// Power iteration on the admissible-word graph. State u is a word of length
// w; its successors are (u without first symbol) + s, weighted by
// exp(t c_successor). Collatz-Wielandt bounds bracket the Perron root; the
// iterate is mixed with (I + B/hi) so periodic matrices converge too.
double lifted_log_radius(const CylinderPotential& potential, double t) {
  const SubshiftSpec& space = potential.space();
  const std::size_t n = space.alphabet_size();
  const std::size_t w = potential.window();
  const auto c = potential.values();
  const std::size_t states = c.size();
  const std::size_t suffix_mod = states / n;

  std::vector<char> admissible(states, 1);
  if (!space.is_full_shift() && w > 1) {
    for (std::size_t u = 0; u < states; ++u) {
      const auto word = index_to_word(u, n, w);
      for (std::size_t i = 1; i < w; ++i) {
        if (!space.allows(word[i - 1], word[i])) {
          admissible[u] = 0;
          break;
        }
      }
    }
  }

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < states; ++v) {
    if (admissible[v]) shift = std::max(shift, t * c[v]);
  }
  std::vector<double> weight(states, 0.0);
  for (std::size_t v = 0; v < states; ++v) {
    if (admissible[v]) weight[v] = std::exp(t * c[v] - shift);
  }

  std::vector<double> x(states), y(states);
  for (std::size_t u = 0; u < states; ++u) x[u] = admissible[u] ? 1.0 : 0.0;

  for (int iter = 0; iter < kSpectralIterationCap; ++iter) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t u = 0; u < states; ++u) {
      if (!admissible[u]) continue;
      const auto last = static_cast<Symbol>(u % n);
      const std::size_t base = (u % suffix_mod) * n;
      double acc = 0.0;
      for (Symbol s = 0; s < n; ++s) {
        if (space.allows(last, s)) acc += weight[base + s] * x[base + s];
      }
      y[u] = acc;
      const double ratio = acc / x[u];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (!(hi > 0.0)) {
      throw NumericError("pressure_spectral: transfer matrix underflowed");
    }
    if (hi - lo <= kSpectralTolerance * hi) {
      return std::log(0.5 * (lo + hi)) + shift;
    }
    double top = 0.0;
    for (std::size_t u = 0; u < states; ++u) {
      x[u] += y[u] / hi;
      top = std::max(top, x[u]);
    }
    for (double& v : x) v /= top;
  }
  throw NumericError("pressure_spectral: power iteration did not converge in " +
                     std::to_string(kSpectralIterationCap) + " sweeps");
}

}  // namespace

double QValues::unscaled_q0() const { return q0 * std::exp(log_scale); }
double QValues::unscaled_q1() const { return q1 * std::exp(log_scale); }
double QValues::unscaled_r2() const { return r2 * std::exp(log_scale); }
double QValues::unscaled_q2() const { return q2 * std::exp(2.0 * log_scale); }

double pressure(const CylinderPotential& potential, double t) {
  if (!potential.space().is_full_shift()) {
    throw DomainError(
        "pressure: closed form needs the full shift; use pressure_spectral");
  }
  if (potential.window() == 1) return log_sum_exp(potential.values(), t);
  return lifted_log_radius(potential, t);
}

double pressure_spectral(const CylinderPotential& potential, double t) {
  if (!potential.space().irreducible()) {
    throw DomainError("pressure_spectral: transition matrix is reducible");
  }
  return lifted_log_radius(potential, t);
}

namespace {

struct CenteredMoments {
  double mean = 0.0;
  std::vector<double> mu;
};

CenteredMoments centered_moments(std::span<const double> c, double t_star,
                                 std::size_t order) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : c) top = std::max(top, t_star * v);
  std::vector<double> w(c.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    w[i] = std::exp(t_star * c[i] - top);
    total += w[i];
    weighted += w[i] * c[i];
  }
  CenteredMoments out;
  out.mean = weighted / total;
  // One correction pass keeps the centered first moment at rounding level.
  double drift = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) drift += w[i] * (c[i] - out.mean);
  out.mean += drift / total;

  out.mu.assign(order + 1, 0.0);
  out.mu[0] = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = c[i] - out.mean;
    const double p = w[i] / total;
    double power = d;
    for (std::size_t k = 1; k <= order; ++k) {
      out.mu[k] += p * power;
      power *= d;
    }
  }
  if (order >= 1) out.mu[1] = 0.0;
  return out;
}

}  // namespace

std::vector<double> central_moments(const CylinderPotential& potential,
                                    double t_star, std::size_t order) {
  require_level0_full_shift(potential, "central_moments");
  return centered_moments(potential.values(), t_star, order).mu;
}

TaylorJet pressure_jet(const CylinderPotential& potential, double t_star,
                       std::size_t order) {
  require_level0_full_shift(potential, "pressure_jet");
  if (order > kMaxJetOrder) {
    throw DomainError("pressure_jet: order " + std::to_string(order) +
                      " exceeds the limit " + std::to_string(kMaxJetOrder));
  }
  TaylorJet jet;
  jet.t_star = t_star;
  jet.derivs.assign(order + 1, 0.0);
  jet.derivs[0] = log_sum_exp(potential.values(), t_star);
  if (order == 0) return jet;

  const CenteredMoments cm =
      centered_moments(potential.values(), t_star, order);
  const std::vector<double>& mu = cm.mu;
  jet.derivs[1] = cm.mean;

  // kappa_m = mu_m - sum_{k=2}^{m-1} C(m-1, k-1) kappa_k mu_{m-k}; the k = 1
  // term drops because the moments are centered.
  std::vector<double> kappa(order + 1, 0.0);
  for (std::size_t m = 2; m <= order; ++m) {
    double acc = mu[m];
    double binom = 1.0;  // C(m-1, k-1), starting at k = 1
    for (std::size_t k = 2; k < m; ++k) {
      binom = binom * static_cast<double>(m - k + 1) /
              static_cast<double>(k - 1);
      acc -= binom * kappa[k] * mu[m - k];
    }
    kappa[m] = acc;
    jet.derivs[m] = acc;
  }
  return jet;
}

std::vector<double> cumulants_via_faa_di_bruno(
    std::span<const double> central_moments, std::size_t order) {
  if (order > 6) {
    throw DomainError("cumulants_via_faa_di_bruno: order above 6");
  }
  if (central_moments.size() < order + 1) {
    throw DomainError("cumulants_via_faa_di_bruno: not enough moments");
  }
  // log^(q)(1) = (-1)^(q-1) (q-1)!
  std::vector<double> log_derivs(order);
  double fact = 1.0;
  for (std::size_t q = 1; q <= order; ++q) {
    log_derivs[q - 1] = (q % 2 == 1 ? 1.0 : -1.0) * fact;
    fact *= static_cast<double>(q);
  }
  std::vector<double> inner(central_moments.begin() + 1,
                            central_moments.begin() + 1 + order);
  std::vector<double> kappa(order + 1, 0.0);
  for (std::size_t k = 2; k <= order; ++k) {
    kappa[k] = compose_derivatives(log_derivs, inner, static_cast<unsigned>(k));
  }
  return kappa;
}

QValues q_values(std::span<const double> z, double t) {
  if (z.empty()) throw DomainError("q_values: z must be non-empty");
  QValues q;
  double top = -std::numeric_limits<double>::infinity();
  for (double v : z) {
    if (!std::isfinite(v)) throw DomainError("q_values: z must be finite");
    top = std::max(top, t * v);
  }
  q.log_scale = top;
  std::vector<double> e(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    e[i] = std::exp(t * z[i] - top);
    q.q0 += e[i];
    q.q1 += z[i] * e[i];
    q.r2 += z[i] * z[i] * e[i];
  }
  if (z.size() <= kPairwiseQ2Limit) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = i + 1; j < z.size(); ++j) {
        const double d = z[i] - z[j];
        row += d * d * e[j];
      }
      q.q2 += row * e[i];
    }
  } else {
    // sum_{i<j} (z_i - z_j)^2 e_i e_j = Q0 * sum e_i (z_i - zbar)^2
    const double zbar = q.q1 / q.q0;
    double spread = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double d = z[i] - zbar;
      spread += e[i] * d * d;
    }
    q.q2 = q.q0 * spread;
  }
  const double identity = q.q0 * q.r2 - q.q1 * q.q1;
  const double tol = std::max(1e-12 * std::abs(q.q2), 1e-14 * q.q0 * q.r2);
  if (std::abs(q.q2 - identity) > tol) {
    throw NumericError("q_values: Q2 = Q0 R2 - Q1^2 violated beyond rounding");
  }
  return q;
}

DerivativeResiduals verify_derivative_formulas(
    const CylinderPotential& potential, double t_star) {
  require_level0_full_shift(potential, "verify_derivative_formulas");
  const TaylorJet jet = pressure_jet(potential, t_star, 4);
  const BernoulliWeights w = equilibrium_weights(potential, t_star);
  const auto c = potential.values();
  DerivativeResiduals r;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = c[i] - jet[1];
    const double p = w.probabilities[i];
    r.m2 += p * d * d;
    r.m3 += p * d * d * d;
    r.m4 += p * d * d * d * d;
  }
  const double fourth_expected = r.m4 - 3.0 * r.m2 * r.m2;
  r.second = std::abs(jet[2] - r.m2);
  r.third = std::abs(jet[3] - r.m3);
  r.fourth = std::abs(jet[4] - fourth_expected);
  auto ok = [](double residual, double value) {
    return residual < 1e-10 * std::max(1.0, std::abs(value));
  };
  r.within_tolerance = ok(r.second, r.m2) && ok(r.third, r.m3) &&
                       ok(r.fourth, fourth_expected);
  return r;
}

TaylorJet finite_difference_jet(const CylinderPotential& potential,
                                double t_star, std::size_t order) {
  if (order > 4) throw DomainError("finite_difference_jet: order above 4");
  TaylorJet jet;
  jet.t_star = t_star;
  jet.derivs.assign(order + 1, 0.0);

  // Differentiate t -> P(t) - t * max(c): the affine part is exact and the
  // remainder stays O(log n), which keeps the roundoff in the stencils small.
  const double top = potential.max_value();
  // Long double keeps the fourth-order stencil above roundoff.
  using real = long double;
  auto reduced = [&](real t) -> real {
    if (potential.space().is_full_shift() && potential.window() == 1) {
      real ties = 0.0L;
      real rest = 0.0L;
      for (double v : potential.values()) {
        if (v == top) {
          ties += 1.0L;
        } else {
          rest += std::exp(t * (static_cast<real>(v) - top));
        }
      }
      return ties == 1.0L ? std::log1p(rest) : std::log(ties + rest);
    }
    const double td = static_cast<double>(t);
    const double p = potential.space().is_full_shift()
                         ? pressure(potential, td)
                         : pressure_spectral(potential, td);
    return static_cast<real>(p) - t * top;
  };

  auto stencil = [&](real h, std::size_t k) -> real {
    const real t = t_star;
    switch (k) {
      case 1:
        return (reduced(t + h) - reduced(t - h)) / (2.0L * h);
      case 2:
        return (reduced(t + h) - 2.0L * reduced(t) + reduced(t - h)) / (h * h);
      case 3:
        return (reduced(t + 2 * h) - 2.0L * reduced(t + h) +
                2.0L * reduced(t - h) - reduced(t - 2 * h)) /
               (2.0L * h * h * h);
      default:
        return (reduced(t + 2 * h) - 4.0L * reduced(t + h) + 6.0L * reduced(t) -
                4.0L * reduced(t - h) + reduced(t - 2 * h)) /
               (h * h * h * h);
    }
  };

  // Derivatives grow like spread^k, so the step shrinks with the spread.
  const real spread = top - potential.min_value();
  const real h = 3e-2L / std::max(1.0L, spread);
  jet.derivs[0] = static_cast<double>(reduced(t_star) + t_star * static_cast<real>(top));
  for (std::size_t k = 1; k <= order; ++k) {
    const real d4 = stencil(4 * h, k);
    const real d2 = stencil(2 * h, k);
    const real d1 = stencil(h, k);
    const real r_coarse = (4.0L * d2 - d4) / 3.0L;
    const real r_fine = (4.0L * d1 - d2) / 3.0L;
    jet.derivs[k] = static_cast<double>((16.0L * r_fine - r_coarse) / 15.0L);
  }
  if (order >= 1) jet.derivs[1] += top;
  return jet;
}

}  // namespace thermoforge
