#include "thermoforge/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoforge/error.hpp"
#include "thermoforge/pressure.hpp"

namespace thermoforge {

DecayingPotentialSpec::DecayingPotentialSpec(
    std::size_t n, double r, std::vector<std::vector<double>> f)
    : n_(n), r_(r), f_(std::move(f)) {
  if (n < 2 || n > kMaxAlphabet) {
    throw DomainError("decay spec: alphabet size must be in [2, 2^16]");
  }
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError("decay spec: ratio r must lie in (0, 1)");
  }
  if (f_.empty()) throw DomainError("decay spec: at least one table is required");
  for (const auto& row : f_) {
    if (row.size() != n) {
      throw DomainError("decay spec: every table needs one value per symbol");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw DomainError("decay spec: values must be finite");
    }
  }
}

const std::vector<double>& DecayingPotentialSpec::table(std::size_t k) const {
  return f_[std::min(k, f_.size() - 1)];
}

template <class Pick>
double DecayingPotentialSpec::tail(std::size_t window, Pick pick) const {
  const std::size_t last = f_.size() - 1;
  double sum = 0.0;
  for (std::size_t k = window; k < last; ++k) {
    sum += std::pow(r_, static_cast<double>(k)) * pick(f_[k]);
  }
  const std::size_t from = std::max(window, last);
  return sum + pick(f_[last]) * std::pow(r_, static_cast<double>(from)) /
                   (1.0 - r_);
}

double DecayingPotentialSpec::tail_inf(std::size_t window) const {
  return tail(window, [](const std::vector<double>& row) {
    return *std::min_element(row.begin(), row.end());
  });
}

double DecayingPotentialSpec::tail_sup(std::size_t window) const {
  return tail(window, [](const std::vector<double>& row) {
    return *std::max_element(row.begin(), row.end());
  });
}

double DecayingPotentialSpec::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& row : f_) {
    for (double v : row) m = std::max(m, std::abs(v));
  }
  return m;
}

double DecayingPotentialSpec::tail_norm_bound(std::size_t window) const {
  return std::pow(r_, static_cast<double>(window)) * max_abs() / (1.0 - r_);
}

CylinderPotential discretize(const DecayingPotentialSpec& spec,
                             std::size_t window, DiscretizeMode mode) {
  if (window < 1) throw DomainError("discretize: window must be at least 1");
  const std::size_t n = spec.alphabet_size();
  const std::size_t size = table_size(n, window);
  double tail = 0.0;
  switch (mode) {
    case DiscretizeMode::inf: tail = spec.tail_inf(window); break;
    case DiscretizeMode::sup: tail = spec.tail_sup(window); break;
    case DiscretizeMode::mid:
      tail = 0.5 * (spec.tail_inf(window) + spec.tail_sup(window));
      break;
  }
  std::vector<double> weights(window);
  for (std::size_t k = 0; k < window; ++k) {
    weights[k] = std::pow(spec.ratio(), static_cast<double>(k));
  }
  std::vector<double> values(size);
  std::vector<Symbol> word(window, 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    double v = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      v += weights[k] * spec.table(k)[word[k]];
    }
    values[idx] = v + tail;
    // Advance the base-n odometer, last symbol least significant.
    for (std::size_t k = window; k-- > 0;) {
      if (++word[k] < n) break;
      word[k] = 0;
    }
  }
  return CylinderPotential(SubshiftSpec(n), window, std::move(values));
}

double limit_pressure(const DecayingPotentialSpec& spec, double t) {
  const std::size_t n = spec.alphabet_size();
  const double r = spec.ratio();
  const std::size_t last = spec.tables().size() - 1;
  std::vector<double> g(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < last; ++k) {
      g[s] += std::pow(r, static_cast<double>(k)) * spec.tables()[k][s];
    }
    g[s] += spec.tables()[last][s] * std::pow(r, static_cast<double>(last)) /
            (1.0 - r);
  }
  return pressure(CylinderPotential::level0(std::move(g)), t);
}

std::vector<ConvergenceRow> convergence_study(
    const DecayingPotentialSpec& spec, double t,
    const std::vector<std::size_t>& windows) {
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (windows[i] <= windows[i - 1]) {
      throw DomainError("convergence_study: windows must be strictly increasing");
    }
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t w : windows) {
    ConvergenceRow row;
    row.window = w;
    row.p_inf = pressure(discretize(spec, w, DiscretizeMode::inf), t);
    row.p_mid = pressure(discretize(spec, w, DiscretizeMode::mid), t);
    row.p_sup = pressure(discretize(spec, w, DiscretizeMode::sup), t);
    // For t < 0 the order of the pressures flips.
    row.gap = std::abs(row.p_sup - row.p_inf);
    row.bound = 2.0 * std::abs(t) * spec.tail_norm_bound(w);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace thermoforge
