#pragma once

#include <cstddef>
#include <vector>

#include "thermoforge/symbolic.hpp"

namespace thermoforge {

// phi(x) = sum_k r^k f_k(x_k) on the full n-shift. f holds one table of n
// values per coordinate; coordinates past the end reuse the last table.
class DecayingPotentialSpec {
 public:
  DecayingPotentialSpec(std::size_t n, double r,
                        std::vector<std::vector<double>> f);

  std::size_t alphabet_size() const noexcept { return n_; }
  double ratio() const noexcept { return r_; }
  const std::vector<std::vector<double>>& tables() const noexcept { return f_; }
  const std::vector<double>& table(std::size_t k) const;

  // Exact inf and sup over x of sum_{k >= window} r^k f_k(x_k).
  double tail_inf(std::size_t window) const;
  double tail_sup(std::size_t window) const;
  // r^window max|f| / (1 - r).
  double tail_norm_bound(std::size_t window) const;
  double max_abs() const noexcept;

 private:
  template <class Pick>
  double tail(std::size_t window, Pick pick) const;

  std::size_t n_;
  double r_;
  std::vector<std::vector<double>> f_;
};

enum class DiscretizeMode { inf, sup, mid };

// Locally constant potential on words of length `window`: the head sum plus
// the tail infimum, supremum, or their midpoint.
CylinderPotential discretize(const DecayingPotentialSpec& spec,
                             std::size_t window, DiscretizeMode mode);

// log sum_s exp(t g(s)) with g(s) = sum_k r^k f_k(s): the pressure of phi
// itself, since each coordinate contributes g to the Birkhoff sums.
double limit_pressure(const DecayingPotentialSpec& spec, double t);

struct ConvergenceRow {
  std::size_t window = 0;
  double p_inf = 0.0;
  double p_mid = 0.0;
  double p_sup = 0.0;
  double gap = 0.0;    // p_sup - p_inf
  double bound = 0.0;  // 2 |t| r^w max|f| / (1 - r)
};

// Windows must be strictly increasing.
std::vector<ConvergenceRow> convergence_study(
    const DecayingPotentialSpec& spec, double t,
    const std::vector<std::size_t>& windows);

}  // namespace thermoforge
