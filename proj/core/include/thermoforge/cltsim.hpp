#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "thermoforge/symbolic.hpp"

namespace thermoforge {

// Subtracts the equilibrium mean at t_star from every value.
CylinderPotential center_potential(const CylinderPotential& potential,
                                   double t_star);

struct SimConfig {
  CylinderPotential potential;
  double t_star = 0.0;
  std::vector<std::size_t> orbit_lengths;
  std::size_t samples_per_m = 1000000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct CltRow {
  std::size_t m = 0;
  double ks_distance = 0.0;
  double bound = 0.0;
  bool within_bound = false;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
};

struct CltReport {
  double delta2 = 0.0;
  double delta3 = 0.0;
  double delta4 = 0.0;
  bool centered = true;
  double centering_shift = 0.0;  // subtracted from every value
  std::size_t samples_per_m = 0;
  std::uint64_t seed = 0;
  std::vector<CltRow> rows;
  std::optional<std::size_t> first_compliant_m;
};

// (9|d3| + 2|d4|) / (sqrt(2 pi^3 m) d2^{3/2}).
double clt_tail_bound(double delta2, double delta3, double delta4,
                      std::size_t m);

// (d3 / (6 sqrt m)) (1 - y^2/d2) exp(-y^2 / (2 d2)).
double edgeworth_correction(double y, std::size_t m, double delta2,
                            double delta3);

// sup_y |F_n(y) - Phi(y / sqrt(variance))| for sorted samples.
double ks_distance_normal(std::span<const double> sorted, double variance);

// Draws samples_per_m orbits of each length under the Bernoulli equilibrium
// measure and compares S_m / sqrt(m) with N(0, delta2). Samples come in
// fixed blocks, each with its own stream keyed by (seed, m index, block), so
// the report does not depend on the number of threads.
CltReport simulate_gm(const SimConfig& config);

}  // namespace thermoforge
