#include "thermoforge/cltsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "thermoforge/error.hpp"
#include "thermoforge/pressure.hpp"

namespace thermoforge {

namespace {

constexpr std::size_t kBlockSize = 4096;
constexpr std::size_t kMinSamples = 10000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 block_stream(std::uint64_t seed, std::uint64_t m_index,
                             std::uint64_t block) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (m_index * 0xd1b54a32d192ed03ULL);
  key = splitmix64(state);
  state = key ^ (block * 0x8cb92ba72f3d8dd7ULL);
  std::seed_seq seq{splitmix64(state), splitmix64(state)};
  return std::mt19937_64(seq);
}

// One block of S_m / sqrt(m) draws. Symbol counts of an orbit of length m
// are multinomial, sampled as a chain of conditional binomials.
void fill_block(std::span<double> out, std::span<const double> values,
                std::span<const double> probs, std::size_t m,
                std::mt19937_64& rng) {
  const std::size_t n = values.size();
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + probs[i];
  const double root_m = std::sqrt(static_cast<double>(m));
  for (double& sample : out) {
    std::uint64_t left = m;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n && left > 0; ++i) {
      const double q = std::clamp(probs[i] / tail[i], 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> draw(left, q);
      const std::uint64_t k = draw(rng);
      sum += static_cast<double>(k) * values[i];
      left -= k;
    }
    sum += static_cast<double>(left) * values[n - 1];
    sample = sum / root_m;
  }
}

}  // namespace

CylinderPotential center_potential(const CylinderPotential& potential,
                                   double t_star) {
  const TaylorJet jet = pressure_jet(potential, t_star, 1);
  if (potential.is_constant()) {
    return CylinderPotential::level0(
        std::vector<double>(potential.values().size(), 0.0));
  }
  return potential.shifted(-jet[1]);
}

double clt_tail_bound(double delta2, double delta3, double delta4,
                      std::size_t m) {
  if (!(delta2 > 0.0)) throw DomainError("tail bound requires delta2 > 0");
  if (m == 0) throw DomainError("tail bound requires m >= 1");
  const double pi = std::numbers::pi;
  return (9.0 * std::abs(delta3) + 2.0 * std::abs(delta4)) /
         (std::sqrt(2.0 * pi * pi * pi * static_cast<double>(m)) *
          std::pow(delta2, 1.5));
}

double edgeworth_correction(double y, std::size_t m, double delta2,
                            double delta3) {
  if (!(delta2 > 0.0)) throw DomainError("edgeworth correction requires delta2 > 0");
  if (m == 0) throw DomainError("edgeworth correction requires m >= 1");
  const double y2 = y * y;
  return delta3 / (6.0 * std::sqrt(static_cast<double>(m))) *
         (1.0 - y2 / delta2) * std::exp(-y2 / (2.0 * delta2));
}

double ks_distance_normal(std::span<const double> sorted, double variance) {
  if (!(variance > 0.0)) throw DomainError("KS distance requires variance > 0");
  const double n = static_cast<double>(sorted.size());
  const double scale = std::sqrt(2.0 * variance);
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-sorted[i] / scale);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf,
                  cdf - static_cast<double>(i) / n});
  }
  return d;
}

CltReport simulate_gm(const SimConfig& config) {
  if (config.samples_per_m < kMinSamples) {
    throw DomainError("cltsim needs at least 10^4 samples per orbit length");
  }
  if (config.orbit_lengths.empty()) {
    throw DomainError("cltsim needs at least one orbit length");
  }
  for (std::size_t m : config.orbit_lengths) {
    if (m == 0) throw DomainError("orbit lengths must be positive");
  }
  const TaylorJet jet = pressure_jet(config.potential, config.t_star, 4);
  CltReport report;
  report.delta2 = jet[2];
  report.delta3 = jet[3];
  report.delta4 = jet[4];
  if (!(report.delta2 > 0.0)) {
    throw DomainError(
        "degenerate potential: the variance of the CLT limit is zero");
  }
  const CylinderPotential centered =
      center_potential(config.potential, config.t_star);
  report.centering_shift = jet[1];
  report.samples_per_m = config.samples_per_m;
  report.seed = config.seed;

  const auto values = centered.values();
  const BernoulliWeights weights =
      equilibrium_weights(config.potential, config.t_star);
  const std::size_t total = config.samples_per_m;
  const std::size_t blocks = (total + kBlockSize - 1) / kBlockSize;
  unsigned workers = config.threads != 0 ? config.threads
                                         : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, blocks));

  std::vector<double> samples(total);
  for (std::size_t mi = 0; mi < config.orbit_lengths.size(); ++mi) {
    const std::size_t m = config.orbit_lengths[mi];
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t b = next++; b < blocks; b = next++) {
        const std::size_t begin = b * kBlockSize;
        const std::size_t end = std::min(total, begin + kBlockSize);
        auto rng = block_stream(config.seed, mi, b);
        fill_block(std::span(samples).subspan(begin, end - begin), values,
                   weights.probabilities, m, rng);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    CltRow row;
    row.m = m;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(total);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double s : samples) {
      const double d = (s - mean) * (s - mean);
      m2 += d;
      m4 += d * d;
    }
    const double nd = static_cast<double>(total);
    row.mean = mean;
    row.variance = m2 / (nd - 1.0);
    row.mean_stderr = std::sqrt(row.variance / nd);
    row.variance_stderr =
        std::sqrt(std::max(0.0, m4 / nd - (m2 / nd) * (m2 / nd)) / nd);

    std::sort(samples.begin(), samples.end());
    row.ks_distance = ks_distance_normal(samples, report.delta2);
    row.bound =
        clt_tail_bound(report.delta2, report.delta3, report.delta4, m);
    row.within_bound = row.ks_distance <= row.bound;
    if (row.within_bound && !report.first_compliant_m) {
      report.first_compliant_m = m;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace thermoforge
