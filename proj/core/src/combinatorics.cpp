#include "thermoforge/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "thermoforge/error.hpp"

namespace thermoforge {

namespace {

__extension__ typedef unsigned __int128 u128;

// C(n, k) with n <= 64; every intermediate value is itself a binomial
// coefficient times a small factor, so 128 bits never overflow.
std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 acc = 1;
  for (unsigned i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const u128 p = static_cast<u128>(a) * b;
  if (p > std::numeric_limits<std::uint64_t>::max()) {
    throw SizeLimitError("Faa di Bruno coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(p);
}

}  // namespace

Partition::Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] == 0) throw DomainError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw DomainError("partition parts must be non-increasing");
    }
  }
}

unsigned Partition::total() const noexcept {
  return std::accumulate(parts_.begin(), parts_.end(), 0u);
}

std::vector<std::pair<unsigned, unsigned>> Partition::multiplicities() const {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned part : parts_) {
    if (!out.empty() && out.back().first == part) {
      ++out.back().second;
    } else {
      out.emplace_back(part, 1u);
    }
  }
  return out;
}

std::vector<Partition> partitions(unsigned j) {
  if (j > kMaxPartitionedInteger) {
    throw SizeLimitError("partitions: j = " + std::to_string(j) +
                         " exceeds the enumeration limit " +
                         std::to_string(kMaxPartitionedInteger));
  }
  std::vector<Partition> out;
  if (j == 0) {
    out.emplace_back();
    return out;
  }
  // Classic successor rule: drop the rightmost part > 1 by one and refill
  // the tail greedily with parts no larger than it.
  std::vector<unsigned> cur{j};
  while (true) {
    out.emplace_back(cur);
    std::size_t ones = 0;
    while (!cur.empty() && cur.back() == 1) {
      cur.pop_back();
      ++ones;
    }
    if (cur.empty()) break;
    const unsigned part = --cur.back();
    unsigned rest = static_cast<unsigned>(ones) + 1;
    while (rest > 0) {
      const unsigned take = std::min(part, rest);
      cur.push_back(take);
      rest -= take;
    }
  }
  return out;
}

std::uint64_t fdb_coefficient(unsigned j, const Partition& tau) {
  if (tau.total() != j) {
    throw DomainError("fdb_coefficient: partition sums to " +
                      std::to_string(tau.total()) + ", expected " +
                      std::to_string(j));
  }
  if (j > kMaxPartitionedInteger) {
    throw SizeLimitError("fdb_coefficient: j above enumeration limit");
  }
  // j! / (prod tau_i! prod mult_m!) factored group by group: choose the
  // m*k elements of the k blocks of size m, then split them into unordered
  // blocks by fixing the smallest remaining element of each block.
  std::uint64_t value = 1;
  unsigned remaining = j;
  for (const auto& [m, k] : tau.multiplicities()) {
    value = checked_mul(value, binomial(remaining, m * k));
    for (unsigned i = 0; i < k; ++i) {
      value = checked_mul(value, binomial(m * (k - i) - 1, m - 1));
    }
    remaining -= m * k;
  }
  return value;
}

double compose_derivatives(std::span<const double> outer_derivs,
                           std::span<const double> inner_derivs,
                           unsigned order) {
  if (order == 0 || order > kMaxExactCoefficientOrder) {
    throw DomainError("compose_derivatives: order must be in 1.." +
                      std::to_string(kMaxExactCoefficientOrder));
  }
  if (outer_derivs.size() < order || inner_derivs.size() < order) {
    throw DomainError("compose_derivatives: need " + std::to_string(order) +
                      " derivatives of each function");
  }
  double sum = 0.0;
  for (const Partition& tau : partitions(order)) {
    double term = static_cast<double>(fdb_coefficient(order, tau)) *
                  outer_derivs[tau.size() - 1];
    for (unsigned part : tau.parts()) term *= inner_derivs[part - 1];
    sum += term;
  }
  return sum;
}

}  // namespace thermoforge
