#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace thermoforge {

// An integer partition tau_1 >= tau_2 >= ... >= tau_q >= 1. The empty
// partition stands for 0.
class Partition {
 public:
  Partition() = default;
  // Throws DomainError unless parts are positive and non-increasing.
  explicit Partition(std::vector<unsigned> parts);

  const std::vector<unsigned>& parts() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }
  unsigned total() const noexcept;

  // (part size, multiplicity) pairs, largest part first.
  std::vector<std::pair<unsigned, unsigned>> multiplicities() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<unsigned> parts_;
};

inline constexpr unsigned kMaxPartitionedInteger = 64;

// Largest j for which every B_j^tau fits in 64 bits (Bell(25) < 2^64).
inline constexpr unsigned kMaxExactCoefficientOrder = 25;

// Every partition of j exactly once, in reverse-lexicographic order
// ([j], [j-1,1], ..., [1,...,1]). j = 0 yields the single empty partition.
// Throws SizeLimitError for j > kMaxPartitionedInteger.
std::vector<Partition> partitions(unsigned j);

// Number of ways to split a set of j labelled elements into unordered
// blocks with sizes tau: j! / (prod tau_i! * prod mult_m!).
// Throws DomainError if tau does not sum to j and SizeLimitError if the
// value does not fit in 64 bits.
std::uint64_t fdb_coefficient(unsigned j, const Partition& tau);

// order-th derivative of g(f(x)) by Faa di Bruno's formula.
// outer_derivs[k-1] = g^(k)(f(x)) and inner_derivs[k-1] = f^(k)(x) for
// k = 1..order. Throws DomainError if either list is shorter than order or
// order is 0 or above kMaxExactCoefficientOrder.
double compose_derivatives(std::span<const double> outer_derivs,
                           std::span<const double> inner_derivs,
                           unsigned order);

}  // namespace thermoforge
