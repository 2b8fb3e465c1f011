#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace thermoforge {

using Symbol = std::uint32_t;

// Row-major n x n matrix of 0/1 allowed transitions.
using TransitionMatrix = std::vector<std::vector<std::uint8_t>>;

inline constexpr std::size_t kMaxAlphabet = std::size_t{1} << 16;
inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

// Shift space over {0, ..., n-1}: the full shift, or a subshift of finite
// type when a transition matrix is given.
class SubshiftSpec {
 public:
  explicit SubshiftSpec(std::size_t n);
  SubshiftSpec(std::size_t n, TransitionMatrix transition);

  std::size_t alphabet_size() const noexcept { return n_; }
  bool is_full_shift() const noexcept { return !transition_.has_value(); }
  const std::optional<TransitionMatrix>& transition() const noexcept {
    return transition_;
  }
  bool irreducible() const noexcept { return irreducible_; }
  bool allows(Symbol from, Symbol to) const noexcept {
    return !transition_ || (*transition_)[from][to] != 0;
  }

 private:
  std::size_t n_;
  std::optional<TransitionMatrix> transition_;
  bool irreducible_ = true;
};

// phi(x) = values[word_index(x_0 ... x_{w-1})]. A two-sided window of depth
// k is stored as a one-sided window of length 2k+1.
class CylinderPotential {
 public:
  CylinderPotential(SubshiftSpec space, std::size_t window,
                    std::vector<double> values);

  // Level-0 potential on the full shift with one value per symbol.
  static CylinderPotential level0(std::vector<double> values);

  const SubshiftSpec& space() const noexcept { return space_; }
  std::size_t alphabet_size() const noexcept { return space_.alphabet_size(); }
  std::size_t window() const noexcept { return window_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::span<const Symbol> word) const;

  bool is_constant() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  // Same potential with b added to every value.
  CylinderPotential shifted(double b) const;

 private:
  SubshiftSpec space_;
  std::size_t window_;
  std::vector<double> values_;
};

struct BernoulliWeights {
  std::vector<double> probabilities;
};

// Base-n value of a word, first symbol most significant.
std::size_t word_index(std::span<const Symbol> word, std::size_t n);
std::vector<Symbol> index_to_word(std::size_t index, std::size_t n,
                                  std::size_t length);

// n^w, or SizeLimitError when it exceeds kMaxTableSize.
std::size_t table_size(std::size_t n, std::size_t window);

// Equilibrium measure of t*phi for a level-0 full-shift potential: the
// Bernoulli measure with p_i proportional to exp(t c_i).
BernoulliWeights equilibrium_weights(const CylinderPotential& potential,
                                     double t);

}  // namespace thermoforge
