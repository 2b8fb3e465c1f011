#include "thermoforge/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermoforge/error.hpp"

namespace thermoforge {

namespace {

void check_alphabet(std::size_t n) {
  if (n < 2) throw DomainError("alphabet size must be at least 2");
  if (n > kMaxAlphabet) {
    throw SizeLimitError("alphabet size " + std::to_string(n) +
                         " exceeds 2^16");
  }
}

// Every state reaches every other state, checked by forward and backward
// search from symbol 0.
bool strongly_connected(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const bool edge = forward ? a[u][v] != 0 : a[v][u] != 0;
        if (edge && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
  };
  return reach_all(true) && reach_all(false);
}

}  // namespace

SubshiftSpec::SubshiftSpec(std::size_t n) : n_(n) { check_alphabet(n); }

SubshiftSpec::SubshiftSpec(std::size_t n, TransitionMatrix transition)
    : n_(n), transition_(std::move(transition)) {
  check_alphabet(n);
  const auto& a = *transition_;
  if (a.size() != n) throw DomainError("transition matrix must be n x n");
  std::vector<char> col_used(n, 0);
  for (const auto& row : a) {
    if (row.size() != n) throw DomainError("transition matrix must be n x n");
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] > 1) throw DomainError("transition entries must be 0 or 1");
      if (row[j]) {
        any = true;
        col_used[j] = 1;
      }
    }
    if (!any) throw DomainError("transition matrix has an all-zero row");
  }
  if (std::find(col_used.begin(), col_used.end(), 0) != col_used.end()) {
    throw DomainError("transition matrix has an all-zero column");
  }
  irreducible_ = strongly_connected(a);
}

std::size_t table_size(std::size_t n, std::size_t window) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < window; ++i) {
    if (size > kMaxTableSize / n) {
      throw SizeLimitError("table size n^w exceeds 2^26");
    }
    size *= n;
  }
  return size;
}

CylinderPotential::CylinderPotential(SubshiftSpec space, std::size_t window,
                                     std::vector<double> values)
    : space_(std::move(space)), window_(window), values_(std::move(values)) {
  if (window_ == 0) throw DomainError("window must be at least 1");
  const std::size_t expected = table_size(space_.alphabet_size(), window_);
  if (values_.size() != expected) {
    throw DomainError("potential table has " + std::to_string(values_.size()) +
                      " values, expected n^w = " + std::to_string(expected));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("potential values must be finite");
  }
}

CylinderPotential CylinderPotential::level0(std::vector<double> values) {
  const std::size_t n = values.size();
  return CylinderPotential(SubshiftSpec(n), 1, std::move(values));
}

double CylinderPotential::value(std::span<const Symbol> word) const {
  if (word.size() != window_) {
    throw DomainError("word length must equal the potential window");
  }
  return values_[word_index(word, space_.alphabet_size())];
}

bool CylinderPotential::is_constant() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == values_.front(); });
}

double CylinderPotential::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double CylinderPotential::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

CylinderPotential CylinderPotential::shifted(double b) const {
  std::vector<double> v(values_);
  for (double& x : v) x += b;
  return CylinderPotential(space_, window_, std::move(v));
}

std::size_t word_index(std::span<const Symbol> word, std::size_t n) {
  std::size_t index = 0;
  for (Symbol s : word) {
    if (s >= n) {
      throw DomainError("symbol " + std::to_string(s) +
                        " outside alphabet of size " + std::to_string(n));
    }
    index = index * n + s;
  }
  return index;
}

std::vector<Symbol> index_to_word(std::size_t index, std::size_t n,
                                  std::size_t length) {
  std::vector<Symbol> word(length);
  for (std::size_t i = length; i-- > 0;) {
    word[i] = static_cast<Symbol>(index % n);
    index /= n;
  }
  if (index != 0) throw DomainError("index out of range for word length");
  return word;
}

BernoulliWeights equilibrium_weights(const CylinderPotential& potential,
                                     double t) {
  if (!potential.space().is_full_shift()) {
    throw DomainError(
        "equilibrium_weights: Bernoulli weights need the full shift");
  }
  if (potential.window() != 1) {
    throw DomainError("equilibrium_weights: window must be 1");
  }
  const auto c = potential.values();
  double top = t * c[0];
  for (double v : c) top = std::max(top, t * v);
  BernoulliWeights w;
  w.probabilities.resize(c.size());
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    w.probabilities[i] = std::exp(t * c[i] - top);
    total += w.probabilities[i];
  }
  for (double& p : w.probabilities) p /= total;
  return w;
}

}  // namespace thermoforge
