#include <doctest.h>

#include <cmath>

#include "thermoforge/error.hpp"
#include "thermoforge/symbolic.hpp"

using namespace thermoforge;

TEST_SUITE("symbolic") {

TEST_CASE("subshift validation") {
  CHECK_THROWS_AS(SubshiftSpec(1), DomainError);
  CHECK_THROWS_AS(SubshiftSpec(kMaxAlphabet + 1), SizeLimitError);
  CHECK_THROWS_AS(SubshiftSpec(2, {{1, 1}}), DomainError);
  CHECK_THROWS_AS(SubshiftSpec(2, {{1, 1}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(SubshiftSpec(2, {{1, 0}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(SubshiftSpec(2, {{1, 2}, {1, 0}}), DomainError);
}

TEST_CASE("irreducibility") {
  CHECK(SubshiftSpec(3).irreducible());
  CHECK(SubshiftSpec(2, {{1, 1}, {1, 0}}).irreducible());
  CHECK_FALSE(SubshiftSpec(2, {{1, 1}, {0, 1}}).irreducible());
  // A 3-cycle is irreducible but periodic.
  CHECK(SubshiftSpec(3, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}).irreducible());
  const SubshiftSpec golden(2, {{1, 1}, {1, 0}});
  CHECK(golden.allows(0, 1));
  CHECK_FALSE(golden.allows(1, 1));
  CHECK_FALSE(golden.is_full_shift());
}

TEST_CASE("word indexing round trip") {
  for (std::size_t n : {2u, 3u, 7u}) {
    for (std::size_t len : {1u, 3u, 4u}) {
      const std::size_t size = table_size(n, len);
      CHECK(size == static_cast<std::size_t>(std::pow(n, len)));
      for (std::size_t idx = 0; idx < size; ++idx) {
        const auto w = index_to_word(idx, n, len);
        CHECK(word_index(w, n) == idx);
      }
    }
  }
  const std::vector<Symbol> w{1, 0, 2};
  CHECK(word_index(w, 3) == 1 * 9 + 0 * 3 + 2);
  CHECK_THROWS_AS(table_size(2, 27), SizeLimitError);
}

TEST_CASE("cylinder potential lookups") {
  const CylinderPotential pot(SubshiftSpec(2), 2, {0.0, 1.0, 2.0, 3.0});
  const std::vector<Symbol> w10{1, 0};
  CHECK(pot.value(w10) == 2.0);
  CHECK(pot.min_value() == 0.0);
  CHECK(pot.max_value() == 3.0);
  CHECK_FALSE(pot.is_constant());
  CHECK(pot.shifted(-1.0).value(w10) == 1.0);
  const std::vector<Symbol> short_word{1};
  CHECK_THROWS_AS(pot.value(short_word), DomainError);
  const std::vector<Symbol> bad{1, 2};
  CHECK_THROWS_AS(pot.value(bad), DomainError);
  CHECK_THROWS_AS(CylinderPotential(SubshiftSpec(2), 2, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(CylinderPotential(SubshiftSpec(2), 0, {}), DomainError);
  CHECK_THROWS_AS(CylinderPotential::level0({0.0, NAN}), DomainError);
  CHECK(CylinderPotential::level0({4.0, 4.0, 4.0}).is_constant());
}

TEST_CASE("equilibrium weights are normalized Gibbs weights") {
  const auto pot = CylinderPotential::level0({0.0, std::log(3.0), -1.0});
  const auto w = equilibrium_weights(pot, 1.0);
  double sum = 0.0;
  for (double p : w.probabilities) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.probabilities[1] / w.probabilities[0] == doctest::Approx(3.0));
  CHECK(w.probabilities[2] / w.probabilities[0] ==
        doctest::Approx(std::exp(-1.0)));
  // Large values must not overflow.
  const auto big = equilibrium_weights(CylinderPotential::level0({1000.0, 1001.0}), 1.0);
  CHECK(big.probabilities[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  CHECK_THROWS_AS(
      equilibrium_weights(CylinderPotential(SubshiftSpec(2), 2, {0, 1, 2, 3}), 1.0),
      DomainError);
}

}
