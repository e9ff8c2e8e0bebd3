#include <algorithm>
#include <random>

#include "doctest.h"
#include "fsens/lattice_map.hpp"
#include "oracles.hpp"

using namespace fsens;

namespace {

// (Delta^i tau)(A) = tau(A | {i}) - tau(A) as a full map, for composing
// single-index difference operators one at a time.
LatticeMap single_delta(const LatticeMap& tau, int input) {
  LatticeMap out(tau.dim());
  const std::uint32_t bit = std::uint32_t{1} << (input - 1);
  for (std::uint32_t a = 0; a < tau.size(); ++a)
    out.value(a) = tau.value(a | bit) - tau.value(a);
  return out;
}

}  // namespace

TEST_SUITE("subset_lattice") {

TEST_CASE("mask label, parse and table ordering") {
  SubsetMask s = SubsetMask::of(3, {1, 3});
  CHECK(s.label() == "{1,3}");
  CHECK(SubsetMask::parse(3, "{1,3}") == s);
  CHECK(SubsetMask::parse(3, "{}") == SubsetMask::empty(3));
  CHECK(SubsetMask::parse(5, "{ 2, 4 }") == SubsetMask::of(5, {2, 4}));
  CHECK(s.count() == 2);
  CHECK(s.complement() == SubsetMask::of(3, {2}));
  CHECK_THROWS_AS(SubsetMask::parse(3, "{4}"), std::invalid_argument);
  CHECK_THROWS_AS(SubsetMask::parse(3, "1,2"), std::invalid_argument);

  // Report rows: input 1 toggles slowest, so row 1 is {3} and row 4 is {1}.
  CHECK(SubsetMask::from_table_row(3, 0) == SubsetMask::empty(3));
  CHECK(SubsetMask::from_table_row(3, 1) == SubsetMask::of(3, {3}));
  CHECK(SubsetMask::from_table_row(3, 4) == SubsetMask::of(3, {1}));
  CHECK(SubsetMask::of(3, {2}).table_row() == 2);
  for (std::uint32_t row = 0; row < 8; ++row)
    CHECK(SubsetMask::from_table_row(3, row).table_row() == row);
}

TEST_CASE("delta single index is a plain difference") {
  std::mt19937_64 rng(7);
  LatticeMap tau = oracle::random_map(rng, 4);
  for (int i = 1; i <= 4; ++i) {
    SubsetMask b = SubsetMask::singleton(4, i);
    for (std::uint32_t a = 0; a < tau.size(); ++a) {
      if (a & b.bits()) continue;
      SubsetMask mask(4, a);
      CHECK(delta(tau, b, mask) ==
            doctest::Approx(tau.value(a | b.bits()) - tau.value(a)));
    }
  }
}

TEST_CASE("delta of the empty difference set is the map itself") {
  std::mt19937_64 rng(8);
  LatticeMap tau = oracle::random_map(rng, 3);
  for (std::uint32_t a = 0; a < tau.size(); ++a)
    CHECK(delta(tau, SubsetMask::empty(3), SubsetMask(3, a)) == tau.value(a));
}

TEST_CASE("delta on the indicator of the grand set") {
  // tau(C) = 1{C = {1,2,3}}, B = {1,2}, A = {3}: the four-term sum is
  // tau({1,2,3}) - tau({2,3}) - tau({1,3}) + tau({3}) = 1.
  LatticeMap tau = oracle::indicator_map(3, 0b111);
  double expect = oracle::naive_delta(tau, 0b011, 0b100);
  CHECK(expect == 1.0);
  CHECK(delta(tau, SubsetMask::of(3, {1, 2}), SubsetMask::of(3, {3})) ==
        expect);
}

TEST_CASE("delta rejects overlap and dimension mismatch") {
  LatticeMap tau(3);
  CHECK_THROWS_AS(delta(tau, SubsetMask::of(3, {1}), SubsetMask::of(3, {1, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(delta(tau, SubsetMask::of(2, {1}), SubsetMask::empty(3)),
                  std::invalid_argument);
}

TEST_CASE("delta equals every ordering of iterated single differences") {
  std::mt19937_64 rng(9);
  for (int d : {3, 5, 8}) {
    LatticeMap tau = oracle::random_map(rng, d);
    std::vector<int> inputs = {1, 2, d};
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    SubsetMask b = SubsetMask::empty(d);
    for (int i : inputs) b = b | SubsetMask::singleton(d, i);

    do {
      LatticeMap composed = tau;
      for (int i : inputs) composed = single_delta(composed, i);
      for (std::uint32_t a = 0; a < tau.size(); ++a) {
        if (a & b.bits()) continue;
        CHECK(nearly_equal(composed.value(a), delta(tau, b, SubsetMask(d, a)),
                           1e-12, 1e-12));
      }
    } while (std::next_permutation(inputs.begin(), inputs.end()));
  }
}

TEST_CASE("mobius transform of an additive map keeps only singletons") {
  const double v[4] = {0.5, -1.25, 2.0, 3.5};
  LatticeMap tau(4);
  for (std::uint32_t s = 0; s < tau.size(); ++s) {
    double sum = 0.0;
    for (int j = 0; j < 4; ++j)
      if (s & (1u << j)) sum += v[j];
    tau.value(s) = sum;
  }
  LatticeMap effects = mobius_transform(tau);
  for (std::uint32_t s = 0; s < effects.size(); ++s) {
    if (std::popcount(s) == 1) {
      int j = std::countr_zero(s);
      CHECK(effects.value(s) == doctest::Approx(v[j]));
    } else {
      CHECK(effects.value(s) == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("mobius transform worked example and zero map") {
  LatticeMap zero(3);
  for (std::uint32_t s = 0; s < 8; ++s)
    CHECK(mobius_transform(zero).value(s) == 0.0);

  LatticeMap tau(2, std::vector<double>{0, 1, 4, 9});
  LatticeMap effects = mobius_transform(tau);
  CHECK(effects.values() == std::vector<double>{0, 1, 4, 4});
}

TEST_CASE("mobius transform matches the naive subset sum") {
  std::mt19937_64 rng(10);
  for (int d : {2, 4, 6, 8}) {
    LatticeMap tau = oracle::random_map(rng, d, false);
    LatticeMap fast = mobius_transform(tau);
    LatticeMap slow = oracle::naive_mobius(tau);
    for (std::uint32_t s = 0; s < tau.size(); ++s)
      CHECK(nearly_equal(fast.value(s), slow.value(s), 1e-12, 1e-12));
  }
}

TEST_CASE("mobius inverse worked example and naive oracle") {
  LatticeMap effects(2, std::vector<double>{0, 1, 4, 4});
  CHECK(mobius_inverse(effects).values() == std::vector<double>{0, 1, 4, 9});

  std::mt19937_64 rng(11);
  LatticeMap any = oracle::random_map(rng, 6, false);
  LatticeMap fast = mobius_inverse(any);
  LatticeMap slow = oracle::naive_zeta(any);
  for (std::uint32_t s = 0; s < any.size(); ++s)
    CHECK(nearly_equal(fast.value(s), slow.value(s), 1e-12, 1e-12));
}

TEST_CASE("mobius roundtrip is the identity on 100 random maps") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dims(1, 10);
  for (int trial = 0; trial < 100; ++trial) {
    int d = dims(rng);
    LatticeMap tau = oracle::random_map(rng, d, false);
    LatticeMap back = mobius_inverse(mobius_transform(tau));
    for (std::uint32_t s = 0; s < tau.size(); ++s)
      CHECK(nearly_equal(back.value(s), tau.value(s), 1e-12, 1e-12));
  }
}

TEST_CASE("mobius roundtrip is exact on integer maps") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> values(-50, 50);
  LatticeMap tau(7);
  for (std::uint32_t s = 0; s < tau.size(); ++s) tau.value(s) = values(rng);
  LatticeMap back = mobius_inverse(mobius_transform(tau));
  CHECK(back.values() == tau.values());
}

TEST_CASE("dual worked examples") {
  CHECK(dual(LatticeMap(1, {0, 5})).values() == std::vector<double>{0, 5});
  CHECK(dual(LatticeMap(2, {0, 1, 4, 9})).values() ==
        std::vector<double>{0, 5, 8, 9});

  // Additive maps with tau(empty) = 0 are self-dual.
  LatticeMap tau(3);
  const double v[3] = {1.0, 4.0, 9.0};
  for (std::uint32_t s = 0; s < 8; ++s)
    for (int j = 0; j < 3; ++j)
      if (s & (1u << j)) tau.value(s) += v[j];
  CHECK(dual(tau).values() == tau.values());
}

TEST_CASE("dual is an involution and satisfies the boundary identity") {
  std::mt19937_64 rng(14);
  for (int d : {1, 3, 6}) {
    // Maps vanishing at the empty set, as every sensitivity map does; the
    // dual subtracts tau(empty) otherwise and is no longer an involution.
    LatticeMap tau = oracle::random_map(rng, d);
    LatticeMap back = dual(dual(tau));
    for (std::uint32_t s = 0; s < tau.size(); ++s)
      CHECK(nearly_equal(back.value(s), tau.value(s), 1e-12, 1e-12));

    LatticeMap star = dual(tau);
    const std::uint32_t full = static_cast<std::uint32_t>(tau.size()) - 1;
    CHECK(star.value(0) == 0.0);
    CHECK(star.value(full) == tau.value(full));
    for (std::uint32_t s = 0; s < tau.size(); ++s)
      CHECK(star.value(full) - star.value(s) ==
            doctest::Approx(tau.value(full ^ s)).epsilon(1e-12));
  }
}

TEST_CASE("conditional effect") {
  std::mt19937_64 rng(15);
  LatticeMap tau = oracle::random_map(rng, 3);  // tau(empty) = 0

  // Given nothing, the conditional effect is the map value itself.
  for (std::uint32_t b = 0; b < 8; ++b)
    CHECK(conditional_effect(tau, SubsetMask(3, b), SubsetMask::empty(3)) ==
          doctest::Approx(tau.value(b)));

  // B inside A contributes nothing new.
  CHECK(conditional_effect(tau, SubsetMask::of(3, {2}),
                           SubsetMask::of(3, {1, 2})) == 0.0);

  // tau(C) = |C|^2, B = {1}, A = {2,3}: 9 - 4 = 5.
  LatticeMap card(3);
  for (std::uint32_t s = 0; s < 8; ++s)
    card.value(s) = static_cast<double>(std::popcount(s) * std::popcount(s));
  CHECK(conditional_effect(card, SubsetMask::of(3, {1}),
                           SubsetMask::of(3, {2, 3})) == 5.0);
}

TEST_CASE("map axioms report") {
  LatticeMap good(2, {0, 0.5, 0.25, 1});
  CHECK(check_map_axioms(good).pass);

  LatticeMap bad_empty(2, {0.1, 0.5, 0.25, 1});
  CHECK_FALSE(check_map_axioms(bad_empty).pass);

  LatticeMap negative(2, {0, -0.5, 0.25, 1});
  MapAxiomReport rep = check_map_axioms(negative);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_value == -0.5);
  CHECK(rep.min_subset == 1);
  CHECK(check_map_axioms(negative, 0.6).pass);
}

TEST_CASE("lattice map rejects malformed construction") {
  CHECK_THROWS_AS(LatticeMap(3, std::vector<double>{1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeMap(0), std::invalid_argument);
  CHECK_THROWS_AS(LatticeMap(25), std::invalid_argument);
}

}  // TEST_SUITE
