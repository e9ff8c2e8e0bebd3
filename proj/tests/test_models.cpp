#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "fsens/estimators.hpp"
#include "fsens/models.hpp"
#include "oracles.hpp"

using namespace fsens;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Inverse-CDF draw functions for the independent MC oracle.
struct StdNormalDraw {
  double operator()(int, std::mt19937_64& rng) const {
    std::normal_distribution<double> n(0, 1);
    return n(rng);
  }
};

struct PiUniformDraw {
  double operator()(int, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return u(rng);
  }
};

}  // namespace

TEST_SUITE("models") {

TEST_CASE("model evaluation") {
  Model lin = Model::linear({1, 2, 3});
  std::vector<double> ones = {1, 1, 1};
  CHECK(lin(ones) == 6.0);

  // x1 enters squared, so the sign of x1 cannot matter.
  Model sq = Model::square_plus();
  std::vector<double> xm = {-1, 0.3}, xp = {1, 0.3};
  CHECK(sq(xm) == doctest::Approx(1.3));
  CHECK(sq(xp) == doctest::Approx(1.3));

  Model ish = Model::ishigami(7, 0.1);
  std::vector<double> x = {kPi / 2, 0, 0};
  CHECK(ish(x) == doctest::Approx(1.0));
  std::vector<double> x2 = {0, kPi / 2, 0};
  CHECK(ish(x2) == doctest::Approx(7.0));

  Model prod = Model::product(4);
  std::vector<double> p = {2, 3, -1, 0.5};
  CHECK(prod(p) == doctest::Approx(-3.0));

  Model poly = Model::polynomial(2, {{2.5, {1, 2}}, {-1.0, {0, 0}}});
  std::vector<double> q = {2, 3};
  CHECK(poly(q) == doctest::Approx(2.5 * 2 * 9 - 1.0));
}

TEST_CASE("model input validation") {
  Model lin = Model::linear({1, 2});
  std::vector<double> wrong = {1, 2, 3};
  CHECK_THROWS_AS(lin(wrong), std::invalid_argument);
  std::vector<double> inf = {1, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(lin(inf), std::domain_error);
  CHECK_THROWS_AS(Model::polynomial(2, {{1.0, {1}}}), std::invalid_argument);
  CHECK_THROWS_AS(Model::polynomial(2, {{1.0, {1, -2}}}),
                  std::invalid_argument);

  // Overflowing output is reported, not returned.
  Model big = Model::polynomial(1, {{1e308, {2}}});
  std::vector<double> two = {2.0};
  CHECK_THROWS_AS(big(two), std::domain_error);
}

TEST_CASE("linear closed form matches the double-loop MC oracle") {
  Model lin = Model::linear({1, 2, 3});
  InputDistribution dist = InputDistribution::independent(
      {Marginal::normal(0, 1), Marginal::normal(0, 1), Marginal::normal(0, 1)});
  std::mt19937_64 rng(61);
  for (std::uint32_t a = 1; a < 8; ++a) {
    double exact = exact_tau(lin, dist, Divergence::squared_half(),
                             SubsetMask(3, a));
    double mc = oracle::mc_conditional_variance(lin, StdNormalDraw{}, a, 400,
                                                400, rng);
    // Monte Carlo comparison at roughly 3 sigma of the outer average.
    CHECK(mc == doctest::Approx(exact).epsilon(0.1));
  }
}

TEST_CASE("ishigami closed form matches the double-loop MC oracle") {
  Model ish = Model::ishigami(7, 0.1);
  InputDistribution dist = InputDistribution::independent(
      {Marginal::uniform(-kPi, kPi), Marginal::uniform(-kPi, kPi),
       Marginal::uniform(-kPi, kPi)});
  std::mt19937_64 rng(62);
  for (std::uint32_t a = 1; a < 8; ++a) {
    double exact = exact_tau(ish, dist, Divergence::squared_half(),
                             SubsetMask(3, a));
    double mc = oracle::mc_conditional_variance(ish, PiUniformDraw{}, a, 600,
                                                600, rng);
    CHECK(mc == doctest::Approx(exact).epsilon(0.08));
  }
}

TEST_CASE("ishigami variance components have their textbook values") {
  Model ish = Model::ishigami(7, 0.1);
  InputDistribution dist = InputDistribution::independent(
      {Marginal::uniform(-kPi, kPi), Marginal::uniform(-kPi, kPi),
       Marginal::uniform(-kPi, kPi)});
  Divergence sq = Divergence::squared_half();
  CHECK(exact_tau(ish, dist, sq, SubsetMask::full(3)) ==
        doctest::Approx(13.8446).epsilon(1e-4));
  // tau({3}) is exactly the {1,3} interaction component.
  CHECK(exact_tau(ish, dist, sq, SubsetMask::of(3, {3})) ==
        doctest::Approx(3.3737).epsilon(1e-4));
  CHECK(exact_tau(ish, dist, sq, SubsetMask::of(3, {2})) ==
        doctest::Approx(6.125));
}

TEST_CASE("product and square_plus closed forms match the MC oracle") {
  std::mt19937_64 rng(63);
  Model prod = Model::product(3);
  InputDistribution norm3 = InputDistribution::independent(
      {Marginal::normal(0, 1), Marginal::normal(0, 1), Marginal::normal(0, 1)});
  for (std::uint32_t a = 1; a < 8; ++a) {
    double exact = exact_tau(prod, norm3, Divergence::squared_half(),
                             SubsetMask(3, a));
    double mc = oracle::mc_conditional_variance(prod, StdNormalDraw{}, a, 800,
                                                800, rng);
    CHECK(mc == doctest::Approx(exact).epsilon(0.15));
  }

  Model sq = Model::square_plus();
  InputDistribution norm2 = InputDistribution::independent(
      {Marginal::normal(0, 1), Marginal::normal(0, 1)});
  CHECK(exact_tau(sq, norm2, Divergence::squared_half(),
                  SubsetMask::of(2, {1})) == doctest::Approx(2.0));
  CHECK(exact_tau(sq, norm2, Divergence::squared_half(),
                  SubsetMask::of(2, {2})) == doctest::Approx(1.0));
  CHECK(exact_tau(sq, norm2, Divergence::squared_half(),
                  SubsetMask::full(2)) == doctest::Approx(3.0));

  // The sign-symmetric two-point first input makes x1 irrelevant.
  InputDistribution pm = InputDistribution::independent(
      {Marginal::discrete({-1, 1}, {0.5, 0.5}), Marginal::normal(0, 1)});
  CHECK(exact_tau(sq, pm, Divergence::squared_half(), SubsetMask::of(2, {1})) ==
        doctest::Approx(0.0));
  CHECK(exact_tau(sq, pm, Divergence::squared_half(), SubsetMask::full(2)) ==
        doctest::Approx(1.0));
}

}  // TEST_SUITE
