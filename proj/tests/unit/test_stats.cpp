#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polar/stats.hpp"

using namespace polar;

TEST_CASE("average ranks agree with counting ranks, ties included") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(2 + trial % 15);
    for (auto& v : x) v = static_cast<double>(std::uniform_int_distribution<int>(0, 5)(rng));
    const auto got = average_ranks(x);
    const auto want = oracle::counting_ranks(x);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]));
  }
}

TEST_CASE("tie tolerance chains near-equal neighbours") {
  const std::vector<double> x{1.0, 1.0 + 1e-9, 1.0 + 2e-9, 3.0};
  CHECK(average_ranks(x) == std::vector<double>{1, 2, 3, 4});
  CHECK(average_ranks(x, 1e-6) == std::vector<double>{2, 2, 2, 4});
}

TEST_CASE("spearman against the oracle and degenerate inputs") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(10), y(10);
    for (auto& v : x) v = n01(rng);
    for (auto& v : y) v = std::round(n01(rng));
    const auto got = spearman(x, y);
    REQUIRE(got);
    CHECK(*got == doctest::Approx(oracle::spearman(x, y)).epsilon(1e-12));
  }
  const std::vector<double> c(5, 2.0), z{1, 2, 3, 4, 5};
  CHECK_FALSE(spearman(c, z));
  CHECK_FALSE(pearson(z, c));
  CHECK(*spearman(z, z) == doctest::Approx(1.0));
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto m = mean_and_se(v);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.count == 4);
  CHECK(mean_and_se(std::vector<double>{}).count == 0);
}
