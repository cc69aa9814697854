#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polar/soft_rank.hpp"
#include "polar/stats.hpp"

using namespace polar;

namespace {

std::vector<double> gaussian(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> n01;
  std::vector<double> x(m);
  for (auto& v : x) v = n01(rng);
  return x;
}

}  // namespace

TEST_CASE("soft ranks match the plain-loop oracle") {
  std::mt19937_64 rng(1);
  for (double anneal : {1.0, 0.7}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto x = gaussian(rng, 3 + trial);
        const auto got = soft_ranks(x, {eps, 50, 0.0, anneal});
        const auto want = oracle::soft_ranks(x, eps, 50, anneal);
        CHECK(got.iterations == 50);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(got.ranks[i] == doctest::Approx(want[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("soft spearman approaches exact spearman as epsilon shrinks") {
  std::mt19937_64 rng(2);
  double worst_rho = 0.0, rank_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = gaussian(rng, 10);
    const auto y = gaussian(rng, 10);
    const SoftRankOptions opt{1e-3, 200, 1e-6};
    const auto soft = soft_ranks(x, opt);
    const auto hard = average_ranks(x);
    for (std::size_t i = 0; i < x.size(); ++i) rank_err += std::abs(soft.ranks[i] - hard[i]) / 2000.0;
    worst_rho = std::max(worst_rho, std::abs(soft_spearman(x, y, opt).value - *spearman(x, y)));
  }
  CHECK(worst_rho <= 0.02);
  CHECK(rank_err <= 0.01);
}

TEST_CASE("annealing reaches the fixed point of plain iterations") {
  std::mt19937_64 rng(7);
  const auto x = gaussian(rng, 6);
  const auto plain = soft_ranks(x, {0.5, 20000, 1e-12, 1.0});
  const auto fast = soft_ranks(x, {0.5, 20000, 1e-12, 0.7});
  CHECK(fast.iterations < plain.iterations);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fast.ranks[i] == doctest::Approx(plain.ranks[i]).epsilon(1e-8));
}

TEST_CASE("soft ranks are a permutation-equivariant, rank-preserving map") {
  std::mt19937_64 rng(3);
  const auto x = gaussian(rng, 12);
  const auto r = soft_ranks(x, {0.1, 1000, 1e-10}).ranks;
  double total = 0.0;
  for (double v : r) total += v;
  CHECK(total == doctest::Approx(12.0 * 13.0 / 2.0).epsilon(1e-3));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[i] < x[j]) CHECK(r[i] < r[j]);
  std::vector<double> y = x;
  std::reverse(y.begin(), y.end());
  const auto ry = soft_ranks(y, {0.1, 1000, 1e-10}).ranks;
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(ry[x.size() - 1 - i] == doctest::Approx(r[i]).epsilon(1e-12));
}

TEST_CASE("degenerate inputs") {
  const std::vector<double> c(6, 3.0), y{1, 2, 3, 4, 5, 6};
  const auto r = soft_ranks(c, {0.1, 100, 1e-6});
  CHECK(r.degenerate);
  for (double v : r.ranks) CHECK(v == doctest::Approx(3.5));
  const auto s = soft_spearman(c, y, {0.1, 100, 1e-6}, true);
  CHECK(s.degenerate);
  CHECK(s.value == 0.0);
  for (double g : s.grad) CHECK(g == 0.0);
  const auto s2 = soft_spearman(y, c, {0.1, 100, 1e-6}, true);
  CHECK(s2.degenerate);
}

TEST_CASE("soft spearman matches the oracle and its gradient matches finite differences") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = gaussian(rng, 10);
    auto y = gaussian(rng, 10);
    for (auto& v : y) v = std::round(v * 2);
    const SoftRankOptions opt{0.1, 30, 0.0};
    const auto s = soft_spearman(x, y, opt, true);
    CHECK(s.value == doctest::Approx(oracle::soft_spearman(x, y, 0.1, 30)).epsilon(1e-10));
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd =
          (oracle::soft_spearman(xp, y, 0.1, 30) - oracle::soft_spearman(xm, y, 0.1, 30)) / (2 * h);
      CHECK(s.grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
    }
  }
}

TEST_CASE("early stopping honours the tolerance") {
  std::mt19937_64 rng(6);
  const auto x = gaussian(rng, 8);
  const auto r = soft_ranks(x, {1.0, 1000, 1e-6});
  CHECK(r.iterations < 1000);
  const auto full = soft_ranks(x, {1.0, 1000, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(r.ranks[i] == doctest::Approx(full.ranks[i]).epsilon(1e-5));
}
