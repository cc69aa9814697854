#include <doctest.h>

#include "oracles.hpp"
#include "polar/errors.hpp"
#include "polar/probe.hpp"

using namespace polar;

namespace {

Eigen::MatrixXd gaussian(int r, int c, Rng& rng) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n01(rng);
  return m;
}

}  // namespace

TEST_CASE("forward agrees with the elementwise oracle") {
  Rng rng = make_rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const PolarProbe p = PolarProbe::random(4, 9, {"a", "b", "c"}, rng);
    const Eigen::MatrixXd h = gaussian(6, 9, rng);
    const auto out = forward(p, h);
    const auto want = oracle::forward(p.map, p.prototypes, h);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        CHECK(out.distances(i, j) == doctest::Approx(want.dist[i][j]).epsilon(1e-12));
        for (int r = 0; r < 3; ++r) CHECK(out.cosine(i, j, r) == doctest::Approx(want.cosine[i][j][r]).epsilon(1e-12));
      }
  }
}

TEST_CASE("distances are symmetric and cosines antisymmetric") {
  Rng rng = make_rng(2);
  const PolarProbe p = PolarProbe::random(5, 8, {"a", "b"}, rng);
  const auto out = forward(p, gaussian(7, 8, rng));
  for (int i = 0; i < 7; ++i) {
    CHECK(out.distances(i, i) == 0.0);
    for (int r = 0; r < 2; ++r) CHECK(out.cosine(i, i, r) == 0.0);
    for (int j = 0; j < 7; ++j) {
      CHECK(out.distances(i, j) == out.distances(j, i));
      for (int r = 0; r < 2; ++r) CHECK(out.cosine(i, j, r) == doctest::Approx(-out.cosine(j, i, r)));
    }
  }
}

TEST_CASE("scaling activations scales distances and leaves cosines unchanged") {
  Rng rng = make_rng(3);
  const PolarProbe p = PolarProbe::random(3, 6, {"a"}, rng);
  const Eigen::MatrixXd h = gaussian(5, 6, rng);
  const auto a = forward(p, h);
  const auto b = forward(p, (2.5 * h).eval());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      CHECK(b.distances(i, j) == doctest::Approx(2.5 * a.distances(i, j)));
      CHECK(b.cosine(i, j, 0) == doctest::Approx(a.cosine(i, j, 0)));
    }
}

TEST_CASE("coincident entities hit the cosine guard, not NaN") {
  Rng rng = make_rng(4);
  const PolarProbe p = PolarProbe::random(3, 4, {"a"}, rng);
  Eigen::MatrixXd h = gaussian(3, 4, rng);
  h.row(1) = h.row(0);
  const auto out = forward(p, h);
  CHECK(out.distances(0, 1) == 0.0);
  CHECK(out.cosine(0, 1, 0) == 0.0);
  CHECK(std::isfinite(out.cosine(0, 2, 0)));
}

TEST_CASE("width mismatch and initialisers") {
  Rng rng = make_rng(5);
  const PolarProbe p = PolarProbe::random(3, 4, {"a", "b"}, rng);
  CHECK_THROWS_AS(forward(p, Eigen::MatrixXd::Zero(3, 5)), DimensionError);
  CHECK(p.rank() == 3);
  CHECK(p.dim() == 4);
  for (int r = 0; r < 2; ++r) CHECK(p.prototypes.col(r).norm() == doctest::Approx(1.0));
  const PolarProbe id = PolarProbe::truncated_identity(3, 6, {"a"}, rng);
  CHECK(id.map.leftCols(3).isIdentity());
  CHECK(id.map.rightCols(3).isZero());
  const auto upper = forward(p, gaussian(4, 4, rng)).upper_distances();
  CHECK(upper.size() == 6);
}
