#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sigclass/path.hpp"

using namespace sigclass;

TEST_SUITE_BEGIN("path");

TEST_CASE("interpolate_path keeps identical grids verbatim") {
  ChannelSeries a{0, {0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}};
  ChannelSeries b{1, {0.0, 0.5, 1.0}, {-1.0, 0.0, 1.0}};
  const auto path = interpolate_path({a, b}, 2);
  REQUIRE(path.num_vertices() == 3);
  CHECK(path.times() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(path.coord(1, 0) == 2.0);
  CHECK(path.coord(1, 1) == 0.0);
}

TEST_CASE("interpolate_path fills union grid by linear interpolation") {
  // A observed at {0, 1}, B at {0, 0.5, 1}; A's value at 0.5 must be the
  // midpoint of its endpoints.
  ChannelSeries a{0, {0.0, 1.0}, {0.0, 2.0}};
  ChannelSeries b{1, {0.0, 0.5, 1.0}, {5.0, 6.0, 7.0}};
  const auto path = interpolate_path({a, b}, 2);
  REQUIRE(path.num_vertices() == 3);
  CHECK(path.time(1) == 0.5);
  CHECK(path.coord(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(path.coord(1, 1) == 6.0);
}

TEST_CASE("interpolate_path extends constantly outside a channel's range") {
  ChannelSeries a{0, {0.0, 1.0}, {0.0, 2.0}};
  ChannelSeries b{1, {0.4, 0.6}, {8.0, 9.0}};
  const auto path = interpolate_path({a, b}, 2);
  CHECK(path.value_at(0.0, 1) == 8.0);
  CHECK(path.value_at(1.0, 1) == 9.0);
  CHECK(path.value_at(0.2, 1) == 8.0);
  for (std::size_t i = 0; i < path.num_vertices(); ++i)
    for (int c = 0; c < 2; ++c) CHECK(std::isfinite(path.coord(i, c)));
}

TEST_CASE("interpolate_path input validation") {
  CHECK_THROWS_AS(interpolate_path({}, 0), std::invalid_argument);
  ChannelSeries single{0, {0.0}, {1.0}};
  CHECK_THROWS_AS(interpolate_path({single}, 1), std::invalid_argument);
  ChannelSeries repeat{0, {0.0, 0.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(interpolate_path({repeat}, 1), std::invalid_argument);
  ChannelSeries nan{0, {0.0, 1.0}, {1.0, std::nan("")}};
  CHECK_THROWS_AS(interpolate_path({nan}, 1), std::invalid_argument);
  ChannelSeries ok{0, {0.0, 1.0}, {1.0, 2.0}};
  ChannelSeries dup{0, {0.0, 1.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(interpolate_path({ok, dup}, 2), std::invalid_argument);
  CHECK_THROWS_AS(interpolate_path({ok}, 2), std::invalid_argument);
}

TEST_CASE("time_augment appends the time stamps as the last coordinate") {
  PiecewiseLinearPath base({0.0, 1.0}, {5.0, 7.0}, 1);
  const auto aug = time_augment(base);
  REQUIRE(aug.dim() == 2);
  CHECK(aug.path().coord(0, 0) == 5.0);
  CHECK(aug.path().coord(0, 1) == 0.0);
  CHECK(aug.path().coord(1, 0) == 7.0);
  CHECK(aug.path().coord(1, 1) == 1.0);
}

TEST_CASE("time coordinate is strictly monotone and spans the domain") {
  PiecewiseLinearPath base({0.0, 0.25, 0.9, 2.0}, {1.0, 1.0, 1.0, 1.0}, 1);
  const auto aug = time_augment(base);
  const int last = aug.dim() - 1;
  double tv_time = 0.0;
  for (std::size_t i = 0; i + 1 < aug.path().num_vertices(); ++i) {
    const double step = aug.path().coord(i + 1, last) - aug.path().coord(i, last);
    CHECK(step > 0.0);
    tv_time += step;
  }
  CHECK(tv_time == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("total_variation of a constant path is zero") {
  PiecewiseLinearPath p({0.0, 1.0, 2.0}, {3.0, 3.0, 3.0}, 1);
  CHECK(total_variation(p) == 0.0);
}

TEST_CASE("total_variation sums Euclidean segment lengths") {
  // Single segment from (0,0) to (3,4): length 5.
  PiecewiseLinearPath p({0.0, 1.0}, {0.0, 0.0, 3.0, 4.0}, 2);
  CHECK(total_variation(p) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_SUITE_END();
