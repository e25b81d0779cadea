#include "potts/error.hpp"
#include "potts/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace potts;

TEST_CASE("disparity metrics")
{
  VectorField gt(4, 4, 1);
  for (std::size_t k = 0; k < 16; ++k) {
    gt.values()[k] = static_cast<double>(k % 5);
  }
  DisparityMetrics const exact = disparity_metrics(gt, gt);
  CHECK(exact.bad_pixel_rate == 0.0);
  CHECK(exact.mean_abs_error == 0.0);
  CHECK(exact.evaluated == 16);

  VectorField shifted = gt;
  for (double &v : shifted.values()) {
    v += 2.0;
  }
  DisparityMetrics const off = disparity_metrics(shifted, gt, 1.0);
  CHECK(off.bad_pixel_rate == 1.0);
  CHECK(off.mean_abs_error == 2.0);

  VectorField half = gt;
  for (std::size_t k = 0; k < 8; ++k) {
    half.values()[k] += 3.0;
  }
  DisparityMetrics const mixed = disparity_metrics(half, gt, 1.0);
  CHECK(mixed.bad_pixel_rate == 0.5);
  CHECK(mixed.mean_abs_error == 1.5);
}

TEST_CASE("unknown ground truth and masks are excluded")
{
  VectorField const u(1, 4, 1, {1.0, 1.0, 1.0, 1.0});
  VectorField const gt(1, 4, 1, {1.0, 1e9, 5.0, 1.0});
  DisparityMetrics const m = disparity_metrics(u, gt, 1.0);
  CHECK(m.evaluated == 3);
  CHECK(m.bad_pixel_rate == doctest::Approx(1.0 / 3.0));

  std::vector<std::uint8_t> const mask{1, 1, 0, 1};
  DisparityMetrics const masked = disparity_metrics(u, gt, 1.0, mask);
  CHECK(masked.evaluated == 2);
  CHECK(masked.bad_pixel_rate == 0.0);

  CHECK(is_unknown(std::numeric_limits<double>::quiet_NaN()));
  CHECK(is_unknown(-2e9));
  CHECK_FALSE(is_unknown(1e8));
  CHECK_THROWS_AS(disparity_metrics(u, VectorField(1, 3, 1), 1.0), Error);
  CHECK_THROWS_AS(disparity_metrics(u, gt, 1.0, std::vector<std::uint8_t>{1}), Error);
}

TEST_CASE("flow metrics")
{
  VectorField gt(3, 3, 2);
  for (std::size_t k = 0; k < gt.values().size(); ++k) {
    gt.values()[k] = 0.5 * static_cast<double>(k % 4) - 0.7;
  }
  FlowMetrics const exact = flow_metrics(gt, gt);
  CHECK(exact.average_endpoint_error == 0.0);
  CHECK(exact.average_angular_error == doctest::Approx(0.0));

  VectorField moved = gt;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      moved(r, c, 0) += 1.0;
    }
  }
  CHECK(flow_metrics(moved, gt).average_endpoint_error == doctest::Approx(1.0));

  FlowMetrics const single = flow_metrics(VectorField(1, 1, 2, {1.0, 0.0}), VectorField(1, 1, 2, {0.0, 1.0}));
  CHECK(single.average_endpoint_error == doctest::Approx(std::sqrt(2.0)));
  // (1,0,1) and (0,1,1): cos = 1/2.
  CHECK(single.average_angular_error == doctest::Approx(60.0));

  VectorField const unknown(1, 2, 2, {0.0, 0.0, 1e9, 0.0});
  CHECK(flow_metrics(VectorField(1, 2, 2), unknown).evaluated == 1);
}

TEST_CASE("segment counting")
{
  CHECK(count_segments(VectorField(5, 5, 1, 2.0)) == 1);

  VectorField checker(2, 2, 1, {0.0, 1.0, 1.0, 0.0});
  CHECK(count_segments(checker) == 4);
  CHECK(count_distinct(checker) == 2);

  VectorField blocks(4, 6, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 3; c < 6; ++c) {
      blocks(r, c, 1) = 1.0;
    }
  }
  CHECK(count_segments(blocks) == 2);
  blocks(0, 0, 0) = 1e-4;
  CHECK(count_segments(blocks) == 3);
  CHECK(count_segments(blocks, 1e-3) == 2);
  CHECK(count_distinct(blocks, 1e-3) == 2);
  CHECK(count_distinct(blocks, 0.0, 2) == 2);

  std::vector<std::uint8_t> mask(24, 0);
  mask[5] = 1;
  CHECK(count_distinct(blocks, 0.0, 100, mask) == 1);
}
