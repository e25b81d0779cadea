#include "potts/metrics.hpp"

#include "potts/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace potts {

bool is_unknown(double value) { return !std::isfinite(value) || std::abs(value) >= 1e9; }

bool is_unknown_flow(std::span<const double> pixel)
{
  return std::any_of(pixel.begin(), pixel.end(), [](double v) { return is_unknown(v); });
}

namespace {

void check_pair(const VectorField &u, const VectorField &gt, std::size_t channels, std::span<const std::uint8_t> mask)
{
  if (!u.same_shape(gt) || u.channels() != channels) {
    throw Error(Errc::ShapeMismatch, "metrics: result and ground truth differ in shape");
  }
  if (!mask.empty() && mask.size() != u.pixels()) {
    throw Error(Errc::ShapeMismatch, "metrics: mask size does not match the grid");
  }
}

bool selected(std::span<const std::uint8_t> mask, std::size_t k) { return mask.empty() || mask[k] != 0; }

} // namespace

DisparityMetrics disparity_metrics(const VectorField &u, const VectorField &gt, double tau,
                                   std::span<const std::uint8_t> mask)
{
  check_pair(u, gt, 1, mask);
  DisparityMetrics m;
  std::size_t bad = 0;
  double abs_sum = 0.0;
  for (std::size_t k = 0; k < u.pixels(); ++k) {
    double const truth = gt.values()[k];
    if (!selected(mask, k) || is_unknown(truth)) {
      continue;
    }
    double const err = std::abs(u.values()[k] - truth);
    abs_sum += err;
    bad += err > tau ? 1 : 0;
    ++m.evaluated;
  }
  if (m.evaluated > 0) {
    m.bad_pixel_rate = static_cast<double>(bad) / static_cast<double>(m.evaluated);
    m.mean_abs_error = abs_sum / static_cast<double>(m.evaluated);
  }
  return m;
}

FlowMetrics flow_metrics(const VectorField &u, const VectorField &gt, std::span<const std::uint8_t> mask)
{
  check_pair(u, gt, 2, mask);
  FlowMetrics m;
  double epe_sum = 0.0;
  double angle_sum = 0.0;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    for (std::size_t c = 0; c < u.cols(); ++c) {
      std::size_t const k = r * u.cols() + c;
      if (!selected(mask, k) || is_unknown_flow(gt.pixel(r, c))) {
        continue;
      }
      double const du = u(r, c, 0) - gt(r, c, 0);
      double const dv = u(r, c, 1) - gt(r, c, 1);
      epe_sum += std::hypot(du, dv);
      double const dot = u(r, c, 0) * gt(r, c, 0) + u(r, c, 1) * gt(r, c, 1) + 1.0;
      double const nu = std::sqrt(u(r, c, 0) * u(r, c, 0) + u(r, c, 1) * u(r, c, 1) + 1.0);
      double const ng = std::sqrt(gt(r, c, 0) * gt(r, c, 0) + gt(r, c, 1) * gt(r, c, 1) + 1.0);
      angle_sum += std::acos(std::clamp(dot / (nu * ng), -1.0, 1.0)) * 180.0 / std::numbers::pi;
      ++m.evaluated;
    }
  }
  if (m.evaluated > 0) {
    m.average_endpoint_error = epe_sum / static_cast<double>(m.evaluated);
    m.average_angular_error = angle_sum / static_cast<double>(m.evaluated);
  }
  return m;
}

namespace {

bool close(std::span<const double> a, std::span<const double> b, double tol)
{
  for (std::size_t ch = 0; ch < a.size(); ++ch) {
    if (!(std::abs(a[ch] - b[ch]) <= tol)) {
      return false;
    }
  }
  return true;
}

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t k)
{
  while (parent[k] != k) {
    parent[k] = parent[parent[k]];
    k = parent[k];
  }
  return k;
}

} // namespace

std::size_t count_segments(const VectorField &field, double tol)
{
  std::size_t const rows = field.rows();
  std::size_t const cols = field.cols();
  std::vector<std::size_t> parent(rows * cols);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (r + 1 < rows && close(field.pixel(r, c), field.pixel(r + 1, c), tol)) {
        unite(r * cols + c, (r + 1) * cols + c);
      }
      if (c + 1 < cols && close(field.pixel(r, c), field.pixel(r, c + 1), tol)) {
        unite(r * cols + c, r * cols + c + 1);
      }
    }
  }
  std::size_t count = 0;
  for (std::size_t k = 0; k < parent.size(); ++k) {
    count += find_root(parent, k) == k ? 1 : 0;
  }
  return count;
}

std::size_t count_distinct(const VectorField &field, double tol, std::size_t limit, std::span<const std::uint8_t> mask)
{
  if (!mask.empty() && mask.size() != field.pixels()) {
    throw Error(Errc::ShapeMismatch, "count_distinct: mask size does not match the grid");
  }
  std::vector<std::size_t> representatives;
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      std::size_t const k = r * field.cols() + c;
      if (!selected(mask, k)) {
        continue;
      }
      auto const px = field.pixel(r, c);
      bool const known = std::any_of(representatives.begin(), representatives.end(), [&](std::size_t rep) {
        return close(px, field.pixel(rep / field.cols(), rep % field.cols()), tol);
      });
      if (!known) {
        representatives.push_back(k);
        if (representatives.size() >= limit) {
          return representatives.size();
        }
      }
    }
  }
  return representatives.size();
}

} // namespace potts
