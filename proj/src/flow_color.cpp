#include "potts/flow_color.hpp"

#include "potts/error.hpp"
#include "potts/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace potts {

namespace {

std::uint16_t to_byte(double x) { return static_cast<std::uint16_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); }

} // namespace

RawImage colorize_flow(const VectorField &flow, std::optional<double> max_magnitude)
{
  if (flow.channels() != 2) {
    throw Error(Errc::InvalidArgument, "colorize_flow: expected a 2-channel field");
  }
  if (max_magnitude && !(*max_magnitude > 0.0)) {
    throw Error(Errc::InvalidArgument, "colorize_flow: max magnitude must be > 0");
  }
  double cap = max_magnitude.value_or(0.0);
  if (!max_magnitude) {
    for (std::size_t r = 0; r < flow.rows(); ++r) {
      for (std::size_t c = 0; c < flow.cols(); ++c) {
        if (!is_unknown_flow(flow.pixel(r, c))) {
          cap = std::max(cap, std::hypot(flow(r, c, 0), flow(r, c, 1)));
        }
      }
    }
  }

  RawImage out;
  out.rows = flow.rows();
  out.cols = flow.cols();
  out.channels = 3;
  out.maxval = 255;
  out.samples.assign(out.rows * out.cols * 3, 0);
  if (cap <= 0.0) {
    return out;
  }
  for (std::size_t r = 0; r < flow.rows(); ++r) {
    for (std::size_t c = 0; c < flow.cols(); ++c) {
      if (is_unknown_flow(flow.pixel(r, c))) {
        continue;
      }
      double const u = flow(r, c, 0);
      double const v = flow(r, c, 1);
      double const value = std::min(std::hypot(u, v) / cap, 1.0);
      double hue = std::atan2(v, u) * 180.0 / std::numbers::pi;
      if (hue < 0.0) {
        hue += 360.0;
      }
      if (hue >= 360.0) {
        hue -= 360.0;
      }
      // HSV -> RGB with saturation 1.
      double const sector = hue / 60.0;
      int const i = static_cast<int>(sector) % 6;
      double const f = sector - std::floor(sector);
      double const p = 0.0;
      double const q = value * (1.0 - f);
      double const t = value * f;
      double red = 0.0;
      double green = 0.0;
      double blue = 0.0;
      switch (i) {
      case 0: red = value; green = t; blue = p; break;
      case 1: red = q; green = value; blue = p; break;
      case 2: red = p; green = value; blue = t; break;
      case 3: red = p; green = q; blue = value; break;
      case 4: red = t; green = p; blue = value; break;
      default: red = value; green = p; blue = q; break;
      }
      std::size_t const base = (r * out.cols + c) * 3;
      out.samples[base] = to_byte(red);
      out.samples[base + 1] = to_byte(green);
      out.samples[base + 2] = to_byte(blue);
    }
  }
  return out;
}

} // namespace potts
