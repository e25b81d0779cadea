#include "potts/grid.hpp"

#include "potts/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace potts {

const char *to_string(Errc code)
{
  switch (code) {
  case Errc::InvalidArgument: return "InvalidArgument";
  case Errc::ShapeMismatch: return "ShapeMismatch";
  case Errc::LengthMismatch: return "LengthMismatch";
  case Errc::LengthCapExceeded: return "LengthCapExceeded";
  case Errc::OutOfGrid: return "OutOfGrid";
  case Errc::EmptySearch: return "EmptySearch";
  case Errc::BoxFlowUnsupported: return "BoxFlowUnsupported";
  case Errc::NonfinitePixel: return "NonfinitePixel";
  case Errc::InvariantViolation: return "InvariantViolation";
  case Errc::UnsupportedFormat: return "UnsupportedFormat";
  case Errc::CorruptHeader: return "CorruptHeader";
  case Errc::BadMagic: return "BadMagic";
  case Errc::SizeMismatch: return "SizeMismatch";
  case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

bool finite_range(std::span<const double> values)
{
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

ScalarImage::ScalarImage(std::size_t rows, std::size_t cols, double fill)
  : rows_(rows)
  , cols_(cols)
  , values_(rows * cols, fill)
{
}

ScalarImage::ScalarImage(std::size_t rows, std::size_t cols, std::vector<double> values)
  : rows_(rows)
  , cols_(cols)
  , values_(std::move(values))
{
  if (values_.size() != rows * cols) {
    throw Error(Errc::InvalidArgument, "ScalarImage: expected " + std::to_string(rows * cols) +
                                         " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite()) {
    throw Error(Errc::NonfinitePixel, "ScalarImage: non-finite pixel value");
  }
}

bool ScalarImage::all_finite() const noexcept { return finite_range(values_); }

VectorField::VectorField(std::size_t rows, std::size_t cols, std::size_t channels, double fill)
  : rows_(rows)
  , cols_(cols)
  , channels_(channels)
  , values_(rows * cols * channels, fill)
{
}

VectorField::VectorField(std::size_t rows, std::size_t cols, std::size_t channels, std::vector<double> values)
  : rows_(rows)
  , cols_(cols)
  , channels_(channels)
  , values_(std::move(values))
{
  if (values_.size() != rows * cols * channels) {
    throw Error(Errc::InvalidArgument, "VectorField: expected " + std::to_string(rows * cols * channels) +
                                         " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite()) {
    throw Error(Errc::NonfinitePixel, "VectorField: non-finite value");
  }
}

bool VectorField::all_finite() const noexcept { return finite_range(values_); }

VectorField as_field(const ScalarImage &image)
{
  VectorField out(image.rows(), image.cols(), 1);
  std::copy(image.values().begin(), image.values().end(), out.values().begin());
  return out;
}

ScalarImage channel_image(const VectorField &field, std::size_t channel)
{
  if (channel >= field.channels()) {
    throw Error(Errc::InvalidArgument, "channel_image: channel out of range");
  }
  ScalarImage out(field.rows(), field.cols());
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      out(r, c) = field(r, c, channel);
    }
  }
  return out;
}

VectorField forward_diff_v(const VectorField &field)
{
  VectorField out(field.rows(), field.cols(), field.channels());
  for (std::size_t r = 0; r + 1 < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      for (std::size_t ch = 0; ch < field.channels(); ++ch) {
        out(r, c, ch) = field(r + 1, c, ch) - field(r, c, ch);
      }
    }
  }
  return out;
}

VectorField forward_diff_h(const VectorField &field)
{
  VectorField out(field.rows(), field.cols(), field.channels());
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c + 1 < field.cols(); ++c) {
      for (std::size_t ch = 0; ch < field.channels(); ++ch) {
        out(r, c, ch) = field(r, c + 1, ch) - field(r, c, ch);
      }
    }
  }
  return out;
}

std::size_t grouped_l0(const VectorField &field)
{
  std::size_t count = 0;
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      auto px = field.pixel(r, c);
      if (std::any_of(px.begin(), px.end(), [](double v) { return v != 0.0; })) {
        ++count;
      }
    }
  }
  return count;
}

namespace {

bool pixels_differ(std::span<const double> a, std::span<const double> b)
{
  for (std::size_t ch = 0; ch < a.size(); ++ch) {
    if (a[ch] != b[ch]) {
      return true;
    }
  }
  return false;
}

} // namespace

std::size_t vertical_jumps(const VectorField &field)
{
  std::size_t count = 0;
  for (std::size_t r = 0; r + 1 < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      count += pixels_differ(field.pixel(r, c), field.pixel(r + 1, c)) ? 1 : 0;
    }
  }
  return count;
}

std::size_t horizontal_jumps(const VectorField &field)
{
  std::size_t count = 0;
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c + 1 < field.cols(); ++c) {
      count += pixels_differ(field.pixel(r, c), field.pixel(r, c + 1)) ? 1 : 0;
    }
  }
  return count;
}

bool shifted_source(const VectorField &displacement, std::size_t r, std::size_t c, GridIndex &source)
{
  double dr = 0.0;
  double dc = 0.0;
  if (displacement.channels() == 1) {
    dc = displacement(r, c, 0);
  } else {
    dr = displacement(r, c, 0);
    dc = displacement(r, c, 1);
  }
  double const sr = static_cast<double>(r) - dr;
  double const sc = static_cast<double>(c) - dc;
  if (!(sr >= 0.0 && sc >= 0.0 && sr < static_cast<double>(displacement.rows()) &&
        sc < static_cast<double>(displacement.cols()))) {
    return false;
  }
  source.row = static_cast<std::size_t>(sr);
  source.col = static_cast<std::size_t>(sc);
  return true;
}

ScalarImage sample_shifted(const ScalarImage &image, const VectorField &displacement)
{
  if (!displacement.same_grid(image)) {
    throw Error(Errc::ShapeMismatch, "sample_shifted: displacement grid differs from image grid");
  }
  if (displacement.channels() != 1 && displacement.channels() != 2) {
    throw Error(Errc::InvalidArgument, "sample_shifted: displacement must have 1 or 2 channels");
  }
  for (double v : displacement.values()) {
    if (!std::isfinite(v) || v != std::trunc(v)) {
      throw Error(Errc::InvalidArgument, "sample_shifted: displacement must be integer-valued");
    }
  }
  ScalarImage out(image.rows(), image.cols());
  for (std::size_t r = 0; r < image.rows(); ++r) {
    for (std::size_t c = 0; c < image.cols(); ++c) {
      GridIndex src;
      if (!shifted_source(displacement, r, c, src)) {
        throw Error(Errc::OutOfGrid, "sample_shifted: pixel (" + std::to_string(r) + ", " + std::to_string(c) +
                                       ") shifts outside the grid");
      }
      out(r, c) = image(src.row, src.col);
    }
  }
  return out;
}

double l2_norm(const VectorField &field)
{
  double sum = 0.0;
  for (double v : field.values()) {
    sum += v * v;
  }
  return std::sqrt(sum);
}

double max_abs_diff(const VectorField &a, const VectorField &b)
{
  if (!a.same_shape(b)) {
    throw Error(Errc::ShapeMismatch, "max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) {
    m = std::max(m, std::abs(av[k] - bv[k]));
  }
  return m;
}

double l2_diff(const VectorField &a, const VectorField &b)
{
  if (!a.same_shape(b)) {
    throw Error(Errc::ShapeMismatch, "l2_diff: shape mismatch");
  }
  double sum = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) {
    double const d = av[k] - bv[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

} // namespace potts
