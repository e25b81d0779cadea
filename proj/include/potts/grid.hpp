#pragma once

// Grid containers and the discrete operators of the partitioning models.
//
// Storage is row-major with 0-based indices. A VectorField stores its
// channels interleaved per pixel, so pixel(r, c) is a contiguous span of
// `channels()` values.

#include <cstddef>
#include <span>
#include <vector>

namespace potts {

struct GridIndex
{
  std::size_t row = 0;
  std::size_t col = 0;
};

class ScalarImage
{
public:
  ScalarImage() = default;
  ScalarImage(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws InvalidArgument on size mismatch and NonfinitePixel on NaN/inf.
  ScalarImage(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double &operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const ScalarImage &other) const noexcept
  {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const ScalarImage &, const ScalarImage &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

class VectorField
{
public:
  VectorField() = default;
  VectorField(std::size_t rows, std::size_t cols, std::size_t channels, double fill = 0.0);
  VectorField(std::size_t rows, std::size_t cols, std::size_t channels, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }

  double &operator()(std::size_t r, std::size_t c, std::size_t ch = 0) noexcept
  {
    return values_[(r * cols_ + c) * channels_ + ch];
  }
  double operator()(std::size_t r, std::size_t c, std::size_t ch = 0) const noexcept
  {
    return values_[(r * cols_ + c) * channels_ + ch];
  }

  std::span<double> pixel(std::size_t r, std::size_t c) noexcept
  {
    return {values_.data() + (r * cols_ + c) * channels_, channels_};
  }
  std::span<const double> pixel(std::size_t r, std::size_t c) const noexcept
  {
    return {values_.data() + (r * cols_ + c) * channels_, channels_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const VectorField &other) const noexcept
  {
    return rows_ == other.rows_ && cols_ == other.cols_ && channels_ == other.channels_;
  }
  bool same_grid(const ScalarImage &image) const noexcept
  {
    return rows_ == image.rows() && cols_ == image.cols();
  }
  bool all_finite() const noexcept;

  friend bool operator==(const VectorField &, const VectorField &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

VectorField as_field(const ScalarImage &image);
ScalarImage channel_image(const VectorField &field, std::size_t channel);

// Vertical forward difference u(i+1,j) - u(i,j); the last row is zero
// (mirror boundary).
VectorField forward_diff_v(const VectorField &field);
// Horizontal forward difference u(i,j+1) - u(i,j); the last column is zero.
VectorField forward_diff_h(const VectorField &field);

// Number of pixels whose d-vector is not the zero vector.
std::size_t grouped_l0(const VectorField &field);

// Jump counts of the Potts prior, ||grad_1 u||_0 and ||grad_2 u||_0, computed
// without materializing the difference fields.
std::size_t vertical_jumps(const VectorField &field);
std::size_t horizontal_jumps(const VectorField &field);

// Shifted lookup output(i,j) = image((i,j) - displacement(i,j)).
//
// A one-channel displacement is a horizontal (column) shift, the disparity
// axis. A two-channel displacement is (row, col). Displacements must be
// integers, and every shifted coordinate must land inside the grid
// (OutOfGrid otherwise).
ScalarImage sample_shifted(const ScalarImage &image, const VectorField &displacement);

// Source coordinate of the shifted lookup at (r, c); false when it leaves
// the grid. Shares the axis convention of sample_shifted.
bool shifted_source(const VectorField &displacement, std::size_t r, std::size_t c, GridIndex &source);

double l2_norm(const VectorField &field);
double max_abs_diff(const VectorField &a, const VectorField &b);
double l2_diff(const VectorField &a, const VectorField &b);

} // namespace potts
