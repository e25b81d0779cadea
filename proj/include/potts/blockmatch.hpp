#pragma once

// Integer displacement initializers by block matching.
//
// For every pixel of the first image the surrounding block is compared with
// blocks around candidate positions (i,j) - s in the second image using
// normalized cross correlation. Only candidates whose center lies inside the
// grid are admissible. Blocks are clipped at the borders: an offset is used
// only when it is inside the grid for both images. The raw argmax is then
// median filtered and clamped back into each pixel's admissible range.

#include "potts/grid.hpp"

#include <span>

namespace potts {

struct SearchRange
{
  int min = 0;
  int max = 0;
};

struct MatchConfig
{
  int block_radius = 3; // 7x7 blocks
  SearchRange rows{0, 0};
  SearchRange cols{0, 0};
  int median_radius = 1; // 3x3 window
  unsigned threads = 0;
};

inline constexpr double kNccEpsilon = 1e-12;

// sum (a - mean a)(b - mean b) / sqrt(sum (a - mean a)^2 * sum (b - mean b)^2 + eps)
double ncc(std::span<const double> block_a, std::span<const double> block_b);

// Horizontal disparity: one channel holding the column shift s, with
// f1(i,j) matched against f2(i, j - s). Only cfg.cols is used.
VectorField init_disparity(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg);

// Flow: two channels (row shift, col shift), f1(i,j) matched against
// f2((i,j) - s) over the rectangle cfg.rows x cfg.cols.
VectorField init_flow(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg);

// Per-channel median over the (2r+1)^2 window clipped at the borders. For an
// even number of samples the lower middle value is taken, so every output
// value is one of the input values.
VectorField median_filter(const VectorField &field, int radius);

} // namespace potts
