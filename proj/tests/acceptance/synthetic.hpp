#pragma once

// Synthetic scenes with known integer displacements.

#include "potts/grid.hpp"

#include <cstdint>
#include <vector>

namespace acceptance {

struct Scene
{
  potts::ScalarImage f1;
  potts::ScalarImage f2;
  potts::VectorField truth; // displacement with f1(x) = f2(x - truth(x))
};

// Gaussian-filtered uniform noise stretched to [lo, hi].
potts::ScalarImage smooth_texture(std::size_t rows, std::size_t cols, unsigned seed, double blur_sigma, double lo,
                                  double hi);

// 128x128, background disparity 0 and three rectangles at 2, 5 and 8.
Scene disparity_scene(unsigned seed);

// 128x128, background translation (2, 1) and a central square at (-1, 3),
// both (row, col).
Scene flow_scene(unsigned seed);

// Pixels at least `margin` away from every border.
std::vector<std::uint8_t> interior_mask(std::size_t rows, std::size_t cols, std::size_t margin);

} // namespace acceptance
