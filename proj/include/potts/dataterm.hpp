#pragma once

// Linearized brightness-invariance data term.
//
// Around an integer initializer ubar the constraint f1(x) = f2(x - u(x)) is
// linearized to  sum_c g_c(x) u_c(x) = rhs(x)  with
//
//   g_c(x) = (forward difference of f2 along axis c)(x - ubar(x))
//   rhs(x) = sum_c g_c(x) ubar_c(x) + f2(x - ubar(x)) - f1(x)
//
// The operator A = (diag g_1, ..., diag g_d) is stored as per-pixel
// coefficients; the data energy is 1/2 ||A u - rhs||^2.
//
// Disparity uses one channel along the column (horizontal) axis, matching
// init_disparity. Flow uses two channels (row, col).

#include "potts/grid.hpp"

namespace potts {

enum class DataMode {
  Disparity,
  Flow,
};

struct LinearizedData
{
  VectorField coeffs; // g, one channel per displacement component
  ScalarImage rhs;
  DataMode mode = DataMode::Disparity;

  std::size_t channels() const noexcept { return coeffs.channels(); }
};

LinearizedData build_disparity_data(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar);
LinearizedData build_flow_data(const ScalarImage &f1, const ScalarImage &f2, const VectorField &ubar);

double data_energy(const LinearizedData &data, const VectorField &u);

} // namespace potts
