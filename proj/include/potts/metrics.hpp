#pragma once

// Evaluation against ground truth plus partition statistics.
//
// Ground-truth entries that are non-finite or have magnitude >= 1e9 are
// unknown and excluded. An optional mask (nonzero = evaluate) restricts the
// pixels further, e.g. to an interior region.

#include "potts/grid.hpp"

#include <cstdint>
#include <span>

namespace potts {

bool is_unknown(double value);
bool is_unknown_flow(std::span<const double> pixel);

struct DisparityMetrics
{
  double bad_pixel_rate = 0.0; // fraction with |u - gt| > tau
  double mean_abs_error = 0.0;
  std::size_t evaluated = 0;
};

DisparityMetrics disparity_metrics(const VectorField &u, const VectorField &gt, double tau = 1.0,
                                   std::span<const std::uint8_t> mask = {});

struct FlowMetrics
{
  double average_endpoint_error = 0.0;
  double average_angular_error = 0.0; // degrees, between (u, v, 1) and (gt_u, gt_v, 1)
  std::size_t evaluated = 0;
};

FlowMetrics flow_metrics(const VectorField &u, const VectorField &gt, std::span<const std::uint8_t> mask = {});

// 4-connected regions whose neighboring values differ by at most `tol`
// (max norm over channels).
std::size_t count_segments(const VectorField &field, double tol = 0.0);

// Values are grouped greedily in raster order: a pixel joins the first
// existing group whose representative is within `tol` (max norm), else it
// starts a new group. Counting stops once `limit` groups exist.
std::size_t count_distinct(const VectorField &field, double tol = 0.0, std::size_t limit = 100000,
                           std::span<const std::uint8_t> mask = {});

} // namespace potts
