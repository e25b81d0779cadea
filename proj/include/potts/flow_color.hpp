#pragma once

#include "potts/grid.hpp"
#include "potts/image_io.hpp"

#include <optional>

namespace potts {

// HSV color coding of a (u, v) flow field: hue = atan2(v, u) in [0, 360),
// full saturation, value = min(|(u, v)| / m, 1) where m is max_magnitude or,
// when absent, the largest norm in the field. Unknown pixels are black.
// Returns an 8-bit RGB image.
RawImage colorize_flow(const VectorField &flow, std::optional<double> max_magnitude = std::nullopt);

} // namespace potts
