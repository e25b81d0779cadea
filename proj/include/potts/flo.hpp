#pragma once

// Middlebury .flo optical flow files.
//
// Layout (little-endian): float magic 202021.25 ("PIEH"), int32 width,
// int32 height, then width*height interleaved (u, v) float32 pairs in
// row-major order, u horizontal and v vertical. Components with magnitude
// >= 1e9 mark unknown pixels.
//
// Fields read from or written to .flo use the file's (u, v) channel order
// and its sign convention: frame-1 pixel x moves to x + (u, v) in frame 2.
// The solver's displacement fields are (row, col) with f1(x) = f2(x - d);
// to_middlebury and from_middlebury convert between the two.

#include "potts/grid.hpp"

#include <string>
#include <string_view>

namespace potts {

inline constexpr float kFloMagic = 202021.25f;
inline constexpr double kFloUnknown = 1e9;

std::string encode_flo(const VectorField &flow);
VectorField decode_flo(std::string_view bytes);

void write_flo(const std::string &path, const VectorField &flow);
VectorField read_flo(const std::string &path);

// (row, col) displacement d with f1(x) = f2(x - d)  ->  (u, v) = (-d_col, -d_row).
VectorField to_middlebury(const VectorField &displacement);
VectorField from_middlebury(const VectorField &flow);

} // namespace potts
