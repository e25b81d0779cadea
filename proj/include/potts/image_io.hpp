#pragma once

// Minimal image I/O: PGM (P2/P5), PPM (P3/P6) and PNG, 8 or 16 bit.

#include "potts/grid.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace potts {

// Samples as stored in the file, interleaved per pixel.
struct RawImage
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t channels = 1; // 1 (gray) or 3 (RGB)
  unsigned maxval = 255;
  std::vector<std::uint16_t> samples;

  std::uint16_t at(std::size_t r, std::size_t c, std::size_t ch = 0) const
  {
    return samples[(r * cols + c) * channels + ch];
  }
};

RawImage parse_pnm(std::string_view bytes);
std::string encode_pnm(const RawImage &image, bool binary = true);

RawImage read_raw_image(const std::string &path);
void write_pnm(const std::string &path, const RawImage &image, bool binary = true);
void write_png(const std::string &path, const RawImage &image);
// Picks PNG for a ".png" extension and PNM otherwise.
void write_image(const std::string &path, const RawImage &image);

// Gray levels in [0, 255]: color is reduced by 0.299 R + 0.587 G + 0.114 B,
// and samples are rescaled by 255 / maxval.
ScalarImage to_gray(const RawImage &image);
// Gray values as stored (no rescaling); used for encoded ground truth.
ScalarImage to_gray_samples(const RawImage &image);

ScalarImage read_image(const std::string &path);

} // namespace potts
