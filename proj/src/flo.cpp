#include "potts/flo.hpp"

#include "potts/error.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>

namespace potts {

namespace {

void put_u32(std::string &out, std::uint32_t v)
{
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset)
{
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) {
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(k)]);
  }
  return v;
}

void put_f32(std::string &out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

float get_f32(std::string_view bytes, std::size_t offset) { return std::bit_cast<float>(get_u32(bytes, offset)); }

} // namespace

std::string encode_flo(const VectorField &flow)
{
  if (flow.channels() != 2) {
    throw Error(Errc::InvalidArgument, "flo: flow field must have 2 channels");
  }
  if (flow.cols() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) ||
      flow.rows() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error(Errc::SizeMismatch, "flo: dimensions exceed int32");
  }
  std::string out;
  out.reserve(12 + flow.values().size() * 4);
  put_f32(out, kFloMagic);
  put_u32(out, static_cast<std::uint32_t>(flow.cols()));
  put_u32(out, static_cast<std::uint32_t>(flow.rows()));
  for (double v : flow.values()) {
    put_f32(out, static_cast<float>(v));
  }
  return out;
}

VectorField decode_flo(std::string_view bytes)
{
  if (bytes.size() < 12) {
    throw Error(Errc::SizeMismatch, "flo: file shorter than its header");
  }
  if (get_f32(bytes, 0) != kFloMagic) {
    throw Error(Errc::BadMagic, "flo: bad magic number");
  }
  auto const width = static_cast<std::int32_t>(get_u32(bytes, 4));
  auto const height = static_cast<std::int32_t>(get_u32(bytes, 8));
  if (width <= 0 || height <= 0) {
    throw Error(Errc::SizeMismatch, "flo: non-positive dimensions");
  }
  std::size_t const count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 2;
  if (bytes.size() != 12 + count * 4) {
    throw Error(Errc::SizeMismatch, "flo: payload size does not match " + std::to_string(width) + "x" +
                                      std::to_string(height));
  }
  VectorField flow(static_cast<std::size_t>(height), static_cast<std::size_t>(width), 2);
  auto values = flow.values();
  for (std::size_t k = 0; k < count; ++k) {
    double v = get_f32(bytes, 12 + 4 * k);
    // Non-finite entries are unknown pixels as well.
    values[k] = std::isfinite(v) ? v : 10.0 * kFloUnknown;
  }
  return flow;
}

void write_flo(const std::string &path, const VectorField &flow)
{
  std::string const bytes = encode_flo(flow);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::Io, "cannot write '" + path + "'");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::Io, "write failed for '" + path + "'");
  }
}

VectorField read_flo(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open '" + path + "'");
  }
  std::string const bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return decode_flo(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), "'" + path + "': " + e.what());
  }
}

VectorField to_middlebury(const VectorField &displacement)
{
  if (displacement.channels() != 2) {
    throw Error(Errc::InvalidArgument, "to_middlebury: expected 2 channels");
  }
  VectorField out(displacement.rows(), displacement.cols(), 2);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out(r, c, 0) = -displacement(r, c, 1);
      out(r, c, 1) = -displacement(r, c, 0);
    }
  }
  return out;
}

VectorField from_middlebury(const VectorField &flow)
{
  if (flow.channels() != 2) {
    throw Error(Errc::InvalidArgument, "from_middlebury: expected 2 channels");
  }
  VectorField out(flow.rows(), flow.cols(), 2);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out(r, c, 0) = -flow(r, c, 1);
      out(r, c, 1) = -flow(r, c, 0);
    }
  }
  return out;
}

} // namespace potts
