#include "potts/image_io.hpp"

#include "potts/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace potts {

namespace {

class PnmReader
{
public:
  explicit PnmReader(std::string_view bytes)
    : bytes_(bytes)
  {
  }

  // Skips whitespace and '#' comments, then reads one unsigned token.
  unsigned next_uint()
  {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      }
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
        continue;
      }
      break;
    }
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::CorruptHeader, "PNM: expected a number at byte " + std::to_string(pos_));
    }
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) {
        throw Error(Errc::CorruptHeader, "PNM: number too large");
      }
      ++pos_;
    }
    return static_cast<unsigned>(value);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void skip_single_space()
  {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::CorruptHeader, "PNM: missing whitespace after header");
    }
    ++pos_;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }

private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string lower_extension(const std::string &path)
{
  auto const dot = path.find_last_of('.');
  if (dot == std::string::npos) {
    return {};
  }
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void check_raw(const RawImage &image)
{
  if (image.channels != 1 && image.channels != 3) {
    throw Error(Errc::UnsupportedFormat, "image: only gray and RGB images are supported");
  }
  if (image.maxval == 0 || image.maxval > 65535) {
    throw Error(Errc::UnsupportedFormat, "image: maxval must be in [1, 65535]");
  }
  if (image.samples.size() != image.rows * image.cols * image.channels) {
    throw Error(Errc::SizeMismatch, "image: sample count does not match the dimensions");
  }
}

// --- PNG -------------------------------------------------------------------

struct PngFile
{
  std::FILE *fp = nullptr;
  ~PngFile()
  {
    if (fp) {
      std::fclose(fp);
    }
  }
};

void png_error_handler(png_structp png, png_const_charp message)
{
  auto *buffer = static_cast<char *>(png_get_error_ptr(png));
  std::snprintf(buffer, 256, "%s", message);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

RawImage read_png(const std::string &path)
{
  PngFile file;
  file.fp = std::fopen(path.c_str(), "rb");
  if (!file.fp) {
    throw Error(Errc::Io, "cannot open '" + path + "'");
  }
  char message[256] = "unknown libpng error";
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, message, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(Errc::Io, "PNG: out of memory");
  }

  RawImage image;
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, file.fp);
    png_read_info(png, info);
    png_uint_32 const width = png_get_image_width(png, info);
    png_uint_32 const height = png_get_image_height(png, info);
    int const color = png_get_color_type(png, info);
    int const depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) {
      png_set_palette_to_rgb(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) {
      png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);
    std::size_t const channels = png_get_channels(png, info);
    int const out_depth = png_get_bit_depth(png, info);
    std::size_t const row_bytes = png_get_rowbytes(png, info);
    buffer.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) {
      rows[r] = buffer.data() + r * row_bytes;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);

    image.rows = height;
    image.cols = width;
    image.channels = channels;
    image.maxval = out_depth == 16 ? 65535u : 255u;
    image.samples.resize(static_cast<std::size_t>(width) * height * channels);
    for (std::size_t k = 0; k < image.samples.size(); ++k) {
      if (out_depth == 16) {
        image.samples[k] = static_cast<std::uint16_t>((buffer[2 * k] << 8) | buffer[2 * k + 1]);
      } else {
        image.samples[k] = buffer[k];
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) {
    throw Error(Errc::CorruptHeader, "PNG '" + path + "': " + message);
  }
  if (image.channels != 1 && image.channels != 3) {
    throw Error(Errc::UnsupportedFormat, "PNG '" + path + "': unsupported channel layout");
  }
  return image;
}

} // namespace

RawImage parse_pnm(std::string_view bytes)
{
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(Errc::UnsupportedFormat, "PNM: missing 'P' magic");
  }
  char const kind = bytes[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw Error(Errc::UnsupportedFormat, std::string("PNM: unsupported type P") + kind);
  }
  PnmReader reader(bytes.substr(2));
  RawImage image;
  image.cols = reader.next_uint();
  image.rows = reader.next_uint();
  image.maxval = reader.next_uint();
  image.channels = (kind == '3' || kind == '6') ? 3 : 1;
  if (image.rows == 0 || image.cols == 0) {
    throw Error(Errc::CorruptHeader, "PNM: zero image dimension");
  }
  if (image.maxval == 0 || image.maxval > 65535) {
    throw Error(Errc::CorruptHeader, "PNM: maxval must be in [1, 65535]");
  }
  std::size_t const count = image.rows * image.cols * image.channels;
  image.samples.resize(count);

  if (kind == '2' || kind == '3') {
    for (std::size_t k = 0; k < count; ++k) {
      unsigned const v = reader.next_uint();
      if (v > image.maxval) {
        throw Error(Errc::CorruptHeader, "PNM: sample exceeds maxval");
      }
      image.samples[k] = static_cast<std::uint16_t>(v);
    }
    return image;
  }

  reader.skip_single_space();
  std::string_view const data = reader.rest();
  std::size_t const width = image.maxval > 255 ? 2 : 1;
  if (data.size() < count * width) {
    throw Error(Errc::CorruptHeader, "PNM: truncated pixel data");
  }
  for (std::size_t k = 0; k < count; ++k) {
    unsigned v = 0;
    if (width == 2) {
      v = (static_cast<unsigned char>(data[2 * k]) << 8) | static_cast<unsigned char>(data[2 * k + 1]);
    } else {
      v = static_cast<unsigned char>(data[k]);
    }
    if (v > image.maxval) {
      throw Error(Errc::CorruptHeader, "PNM: sample exceeds maxval");
    }
    image.samples[k] = static_cast<std::uint16_t>(v);
  }
  return image;
}

std::string encode_pnm(const RawImage &image, bool binary)
{
  check_raw(image);
  char const kind = image.channels == 3 ? (binary ? '6' : '3') : (binary ? '5' : '2');
  std::ostringstream out;
  out << 'P' << kind << '\n' << image.cols << ' ' << image.rows << '\n' << image.maxval << '\n';
  if (binary) {
    bool const wide = image.maxval > 255;
    for (std::uint16_t v : image.samples) {
      if (wide) {
        out.put(static_cast<char>(v >> 8));
      }
      out.put(static_cast<char>(v & 0xFF));
    }
  } else {
    std::size_t const per_row = image.cols * image.channels;
    for (std::size_t k = 0; k < image.samples.size(); ++k) {
      out << image.samples[k] << ((k + 1) % per_row == 0 ? '\n' : ' ');
    }
  }
  return out.str();
}

RawImage read_raw_image(const std::string &path)
{
  std::string const ext = lower_extension(path);
  if (ext == "png") {
    return read_png(path);
  }
  std::string const bytes = read_file(path);
  if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.compare(1, 3, "PNG") == 0) {
    return read_png(path);
  }
  try {
    return parse_pnm(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), "'" + path + "': " + e.what());
  }
}

void write_pnm(const std::string &path, const RawImage &image, bool binary)
{
  std::string const bytes = encode_pnm(image, binary);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::Io, "cannot write '" + path + "'");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::Io, "write failed for '" + path + "'");
  }
}

void write_png(const std::string &path, const RawImage &image)
{
  check_raw(image);
  bool const wide = image.maxval > 255;
  std::size_t const row_bytes = image.cols * image.channels * (wide ? 2 : 1);
  std::vector<png_byte> buffer(row_bytes * image.rows);
  for (std::size_t k = 0; k < image.samples.size(); ++k) {
    if (wide) {
      buffer[2 * k] = static_cast<png_byte>(image.samples[k] >> 8);
      buffer[2 * k + 1] = static_cast<png_byte>(image.samples[k] & 0xFF);
    } else {
      buffer[k] = static_cast<png_byte>(std::min<std::uint16_t>(image.samples[k], 255));
    }
  }
  std::vector<png_bytep> rows(image.rows);
  for (std::size_t r = 0; r < image.rows; ++r) {
    rows[r] = buffer.data() + r * row_bytes;
  }

  PngFile file;
  file.fp = std::fopen(path.c_str(), "wb");
  if (!file.fp) {
    throw Error(Errc::Io, "cannot write '" + path + "'");
  }
  char message[256] = "unknown libpng error";
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, message, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(Errc::Io, "PNG: out of memory");
  }
  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.cols), static_cast<png_uint_32>(image.rows),
                 wide ? 16 : 8, image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (failed) {
    throw Error(Errc::Io, "PNG '" + path + "': " + message);
  }
}

void write_image(const std::string &path, const RawImage &image)
{
  if (lower_extension(path) == "png") {
    write_png(path, image);
  } else {
    write_pnm(path, image);
  }
}

ScalarImage to_gray_samples(const RawImage &image)
{
  check_raw(image);
  ScalarImage out(image.rows, image.cols);
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      if (image.channels == 1) {
        out(r, c) = image.at(r, c);
      } else {
        out(r, c) = 0.299 * image.at(r, c, 0) + 0.587 * image.at(r, c, 1) + 0.114 * image.at(r, c, 2);
      }
    }
  }
  return out;
}

ScalarImage to_gray(const RawImage &image)
{
  ScalarImage out = to_gray_samples(image);
  if (image.maxval != 255) {
    double const scale = 255.0 / static_cast<double>(image.maxval);
    for (double &v : out.values()) {
      v *= scale;
    }
  }
  return out;
}

ScalarImage read_image(const std::string &path) { return to_gray(read_raw_image(path)); }

} // namespace potts
