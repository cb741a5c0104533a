#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qhic/errors.hpp"
#include "qhic/image.hpp"

// File I/O for the pipeline: 8-bit PNG (grayscale/RGB) and binary PPM/PGM
// read, 8-bit PNG write. Samples map to [0,1] by dividing by 255; alpha is
// stripped with a warning; 16-bit and palette inputs are rejected.

namespace qhic {
namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail(errc::file_not_found, "cannot open for reading: " + path);
  std::fseek(f, 0, SEEK_END);
  long size = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  std::vector<unsigned char> bytes(size > 0 ? static_cast<std::size_t>(size) : 0);
  std::size_t got = bytes.empty() ? 0 : std::fread(bytes.data(), 1, bytes.size(), f);
  std::fclose(f);
  if (got != bytes.size())
    fail(errc::corrupt_image_data, "short read: " + path);
  return bytes;
}

inline bool has_png_signature(const std::vector<unsigned char>& bytes) {
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

inline std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

struct PngMemorySource {
  const unsigned char* data;
  std::size_t size;
  std::size_t pos;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<PngMemorySource*>(png_get_io_ptr(png));
  if (src->pos + len > src->size)
    png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, src->data + src->pos, len);
  src->pos += len;
}

inline void png_vec_write(png_structp png, png_bytep data, png_size_t len) {
  auto* sink = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  sink->insert(sink->end(), data, data + len);
}

inline void png_vec_flush(png_structp) {}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// IHDR is always the first chunk; parsing it up front lets every buffer be
// sized before the setjmp region so nothing allocates after setjmp.
struct PngHeader {
  std::uint32_t width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
};

inline PngHeader parse_png_header(const std::vector<unsigned char>& bytes,
                                  const std::string& path) {
  if (bytes.size() < 33 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0)
    fail(errc::corrupt_image_data, "missing IHDR chunk: " + path);
  PngHeader h;
  h.width = be32(bytes.data() + 16);
  h.height = be32(bytes.data() + 20);
  h.bit_depth = bytes[24];
  h.color_type = bytes[25];
  return h;
}

inline ImageTensor load_png(const std::vector<unsigned char>& bytes,
                            const std::string& path) {
  const PngHeader hdr = parse_png_header(bytes, path);
  if (hdr.width == 0 || hdr.height == 0)
    fail(errc::corrupt_image_data, "zero-sized PNG: " + path);
  if (hdr.bit_depth != 8)
    fail(errc::unsupported_format,
         "only 8-bit PNG is supported (bit depth " +
             std::to_string(hdr.bit_depth) + "): " + path);

  std::int64_t channels = 0;
  bool strip_alpha = false;
  switch (hdr.color_type) {
    case PNG_COLOR_TYPE_GRAY: channels = 1; break;
    case PNG_COLOR_TYPE_RGB: channels = 3; break;
    case PNG_COLOR_TYPE_GRAY_ALPHA: channels = 1; strip_alpha = true; break;
    case PNG_COLOR_TYPE_RGB_ALPHA: channels = 3; strip_alpha = true; break;
    case PNG_COLOR_TYPE_PALETTE:
      fail(errc::unsupported_format, "palette PNG is not supported: " + path);
    default:
      fail(errc::unsupported_format, "unsupported PNG color type: " + path);
  }
  if (strip_alpha)
    std::cerr << "warning: alpha channel stripped: " << path << "\n";

  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(g.png != nullptr, errc::corrupt_image_data, "libpng init failed");
  g.info = png_create_info_struct(g.png);
  require(g.info != nullptr, errc::corrupt_image_data, "libpng init failed");

  PngMemorySource src{bytes.data(), bytes.size(), 0};
  const std::size_t row_bytes =
      static_cast<std::size_t>(hdr.width) * static_cast<std::size_t>(channels);
  std::vector<unsigned char> raster(row_bytes * hdr.height);
  std::vector<png_bytep> rows(hdr.height);
  for (std::uint32_t r = 0; r < hdr.height; ++r)
    rows[r] = raster.data() + static_cast<std::size_t>(r) * row_bytes;

  // libpng reports errors by longjmp'ing back here; all C++ objects above
  // were fully constructed before setjmp and are only written through raw
  // pointers afterwards.
  if (setjmp(png_jmpbuf(g.png)))
    fail(errc::corrupt_image_data, "corrupt PNG data: " + path);

  png_set_read_fn(g.png, &src, png_mem_read);
  png_read_info(g.png, g.info);
  if (strip_alpha) png_set_strip_alpha(g.png);
  (void)png_set_interlace_handling(g.png);
  png_read_update_info(g.png, g.info);
  if (png_get_rowbytes(g.png, g.info) != row_bytes)
    fail(errc::corrupt_image_data, "unexpected PNG row size: " + path);
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  ImageTensor img = make_image(hdr.height, hdr.width, channels);
  for (std::size_t i = 0; i < raster.size(); ++i)
    img.data[i] = raster[i] / 255.0;
  return img;
}

// Binary PNM: "P5" (grayscale) or "P6" (RGB), ASCII header with '#'
// comments, maxval up to 255, raster of one byte per sample.
inline ImageTensor load_pnm(const std::vector<unsigned char>& bytes,
                            const std::string& path) {
  std::size_t pos = 2;  // past the magic
  auto next_token = [&](const char* what) -> std::uint64_t {
    bool in_comment = false;
    while (pos < bytes.size()) {
      unsigned char c = bytes[pos];
      if (in_comment) {
        in_comment = (c != '\n');
        ++pos;
      } else if (c == '#') {
        in_comment = true;
        ++pos;
      } else if (std::isspace(c)) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      fail(errc::corrupt_image_data,
           std::string("bad PNM header (") + what + "): " + path);
    std::uint64_t value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 0xffffffffull)
        fail(errc::corrupt_image_data, "PNM header value overflow: " + path);
      ++pos;
    }
    return value;
  };

  const std::int64_t channels = (bytes[1] == '6') ? 3 : 1;
  const std::uint64_t width = next_token("width");
  const std::uint64_t height = next_token("height");
  const std::uint64_t maxval = next_token("maxval");
  if (width == 0 || height == 0)
    fail(errc::corrupt_image_data, "zero-sized PNM: " + path);
  if (width > 1000000 || height > 1000000)
    fail(errc::unsupported_format, "PNM dimensions too large: " + path);
  if (maxval > 255)
    fail(errc::unsupported_format,
         "16-bit PNM is not supported (maxval " + std::to_string(maxval) +
             "): " + path);
  if (maxval == 0)
    fail(errc::corrupt_image_data, "PNM maxval must be >= 1: " + path);
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    fail(errc::corrupt_image_data, "missing raster separator: " + path);
  ++pos;  // exactly one whitespace byte before the raster

  const std::uint64_t samples = width * height * channels;
  if (bytes.size() - pos < samples)
    fail(errc::corrupt_image_data, "truncated PNM raster: " + path);

  ImageTensor img = make_image(static_cast<std::int64_t>(height),
                               static_cast<std::int64_t>(width), channels);
  for (std::uint64_t i = 0; i < samples; ++i)
    img.data[i] = bytes[pos + i] / 255.0;
  return img;
}

}  // namespace detail

// Loads an 8-bit PNG (grayscale or RGB, alpha stripped) or a binary
// PPM (P6)/PGM (P5). Samples divide by 255, so every value lands in [0,1].
inline ImageTensor load_image(const std::string& path) {
  const std::vector<unsigned char> bytes = detail::read_file_bytes(path);
  if (detail::has_png_signature(bytes)) return detail::load_png(bytes, path);
  if (bytes.size() >= 3 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6') && std::isspace(bytes[2]))
    return detail::load_pnm(bytes, path);
  fail(errc::unsupported_format,
       "not a PNG or binary PPM/PGM file: " + path);
}

// Encodes an image to an 8-bit PNG byte stream. Quantizes by round(v*255).
// The encoder settings are pinned so identical pixels give identical bytes.
inline std::vector<unsigned char> encode_png(const ImageTensor& img) {
  require(img.channels == 1 || img.channels == 3, errc::invalid_argument,
          "channel count must be 1 or 3");
  require(img.height >= 1 && img.width >= 1, errc::invalid_argument,
          "image dimensions must be >= 1");
  require(img.data.size() == static_cast<std::size_t>(img.sample_count()),
          errc::dimension_mismatch, "image data length mismatch");

  std::vector<unsigned char> raster(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    long q = std::lround(img.data[i] * 255.0);
    raster[i] = static_cast<unsigned char>(q < 0 ? 0 : (q > 255 ? 255 : q));
  }

  // The sink lives on the heap: the write callback grows it after setjmp,
  // and only automatic objects are indeterminate after a longjmp.
  auto sink = std::make_unique<std::vector<unsigned char>>();
  std::vector<png_bytep> rows(img.height);
  const std::size_t row_bytes =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.channels);
  for (std::int64_t r = 0; r < img.height; ++r)
    rows[r] = raster.data() + static_cast<std::size_t>(r) * row_bytes;

  detail::PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(g.png != nullptr, errc::io_write_failure, "libpng init failed");
  g.info = png_create_info_struct(g.png);
  require(g.info != nullptr, errc::io_write_failure, "libpng init failed");

  if (setjmp(png_jmpbuf(g.png)))
    fail(errc::io_write_failure, "PNG encoding failed");

  png_set_write_fn(g.png, sink.get(), detail::png_vec_write, detail::png_vec_flush);
  png_set_compression_level(g.png, 6);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  png_write_image(g.png, rows.data());
  png_write_end(g.png, g.info);

  return std::move(*sink);
}

// Writes a lossless 8-bit PNG and returns the file size in bytes.
inline std::uint64_t save_image(const ImageTensor& img, const std::string& path) {
  const std::vector<unsigned char> bytes = encode_png(img);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(errc::io_write_failure, "cannot open for writing: " + path);
  std::size_t written = std::fwrite(bytes.data(), 1, bytes.size(), f);
  int flush_err = std::fclose(f);
  if (written != bytes.size() || flush_err != 0)
    fail(errc::io_write_failure, "short write: " + path);
  return bytes.size();
}

}  // namespace qhic
