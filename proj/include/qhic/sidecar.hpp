#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "qhic/bixel.hpp"
#include "qhic/errors.hpp"

// Sidecar container for a BlockDecomposition so compression and
// reconstruction can run as separate invocations.
//
// Layout (little-endian, IEEE-754 doubles):
//   bytes 0..7    magic "QHICBD1\n"
//   8 x int64     bixel_h, bixel_w, grid_rows, grid_cols, channels,
//                 original_height, original_width, (reserved = 0)
//   2 x int64     padded_height, padded_width
//   f64 * blocks              block sums, row-major grid order
//   f64 * blocks * block_len  weight vectors, concatenated per block
//
// Weights are stored at full precision; the flattening order inside a block
// is (row, column, channel), matching BlockDecomposition.

namespace qhic {

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "sidecar serialization assumes a little-endian host");

inline constexpr char kSidecarMagic[8] = {'Q', 'H', 'I', 'C', 'B', 'D', '1', '\n'};

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace detail

inline void save_sidecar(const BlockDecomposition& decomp, const std::string& path) {
  detail::FileCloser fc;
  fc.f = std::fopen(path.c_str(), "wb");
  if (!fc.f) fail(errc::io_write_failure, "cannot open for writing: " + path);

  auto put = [&](const void* p, std::size_t n) {
    if (std::fwrite(p, 1, n, fc.f) != n)
      fail(errc::io_write_failure, "short write: " + path);
  };
  auto put_i64 = [&](std::int64_t v) { put(&v, sizeof v); };

  put(detail::kSidecarMagic, sizeof detail::kSidecarMagic);
  put_i64(decomp.bixel_h);
  put_i64(decomp.bixel_w);
  put_i64(decomp.grid_rows);
  put_i64(decomp.grid_cols);
  put_i64(decomp.channels);
  put_i64(decomp.pad.original_height);
  put_i64(decomp.pad.original_width);
  put_i64(0);
  put_i64(decomp.pad.padded_height);
  put_i64(decomp.pad.padded_width);
  put(decomp.sums.data(), decomp.sums.size() * sizeof(double));
  for (const auto& w : decomp.weights) put(w.data(), w.size() * sizeof(double));
}

inline BlockDecomposition load_sidecar(const std::string& path) {
  detail::FileCloser fc;
  fc.f = std::fopen(path.c_str(), "rb");
  if (!fc.f) fail(errc::file_not_found, "cannot open for reading: " + path);

  auto get = [&](void* p, std::size_t n) {
    if (std::fread(p, 1, n, fc.f) != n)
      fail(errc::corrupt_image_data, "truncated sidecar: " + path);
  };
  auto get_i64 = [&]() {
    std::int64_t v = 0;
    get(&v, sizeof v);
    return v;
  };

  char magic[8];
  get(magic, sizeof magic);
  if (std::memcmp(magic, detail::kSidecarMagic, sizeof magic) != 0)
    fail(errc::unsupported_format, "not a sidecar file: " + path);

  BlockDecomposition d;
  d.bixel_h = get_i64();
  d.bixel_w = get_i64();
  d.grid_rows = get_i64();
  d.grid_cols = get_i64();
  d.channels = get_i64();
  d.pad.original_height = get_i64();
  d.pad.original_width = get_i64();
  (void)get_i64();  // reserved
  d.pad.padded_height = get_i64();
  d.pad.padded_width = get_i64();

  const std::int64_t dim_cap = 1000000;
  require(d.bixel_h >= 1 && d.bixel_h <= dim_cap && d.bixel_w >= 1 &&
              d.bixel_w <= dim_cap && d.grid_rows >= 1 &&
              d.grid_rows <= dim_cap && d.grid_cols >= 1 &&
              d.grid_cols <= dim_cap && (d.channels == 1 || d.channels == 3),
          errc::corrupt_image_data, "implausible sidecar geometry: " + path);
  require(d.block_count() <= 1000000000 && d.block_len() <= 1000000000,
          errc::corrupt_image_data, "implausible sidecar geometry: " + path);
  require(d.pad.padded_height == d.grid_rows * d.bixel_h &&
              d.pad.padded_width == d.grid_cols * d.bixel_w &&
              d.pad.original_height >= 1 &&
              d.pad.original_height <= d.pad.padded_height &&
              d.pad.original_width >= 1 &&
              d.pad.original_width <= d.pad.padded_width,
          errc::corrupt_image_data, "inconsistent sidecar geometry: " + path);

  const auto blocks = static_cast<std::size_t>(d.block_count());
  const auto m = static_cast<std::size_t>(d.block_len());

  // The header fixes the payload size exactly; checking it up front keeps a
  // forged header from driving the allocations below.
  std::fseek(fc.f, 0, SEEK_END);
  const auto file_size = static_cast<std::uint64_t>(std::ftell(fc.f));
  std::fseek(fc.f, 8 + 10 * 8, SEEK_SET);
  const std::uint64_t expected_size =
      8 + 10 * 8 + (blocks + blocks * static_cast<std::uint64_t>(m)) * 8;
  require(file_size == expected_size, errc::corrupt_image_data,
          "sidecar size does not match its header: " + path);
  d.sums.resize(blocks);
  get(d.sums.data(), blocks * sizeof(double));
  d.weights.resize(blocks);
  for (auto& w : d.weights) {
    w.resize(m);
    get(w.data(), m * sizeof(double));
  }
  return d;
}

}  // namespace qhic
