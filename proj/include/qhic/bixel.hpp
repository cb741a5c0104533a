#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qhic/errors.hpp"
#include "qhic/image.hpp"

namespace qhic {

// Per-block summary of a padded image: each bixel's intensity sum S_b and
// its normalized weight vector w_b (one weight per sample, flattened
// row-major as row, column, channel). Blocks are enumerated row-major over
// the grid. Zero-sum blocks keep an all-zero weight vector as a sentinel so
// reconstruction gives back an exactly black block.
struct BlockDecomposition {
  std::int64_t bixel_h = 0;
  std::int64_t bixel_w = 0;
  std::int64_t grid_rows = 0;
  std::int64_t grid_cols = 0;
  std::int64_t channels = 0;
  std::vector<double> sums;                  // one per block
  std::vector<std::vector<double>> weights;  // one length-M vector per block
  PadRecord pad;

  std::int64_t block_count() const { return grid_rows * grid_cols; }
  std::int64_t block_len() const { return bixel_h * bixel_w * channels; }
};

inline BlockDecomposition decompose(const ImageTensor& img, std::int64_t bixel_h,
                                    std::int64_t bixel_w, const PadRecord& pad) {
  require(bixel_h >= 1 && bixel_w >= 1, errc::invalid_argument,
          "bixel dimensions must be >= 1");
  require(img.height % bixel_h == 0 && img.width % bixel_w == 0,
          errc::dimension_mismatch,
          "image dimensions are not multiples of the bixel size");
  require(img.height == pad.padded_height && img.width == pad.padded_width,
          errc::dimension_mismatch,
          "image dimensions do not match the pad record");

  BlockDecomposition d;
  d.bixel_h = bixel_h;
  d.bixel_w = bixel_w;
  d.grid_rows = img.height / bixel_h;
  d.grid_cols = img.width / bixel_w;
  d.channels = img.channels;
  d.pad = pad;

  const std::int64_t m = d.block_len();
  d.sums.reserve(static_cast<std::size_t>(d.block_count()));
  d.weights.reserve(static_cast<std::size_t>(d.block_count()));

  std::vector<double> block(static_cast<std::size_t>(m));
  for (std::int64_t br = 0; br < d.grid_rows; ++br) {
    for (std::int64_t bc = 0; bc < d.grid_cols; ++bc) {
      std::int64_t i = 0;
      double sum = 0.0;
      for (std::int64_t r = br * bixel_h; r < (br + 1) * bixel_h; ++r) {
        for (std::int64_t c = bc * bixel_w; c < (bc + 1) * bixel_w; ++c) {
          for (std::int64_t ch = 0; ch < img.channels; ++ch) {
            const double p = img.at(r, c, ch);
            block[static_cast<std::size_t>(i++)] = p;
            sum += p;
          }
        }
      }
      std::vector<double> w(static_cast<std::size_t>(m), 0.0);
      if (sum > 0.0) {
        for (std::int64_t k = 0; k < m; ++k)
          w[static_cast<std::size_t>(k)] =
              block[static_cast<std::size_t>(k)] / sum;
      }
      d.sums.push_back(sum);
      d.weights.push_back(std::move(w));
    }
  }
  return d;
}

// Inverse of the block enumeration/flattening used by decompose: places one
// length-M pixel vector per block back into a padded image.
inline ImageTensor reassemble(const BlockDecomposition& decomp,
                              const std::vector<std::vector<double>>& block_pixels) {
  require(static_cast<std::int64_t>(block_pixels.size()) == decomp.block_count(),
          errc::dimension_mismatch,
          "block count mismatch: expected " + std::to_string(decomp.block_count()) +
              ", got " + std::to_string(block_pixels.size()));
  const std::int64_t m = decomp.block_len();
  for (const auto& b : block_pixels)
    require(static_cast<std::int64_t>(b.size()) == m, errc::dimension_mismatch,
            "block length mismatch: expected " + std::to_string(m) + ", got " +
                std::to_string(b.size()));

  ImageTensor img = make_image(decomp.grid_rows * decomp.bixel_h,
                               decomp.grid_cols * decomp.bixel_w, decomp.channels);
  for (std::int64_t br = 0; br < decomp.grid_rows; ++br) {
    for (std::int64_t bc = 0; bc < decomp.grid_cols; ++bc) {
      const auto& block =
          block_pixels[static_cast<std::size_t>(br * decomp.grid_cols + bc)];
      std::int64_t i = 0;
      for (std::int64_t r = br * decomp.bixel_h; r < (br + 1) * decomp.bixel_h; ++r)
        for (std::int64_t c = bc * decomp.bixel_w; c < (bc + 1) * decomp.bixel_w; ++c)
          for (std::int64_t ch = 0; ch < decomp.channels; ++ch)
            img.at(r, c, ch) = block[static_cast<std::size_t>(i++)];
    }
  }
  return img;
}

}  // namespace qhic
