#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "qhic/errors.hpp"

namespace qhic {

// H x W x C tensor of intensities in [0,1], stored row-major as
// (row, column, channel). This flattening order is the canonical one for
// every downstream operation, including per-block weight vectors.
struct ImageTensor {
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::int64_t channels = 0;  // 1 (grayscale) or 3 (RGB)
  std::vector<double> data;

  std::int64_t sample_count() const { return height * width * channels; }

  double& at(std::int64_t r, std::int64_t c, std::int64_t ch) {
    return data[(r * width + c) * channels + ch];
  }
  double at(std::int64_t r, std::int64_t c, std::int64_t ch) const {
    return data[(r * width + c) * channels + ch];
  }
};

// Original vs. padded extents of an image that was zero-padded so each
// dimension became a multiple of the bixel size.
struct PadRecord {
  std::int64_t original_height = 0;
  std::int64_t original_width = 0;
  std::int64_t padded_height = 0;
  std::int64_t padded_width = 0;
};

inline ImageTensor make_image(std::int64_t height, std::int64_t width,
                              std::int64_t channels) {
  require(height >= 1 && width >= 1, errc::invalid_argument,
          "image dimensions must be >= 1");
  require(channels == 1 || channels == 3, errc::invalid_argument,
          "channel count must be 1 or 3");
  ImageTensor img;
  img.height = height;
  img.width = width;
  img.channels = channels;
  img.data.assign(static_cast<std::size_t>(height * width * channels), 0.0);
  return img;
}

namespace detail {

// Smallest multiple of `step` that is >= extent.
inline std::int64_t padded_extent(std::int64_t extent, std::int64_t step) {
  return ((extent + step - 1) / step) * step;
}

}  // namespace detail

// Zero-pads on the bottom/right so both dimensions become multiples of the
// bixel size. Original content stays bit-identical in the top-left region.
inline std::pair<ImageTensor, PadRecord> pad_to_grid(const ImageTensor& img,
                                                     std::int64_t bixel_h,
                                                     std::int64_t bixel_w) {
  require(bixel_h >= 1 && bixel_w >= 1, errc::invalid_argument,
          "bixel dimensions must be >= 1");
  PadRecord pad;
  pad.original_height = img.height;
  pad.original_width = img.width;
  pad.padded_height = detail::padded_extent(img.height, bixel_h);
  pad.padded_width = detail::padded_extent(img.width, bixel_w);

  if (pad.padded_height == img.height && pad.padded_width == img.width)
    return {img, pad};

  ImageTensor out = make_image(pad.padded_height, pad.padded_width, img.channels);
  const std::int64_t row_samples = img.width * img.channels;
  for (std::int64_t r = 0; r < img.height; ++r) {
    const double* src = img.data.data() + r * row_samples;
    double* dst = out.data.data() + r * pad.padded_width * img.channels;
    std::copy(src, src + row_samples, dst);
  }
  return {std::move(out), pad};
}

// Removes padding: returns the top-left original_height x original_width
// region. crop(pad_to_grid(x)) == x exactly.
inline ImageTensor crop(const ImageTensor& img, const PadRecord& pad) {
  require(img.height == pad.padded_height && img.width == pad.padded_width,
          errc::dimension_mismatch,
          "image dimensions do not match the pad record");
  if (pad.original_height == pad.padded_height &&
      pad.original_width == pad.padded_width)
    return img;

  ImageTensor out =
      make_image(pad.original_height, pad.original_width, img.channels);
  const std::int64_t row_samples = out.width * out.channels;
  for (std::int64_t r = 0; r < out.height; ++r) {
    const double* src = img.data.data() + r * img.width * img.channels;
    std::copy(src, src + row_samples, out.data.data() + r * row_samples);
  }
  return out;
}

}  // namespace qhic
