#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qhic/bixel.hpp"
#include "qhic/errors.hpp"
#include "qhic/histogram.hpp"
#include "qhic/image.hpp"

namespace qhic {

struct ReconstructionResult {
  ImageTensor image;                       // cropped to the original size
  std::vector<double> reconstructed_sums;  // S'_b per block
  std::uint64_t clip_count = 0;            // pixels clamped into [0,1]
};

// S'_b = center of the bin each block was originally assigned to.
inline std::vector<double> reconstruct_sums(const BinnedHistogram& hist) {
  std::vector<double> centers(static_cast<std::size_t>(hist.bin_count));
  for (std::int64_t k = 0; k < hist.bin_count; ++k)
    centers[static_cast<std::size_t>(k)] = bin_center(hist, k);
  std::vector<double> sums;
  sums.reserve(hist.assignments.size());
  for (std::int64_t k : hist.assignments)
    sums.push_back(centers[static_cast<std::size_t>(k)]);
  return sums;
}

struct RedistributeResult {
  std::vector<std::vector<double>> blocks;
  std::uint64_t clip_count = 0;
};

// r_i = w_i * S'_b, clamped into [0,1] with the clamped pixels counted.
// Zero-sum blocks carry all-zero weights and so come back all zero no matter
// what sum the histogram hands them.
inline RedistributeResult redistribute(const std::vector<std::vector<double>>& weights,
                                       const std::vector<double>& sums) {
  require(weights.size() == sums.size(), errc::dimension_mismatch,
          "one weight vector per sum required: " + std::to_string(weights.size()) +
              " vs " + std::to_string(sums.size()));
  RedistributeResult out;
  out.blocks.reserve(weights.size());
  for (std::size_t b = 0; b < weights.size(); ++b) {
    const auto& w = weights[b];
    std::vector<double> block(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double r = w[i] * sums[b];
      if (r > 1.0) {
        r = 1.0;
        ++out.clip_count;
      } else if (r < 0.0) {
        r = 0.0;
        ++out.clip_count;
      }
      block[i] = r;
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

// Redistributes the given per-block sums through the stored weights,
// reassembles the padded image, and crops back to the original dimensions.
inline ReconstructionResult reconstruct_image_from_sums(
    const BlockDecomposition& decomp, std::vector<double> sums) {
  require(static_cast<std::int64_t>(sums.size()) == decomp.block_count(),
          errc::dimension_mismatch, "one reconstructed sum per block required");
  RedistributeResult red = redistribute(decomp.weights, sums);
  ImageTensor padded = reassemble(decomp, red.blocks);
  ReconstructionResult res;
  res.image = crop(padded, decomp.pad);
  res.reconstructed_sums = std::move(sums);
  res.clip_count = red.clip_count;
  return res;
}

inline ReconstructionResult reconstruct_image(const BlockDecomposition& decomp,
                                              const BinnedHistogram& hist) {
  require(static_cast<std::int64_t>(hist.assignments.size()) == decomp.block_count(),
          errc::dimension_mismatch,
          "histogram assignments do not cover every block");
  return reconstruct_image_from_sums(decomp, reconstruct_sums(hist));
}

}  // namespace qhic
