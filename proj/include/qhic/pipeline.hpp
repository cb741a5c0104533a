#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhic/backend.hpp"
#include "qhic/bixel.hpp"
#include "qhic/errors.hpp"
#include "qhic/histogram.hpp"
#include "qhic/image.hpp"
#include "qhic/image_io.hpp"
#include "qhic/metrics.hpp"
#include "qhic/reconstruct.hpp"
#include "qhic/sidecar.hpp"

// End-to-end drivers shared by the CLI and the test suites:
// load -> pad -> decompose -> histogram -> amplitudes -> embed ->
// (sample) -> reconstruct -> crop -> save, plus the bin-count sweep.

namespace qhic {

enum class BackendMode { ideal, sampled };
enum class BinRangeMode { data, full };
enum class ReconMode { paper, measured };

inline const char* to_string(BackendMode m) {
  return m == BackendMode::ideal ? "ideal" : "sampled";
}
inline const char* to_string(BinRangeMode m) {
  return m == BinRangeMode::data ? "data" : "full";
}
inline const char* to_string(ReconMode m) {
  return m == ReconMode::paper ? "paper" : "measured";
}

struct RunConfig {
  std::string input;
  std::string output;       // reconstructed PNG path
  std::string report_path;  // JSON or CSV report path
  std::string report_format = "json";
  std::string sidecar;      // optional block-decomposition dump
  std::int64_t bixel_h = 32;
  std::int64_t bixel_w = 32;
  std::int64_t bins = 32;
  BackendMode backend = BackendMode::sampled;
  std::uint64_t shots = 4096;
  std::uint64_t seed = 0;
  BinRangeMode bin_range = BinRangeMode::data;
  ReconMode recon = ReconMode::paper;
  bool include_timings = true;
};

struct CompressResult {
  RunConfig config;
  std::int64_t height = 0, width = 0, channels = 0;
  PadRecord pad;
  std::int64_t grid_rows = 0, grid_cols = 0;
  std::int64_t blocks = 0, block_len = 0;
  BinnedHistogram hist;
  AmplitudeVector amps;
  std::vector<double> probabilities;      // ideal P_k
  std::optional<ShotRecord> shot_record;  // sampled backend only
  std::vector<double> estimated_counts;   // h_hat over all 2^n outcomes
  std::vector<double> bin_centers;
  std::vector<double> reconstructed_sums;
  ImageTensor reconstructed_image;  // cropped to the original size
  FidelityReport fidelity;
  double mse_bound = 0.0;  // ((hi - lo) / 2B)^2, the quantization limit
  bool mse_within_bound = false;
  std::uint64_t original_bytes = 0;
  std::uint64_t reconstructed_bytes = 0;
};

struct SweepRow {
  std::int64_t bins = 0;
  std::int64_t qubits = 0;
  double mse = 0.0;
  double psnr_db = 0.0;
  std::optional<double> tvd;
  double embed_s = 0.0;
  double recon_s = 0.0;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace detail

// Runs histogram encoding, embedding, measurement, and reconstruction on an
// already-decomposed image. Performs no file I/O; the caller owns that.
inline CompressResult compress_from_decomposition(const RunConfig& config,
                                                  const ImageTensor& original,
                                                  const BlockDecomposition& decomp) {
  require(config.bins >= 1, errc::invalid_argument, "bin count must be >= 1");

  CompressResult res;
  res.config = config;
  res.height = original.height;
  res.width = original.width;
  res.channels = original.channels;
  res.pad = decomp.pad;
  res.grid_rows = decomp.grid_rows;
  res.grid_cols = decomp.grid_cols;
  res.blocks = decomp.block_count();
  res.block_len = decomp.block_len();

  if (config.bin_range == BinRangeMode::data) {
    res.hist = build_histogram(decomp.sums, config.bins);
  } else {
    // Full theoretical range: sums of M samples in [0,1] lie in [0, M].
    res.hist = build_histogram(decomp.sums, config.bins, 0.0,
                               static_cast<double>(decomp.block_len()));
  }

  const auto embed_start = std::chrono::steady_clock::now();
  res.amps = to_amplitudes(res.hist);
  const QuantumState state = embed(res.amps);
  res.probabilities = ideal_probabilities(state);
  if (config.backend == BackendMode::sampled) {
    res.shot_record = sample(state, config.shots, config.seed);
    res.estimated_counts = estimate_histogram(*res.shot_record, res.blocks);
  } else {
    res.estimated_counts = estimate_histogram(res.probabilities, res.blocks);
  }
  const double embed_s = detail::seconds_since(embed_start);

  const auto recon_start = std::chrono::steady_clock::now();
  res.bin_centers.resize(static_cast<std::size_t>(res.hist.bin_count));
  for (std::int64_t k = 0; k < res.hist.bin_count; ++k)
    res.bin_centers[static_cast<std::size_t>(k)] = bin_center(res.hist, k);

  std::vector<double> sums = reconstruct_sums(res.hist);
  if (config.recon == ReconMode::measured) {
    // Labeled extension: scale each block's center by the measured-to-exact
    // count ratio of its bin. Assigned bins always have a nonzero count.
    for (std::size_t b = 0; b < sums.size(); ++b) {
      const auto k = static_cast<std::size_t>(res.hist.assignments[b]);
      sums[b] *= res.estimated_counts[k] /
                 static_cast<double>(res.hist.counts[k]);
    }
  }

  // Scale each block of the original by S'_b / S_b. Algebraically this is
  // the stored-weight redistribution (w_i = p_i / S_b), but the ratio form
  // recovers a block bit-exactly when its reconstructed sum equals the
  // stored sum, so lossless quantization yields a lossless image. Padding
  // lies outside the original extents, which crops it implicitly.
  ImageTensor recon_img =
      make_image(original.height, original.width, original.channels);
  std::uint64_t clip_count = 0;
  for (std::int64_t r = 0; r < original.height; ++r) {
    const std::int64_t block_row = r / decomp.bixel_h;
    for (std::int64_t c = 0; c < original.width; ++c) {
      const auto b = static_cast<std::size_t>(block_row * decomp.grid_cols +
                                              c / decomp.bixel_w);
      if (decomp.sums[b] <= 0.0) continue;  // zero-sum sentinel: stay black
      const double ratio = sums[b] / decomp.sums[b];
      for (std::int64_t ch = 0; ch < original.channels; ++ch) {
        double v = original.at(r, c, ch) * ratio;
        if (v > 1.0) {
          v = 1.0;
          ++clip_count;
        } else if (v < 0.0) {
          v = 0.0;
          ++clip_count;
        }
        recon_img.at(r, c, ch) = v;
      }
    }
  }
  const double recon_s = detail::seconds_since(recon_start);

  res.reconstructed_sums = std::move(sums);
  res.fidelity.mse = mse(original, recon_img);
  res.fidelity.psnr_db = psnr(res.fidelity.mse);
  res.fidelity.clip_count = clip_count;
  const double half_width =
      (res.hist.hi - res.hist.lo) / (2.0 * static_cast<double>(config.bins));
  res.mse_bound = half_width * half_width;
  res.mse_within_bound = res.fidelity.mse <= res.mse_bound;
  if (res.shot_record) {
    std::vector<double> empirical(res.shot_record->counts.size());
    for (std::size_t k = 0; k < empirical.size(); ++k)
      empirical[k] = static_cast<double>(res.shot_record->counts[k]) /
                     static_cast<double>(res.shot_record->shots);
    res.fidelity.tvd = tvd(empirical, res.probabilities);
  }
  if (config.include_timings) {
    res.fidelity.embed_seconds = embed_s;
    res.fidelity.recon_seconds = recon_s;
  }

  res.reconstructed_image = std::move(recon_img);
  return res;
}

// Full single-image pipeline including file I/O: reads config.input, writes
// the reconstructed PNG to config.output, optionally dumps the sidecar.
inline CompressResult run_compress(const RunConfig& config) {
  const ImageTensor img = load_image(config.input);
  auto [padded, pad] = pad_to_grid(img, config.bixel_h, config.bixel_w);
  const BlockDecomposition decomp =
      decompose(padded, config.bixel_h, config.bixel_w, pad);
  if (!config.sidecar.empty()) save_sidecar(decomp, config.sidecar);

  CompressResult res = compress_from_decomposition(config, img, decomp);
  res.original_bytes =
      static_cast<std::uint64_t>(std::filesystem::file_size(config.input));
  if (!config.output.empty())
    res.reconstructed_bytes = save_image(res.reconstructed_image, config.output);
  return res;
}

// Re-runs the encode/reconstruct stages once per requested bin count with a
// shared decomposition. Each row's seed is derived as seed XOR bins so rows
// are independent of evaluation order.
inline std::vector<SweepRow> run_sweep(const RunConfig& config,
                                       const std::vector<std::int64_t>& bins_list) {
  require(!bins_list.empty(), errc::invalid_argument, "empty bin list");
  for (std::int64_t b : bins_list)
    require(b >= 1, errc::invalid_argument, "bin count must be >= 1");

  const ImageTensor img = load_image(config.input);
  auto [padded, pad] = pad_to_grid(img, config.bixel_h, config.bixel_w);
  const BlockDecomposition decomp =
      decompose(padded, config.bixel_h, config.bixel_w, pad);

  std::vector<SweepRow> rows;
  rows.reserve(bins_list.size());
  for (std::int64_t bins : bins_list) {
    RunConfig row_config = config;
    row_config.bins = bins;
    row_config.seed = config.seed ^ static_cast<std::uint64_t>(bins);
    row_config.include_timings = true;
    const CompressResult r = compress_from_decomposition(row_config, img, decomp);
    SweepRow row;
    row.bins = bins;
    row.qubits = r.amps.qubit_count;
    row.mse = r.fidelity.mse;
    row.psnr_db = r.fidelity.psnr_db;
    row.tvd = r.fidelity.tvd;
    row.embed_s = r.fidelity.embed_seconds.value_or(0.0);
    row.recon_s = r.fidelity.recon_seconds.value_or(0.0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qhic
