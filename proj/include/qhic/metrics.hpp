#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qhic/errors.hpp"
#include "qhic/histogram.hpp"
#include "qhic/image.hpp"

namespace qhic {

struct FidelityReport {
  double mse = 0.0;
  double psnr_db = 0.0;  // +infinity when mse == 0
  std::optional<double> tvd;
  std::uint64_t clip_count = 0;
  std::optional<double> embed_seconds;
  std::optional<double> recon_seconds;
};

// Mean squared error over all H*W*C samples.
inline double mse(const ImageTensor& a, const ImageTensor& b) {
  require(a.height == b.height && a.width == b.width && a.channels == b.channels,
          errc::dimension_mismatch, "mse requires identical image shapes");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sq += d * d;
  }
  return sq / static_cast<double>(a.sample_count());
}

// 10*log10(MAX^2/mse) with MAX = 1.0; +infinity for a perfect reconstruction.
inline double psnr(double mse_value) {
  require(mse_value >= 0.0, errc::domain_error, "mse must be non-negative");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse_value);
}

// Total variation distance between two probability vectors.
inline double tvd(const std::vector<double>& p, const std::vector<double>& q) {
  require(p.size() == q.size(), errc::dimension_mismatch,
          "tvd requires equal-length distributions");
  double sum_p = 0.0, sum_q = 0.0, l1 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sum_p += p[k];
    sum_q += q[k];
    l1 += std::abs(p[k] - q[k]);
  }
  require(std::abs(sum_p - 1.0) <= 1e-9 && std::abs(sum_q - 1.0) <= 1e-9,
          errc::domain_error, "tvd inputs must each sum to 1");
  return l1 / 2.0;
}

// Qubit accounting for the encoding baselines. N is the pixel count.
enum class QubitMethod { frqi, neqr, ncqi, proposed };

struct QubitParams {
  std::uint64_t bit_depth = 8;  // NEQR value register width (24 for RGB)
  std::uint64_t bins = 32;      // histogram size for the proposed method
};

inline std::uint64_t qubit_accounting(std::uint64_t n_pixels, QubitMethod method,
                                      const QubitParams& params = {}) {
  switch (method) {
    case QubitMethod::frqi:
    case QubitMethod::neqr:
    case QubitMethod::ncqi: {
      require(n_pixels >= 1, errc::invalid_argument, "pixel count must be >= 1");
      const auto pos = static_cast<std::uint64_t>(detail::ceil_log2(n_pixels));
      if (method == QubitMethod::frqi) return pos + 1;
      if (method == QubitMethod::ncqi) return pos + 2;
      require(params.bit_depth >= 1, errc::invalid_argument,
              "bit depth must be >= 1");
      return pos + params.bit_depth;
    }
    case QubitMethod::proposed:
      require(params.bins >= 1, errc::invalid_argument, "bin count must be >= 1");
      return static_cast<std::uint64_t>(detail::ceil_log2(params.bins));
  }
  fail(errc::invalid_argument, "unknown qubit accounting method");
}

}  // namespace qhic
