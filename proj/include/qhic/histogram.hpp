#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qhic/errors.hpp"

namespace qhic {

// Uniform-width histogram of block sums. Edges satisfy
// edges[k] = lo + (hi - lo) * k / B; a sum that lands exactly on an interior
// edge is assigned to the lower-indexed bin, so the range maximum belongs to
// the last bin. The degenerate lo == hi case puts everything in bin 0.
struct BinnedHistogram {
  std::int64_t bin_count = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> edges;             // bin_count + 1 values
  std::vector<std::int64_t> counts;      // bin_count values
  std::vector<std::int64_t> assignments; // one bin index per block
};

// Square-root-normalized histogram, zero-padded to the next power of two.
struct AmplitudeVector {
  std::int64_t qubit_count = 0;
  std::vector<double> amplitudes;  // 2^qubit_count entries
};

namespace detail {

// Smallest n with 2^n >= value; integer arithmetic only.
inline std::int64_t ceil_log2(std::uint64_t value) {
  std::int64_t n = 0;
  while ((std::uint64_t{1} << n) < value) ++n;
  return n;
}

inline std::int64_t assign_bin(double s, double lo, double hi,
                               std::int64_t bins, const std::vector<double>& edges) {
  if (hi == lo) return 0;
  const double width = (hi - lo) / bins;
  auto k = static_cast<std::int64_t>(std::ceil((s - lo) / width)) - 1;
  k = std::max<std::int64_t>(0, std::min(bins - 1, k));
  // Fix up floating-point edge cases; interior-edge ties go to the lower bin.
  while (k > 0 && s <= edges[static_cast<std::size_t>(k)]) --k;
  while (k < bins - 1 && s > edges[static_cast<std::size_t>(k + 1)]) ++k;
  return k;
}

}  // namespace detail

// Builds a histogram with an explicit bin range. The data-driven variant
// below is the default; [lo, hi] = [0, M] gives the full theoretical range.
inline BinnedHistogram build_histogram(const std::vector<double>& sums,
                                       std::int64_t bins, double lo, double hi) {
  require(bins >= 1, errc::invalid_argument,
          "bin count must be >= 1, got " + std::to_string(bins));
  require(!sums.empty(), errc::invalid_argument,
          "cannot build a histogram from zero blocks");
  require(lo <= hi, errc::invalid_argument, "bin range lower bound exceeds upper");
  for (double s : sums)
    require(lo <= s && s <= hi, errc::domain_error,
            "block sum " + std::to_string(s) + " outside bin range");

  BinnedHistogram h;
  h.bin_count = bins;
  h.lo = lo;
  h.hi = hi;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (std::int64_t k = 0; k <= bins; ++k)
    h.edges[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / bins;
  // Pin the outer edges: (hi-lo)*B/B can round below hi, which would leave
  // the range maximum outside the last bin.
  h.edges.front() = lo;
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.assignments.reserve(sums.size());
  for (double s : sums) {
    const std::int64_t k = detail::assign_bin(s, lo, hi, bins, h.edges);
    h.assignments.push_back(k);
    ++h.counts[static_cast<std::size_t>(k)];
  }
  return h;
}

// Data-driven bin range [min(sums), max(sums)]: the minimum falls in bin 0
// and the maximum in bin B-1.
inline BinnedHistogram build_histogram(const std::vector<double>& sums,
                                       std::int64_t bins) {
  require(!sums.empty(), errc::invalid_argument,
          "cannot build a histogram from zero blocks");
  const auto [lo_it, hi_it] = std::minmax_element(sums.begin(), sums.end());
  return build_histogram(sums, bins, *lo_it, *hi_it);
}

// a_k = sqrt(h_k) / sqrt(sum h), zero-padded to 2^n with n = ceil(log2 B).
// B = 1 yields the trivial single-amplitude state (n = 0).
inline AmplitudeVector to_amplitudes(const BinnedHistogram& hist) {
  std::int64_t total = 0;
  for (std::int64_t c : hist.counts) total += c;
  require(total > 0, errc::domain_error, "histogram has no counts");

  AmplitudeVector amps;
  amps.qubit_count = detail::ceil_log2(static_cast<std::uint64_t>(hist.bin_count));
  amps.amplitudes.assign(std::size_t{1} << amps.qubit_count, 0.0);
  const double norm = std::sqrt(static_cast<double>(total));
  for (std::int64_t k = 0; k < hist.bin_count; ++k)
    amps.amplitudes[static_cast<std::size_t>(k)] =
        std::sqrt(static_cast<double>(hist.counts[static_cast<std::size_t>(k)])) / norm;
  return amps;
}

// Midpoint of bin k; the common edge value for a degenerate histogram.
inline double bin_center(const BinnedHistogram& hist, std::int64_t k) {
  require(k >= 0 && k < hist.bin_count, errc::invalid_argument,
          "bin index " + std::to_string(k) + " out of range");
  return (hist.edges[static_cast<std::size_t>(k)] +
          hist.edges[static_cast<std::size_t>(k + 1)]) / 2.0;
}

}  // namespace qhic
