#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qhic/errors.hpp"
#include "qhic/histogram.hpp"

// Simulated quantum backend. Amplitude embedding of a non-negative real
// vector makes computational-basis measurement an exact multinomial over
// P_k = a_k^2, so finite-shot hardware statistics are modeled by seeded
// multinomial sampling. No gate-level synthesis and no device noise.

namespace qhic {

// Name of the shot-sampling generator; recorded in reports.
inline constexpr const char* kShotGeneratorName = "mt19937_64";

struct QuantumState {
  std::int64_t qubit_count = 0;
  std::vector<double> amplitudes;  // 2^qubit_count entries, unit L2 norm
};

struct ShotRecord {
  std::uint64_t shots = 0;
  std::vector<std::uint64_t> counts;  // one per basis state
  std::uint64_t seed = 0;
};

// n = ceil(log2 B), computed in integer arithmetic.
inline std::int64_t required_qubits(std::int64_t bins) {
  require(bins >= 1, errc::invalid_argument,
          "bin count must be >= 1, got " + std::to_string(bins));
  return detail::ceil_log2(static_cast<std::uint64_t>(bins));
}

// Loads the amplitude vector as an n-qubit statevector. Rejects input whose
// squared norm deviates from 1 by more than 1e-9.
inline QuantumState embed(const AmplitudeVector& amps) {
  require(amps.amplitudes.size() == (std::size_t{1} << amps.qubit_count),
          errc::dimension_mismatch, "amplitude vector length is not 2^n");
  double norm_sq = 0.0;
  for (double a : amps.amplitudes) norm_sq += a * a;
  require(std::abs(norm_sq - 1.0) <= 1e-9, errc::domain_error,
          "norm violation: squared amplitude norm is " + std::to_string(norm_sq));
  return QuantumState{amps.qubit_count, amps.amplitudes};
}

// P_k = a_k^2.
inline std::vector<double> ideal_probabilities(const QuantumState& state) {
  std::vector<double> probs(state.amplitudes.size());
  for (std::size_t k = 0; k < probs.size(); ++k)
    probs[k] = state.amplitudes[k] * state.amplitudes[k];
  return probs;
}

// Draws `shots` computational-basis measurements: a multinomial sample of
// ideal_probabilities(state). Deterministic given (state, shots, seed); the
// generator is mt19937_64 with inverse-CDF lookup, so identical inputs give
// identical counts on every platform.
inline ShotRecord sample(const QuantumState& state, std::uint64_t shots,
                         std::uint64_t seed) {
  require(shots >= 1, errc::invalid_argument, "shot count must be >= 1");
  const std::vector<double> probs = ideal_probabilities(state);

  std::vector<double> cdf(probs.size());
  double run = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    run += probs[k];
    cdf[k] = run;
    if (probs[k] > 0.0) last_nonzero = k;
  }
  // Pin the top of the CDF so rounding slack cannot leak probability mass
  // into zero-amplitude (padded) basis states.
  for (std::size_t k = last_nonzero; k < cdf.size(); ++k) cdf[k] = 1.0;

  ShotRecord rec;
  rec.shots = shots;
  rec.seed = seed;
  rec.counts.assign(probs.size(), 0);
  std::mt19937_64 gen(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    // Uniform double in [0,1) from the top 53 bits, bit-stable everywhere.
    const double u = (gen() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++rec.counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  return rec;
}

// Scales measured frequencies back to histogram scale:
// h_hat_k = (c_k / S) * n_blocks, kept real-valued.
inline std::vector<double> estimate_histogram(const ShotRecord& rec,
                                              std::int64_t n_blocks) {
  require(n_blocks >= 1, errc::invalid_argument, "block count must be >= 1");
  std::vector<double> est(rec.counts.size());
  for (std::size_t k = 0; k < est.size(); ++k)
    est[k] = static_cast<double>(rec.counts[k] * static_cast<std::uint64_t>(n_blocks)) /
             static_cast<double>(rec.shots);
  return est;
}

// Same scaling applied to an ideal probability vector (the no-sampling path).
inline std::vector<double> estimate_histogram(const std::vector<double>& probs,
                                              std::int64_t n_blocks) {
  require(n_blocks >= 1, errc::invalid_argument, "block count must be >= 1");
  std::vector<double> est(probs.size());
  for (std::size_t k = 0; k < est.size(); ++k)
    est[k] = probs[k] * static_cast<double>(n_blocks);
  return est;
}

}  // namespace qhic
