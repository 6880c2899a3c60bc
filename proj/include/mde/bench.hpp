#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mde/encoders.hpp"

namespace mde {

struct TimingRecord {
  EncoderKind encoder = EncoderKind::Retire;
  std::size_t n_features = 0;
  /// Median wall time, in seconds, to encode the whole sample batch.
  double encode_time = 0.0;
  /// Time spent fitting the encoder (the IGTD search dominates this).
  double fit_time = 0.0;
  std::size_t repeats = 0;
  std::size_t n_samples = 0;
  /// The point hit the time budget; fewer repeats than requested were run.
  bool truncated = false;
};

struct SweepConfig {
  EncoderKind encoder = EncoderKind::Retire;
  std::vector<std::size_t> feature_counts{10, 25, 50, 100, 200, 350, 500};
  std::size_t n_samples = 100;
  std::size_t repeats = 100;
  std::uint64_t seed = 0;
  /// Per sweep point, seconds; 0 disables the limit.
  double budget_secs = 120.0;
  EncoderParams params;
};

/// For each feature count: generate a synthetic dataset, fit, run one
/// untimed warm-up batch, then time `repeats` single-threaded batch encodes
/// on a monotonic clock and keep the median.
std::vector<TimingRecord> run_timing_sweep(const SweepConfig& config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of encode_time on n_features. Constant times give
/// slope 0 and r^2 = 0. Needs at least 3 records with distinct feature counts.
LinearFit linearity_fit(const std::vector<TimingRecord>& records);
LinearFit linear_least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mde
