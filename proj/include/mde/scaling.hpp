#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mde/data.hpp"

namespace mde {

inline constexpr double kDefaultLower = 0.05;
inline constexpr double kDefaultUpper = 0.95;

/// Per-feature min/max learned from a training matrix plus the guard bounds
/// (l, u) the observed range is mapped onto.
struct ScalerParams {
  /// Column order the parameters apply to; may be empty when fitted on a bare matrix.
  std::vector<std::string> feature_names;
  std::vector<double> mins;
  std::vector<double> maxs;
  double l = kDefaultLower;
  double u = kDefaultUpper;
  /// FNV-1a hash of the training matrix the parameters were fitted on.
  std::uint64_t fit_fingerprint = 0;

  std::size_t n_features() const noexcept { return mins.size(); }

  bool operator==(const ScalerParams&) const = default;
};

/// Column-wise extrema of `X_train`. Requires a non-empty matrix and 0 <= l < u <= 1.
ScalerParams fit_scaler(const Matrix& X_train, double l = kDefaultLower, double u = kDefaultUpper);

/// S(x_f) = (x_f - min_f) / (max_f - min_f) * (u - l) + l, clamped to [0, 1].
/// Constant training columns map to (l + u) / 2. Inputs inside the fitted
/// range are additionally held to [l, u] so rounding never leaves the guard band.
std::vector<double> transform(const ScalerParams& p, std::span<const double> x);
void transform_into(const ScalerParams& p, std::span<const double> x, std::span<double> out);

Matrix transform_rows(const ScalerParams& p, const Matrix& X);

std::uint64_t fingerprint(const Matrix& X) noexcept;

}  // namespace mde
