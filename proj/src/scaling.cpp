#include "mde/scaling.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "mde/error.hpp"

namespace mde {

std::uint64_t fingerprint(const Matrix& X) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t shape[2] = {X.rows(), X.cols()};
  mix(shape, sizeof shape);
  const auto values = X.values();
  mix(values.data(), values.size_bytes());
  return h;
}

ScalerParams fit_scaler(const Matrix& X_train, double l, double u) {
  if (!(l >= 0.0 && u <= 1.0 && l < u)) {
    throw ParameterError("scaling bounds must satisfy 0 <= l < u <= 1 (got l=" +
                         std::to_string(l) + ", u=" + std::to_string(u) + ")");
  }
  if (X_train.rows() == 0 || X_train.cols() == 0) throw FitError("cannot fit scaler on an empty matrix");

  ScalerParams p;
  p.l = l;
  p.u = u;
  const auto first = X_train.row(0);
  p.mins.assign(first.begin(), first.end());
  p.maxs.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < X_train.rows(); ++r) {
    const auto row = X_train.row(r);
    for (std::size_t f = 0; f < row.size(); ++f) {
      p.mins[f] = std::min(p.mins[f], row[f]);
      p.maxs[f] = std::max(p.maxs[f], row[f]);
    }
  }
  p.fit_fingerprint = fingerprint(X_train);
  return p;
}

void transform_into(const ScalerParams& p, std::span<const double> x, std::span<double> out) {
  if (x.size() != p.n_features() || out.size() != x.size()) {
    throw ShapeError("expected " + std::to_string(p.n_features()) + " features, got " +
                     std::to_string(x.size()));
  }
  const double span_lu = p.u - p.l;
  const double mid = (p.l + p.u) / 2.0;
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double lo = p.mins[f];
    const double hi = p.maxs[f];
    if (hi == lo) {
      out[f] = mid;
      continue;
    }
    const double t = (x[f] - lo) / (hi - lo);
    double s = std::clamp(t * span_lu + p.l, 0.0, 1.0);
    if (x[f] >= lo && x[f] <= hi) s = std::clamp(s, p.l, p.u);
    out[f] = s;
  }
}

std::vector<double> transform(const ScalerParams& p, std::span<const double> x) {
  std::vector<double> out(x.size());
  transform_into(p, x, out);
  return out;
}

Matrix transform_rows(const ScalerParams& p, const Matrix& X) {
  Matrix out(X.rows(), X.cols());
  for (std::size_t r = 0; r < X.rows(); ++r) transform_into(p, X.row(r), out.row(r));
  return out;
}

}  // namespace mde
