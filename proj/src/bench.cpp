#include "mde/bench.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "mde/data.hpp"
#include "mde/error.hpp"
#include "mde/rng.hpp"

namespace mde {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

}  // namespace

std::vector<TimingRecord> run_timing_sweep(const SweepConfig& config) {
  if (config.feature_counts.empty()) throw ParameterError("timing sweep needs at least one feature count");
  if (!std::is_sorted(config.feature_counts.begin(), config.feature_counts.end())) {
    throw ParameterError("feature counts must be ascending");
  }
  if (config.repeats < 1) throw ParameterError("timing sweep needs repeats >= 1");

  std::vector<TimingRecord> records;
  for (std::size_t point = 0; point < config.feature_counts.size(); ++point) {
    const std::size_t n_features = config.feature_counts[point];
    const Dataset ds = generate_synthetic(config.n_samples, n_features, derive_seed(config.seed, point));

    TimingRecord rec;
    rec.encoder = config.encoder;
    rec.n_features = n_features;
    rec.n_samples = config.n_samples;

    EncoderParams params = config.params;
    if (config.budget_secs > 0.0) params.igtd.budget_secs = config.budget_secs;
    const auto point_start = Clock::now();
    const auto model = fit_encoder(config.encoder, ds, params);
    rec.fit_time = seconds_since(point_start);
    if (const auto* mapping = std::get_if<IgtdMapping>(&model.layout); mapping && mapping->truncated) {
      rec.truncated = true;
    }

    encode_rows(model, ds.X, 1);  // warm-up, untimed
    std::vector<double> times;
    times.reserve(config.repeats);
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const auto start = Clock::now();
      encode_rows(model, ds.X, 1);
      times.push_back(seconds_since(start));
      if (config.budget_secs > 0.0 && seconds_since(point_start) > config.budget_secs &&
          r + 1 < config.repeats) {
        rec.truncated = true;
        break;
      }
    }
    rec.repeats = times.size();
    rec.encode_time = median(std::move(times));
    records.push_back(rec);
  }
  return records;
}

LinearFit linear_least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("x and y differ in length");
  if (x.size() < 3) throw FitError("linearity fit needs at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("linearity fit needs at least two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 0.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

LinearFit linearity_fit(const std::vector<TimingRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    x.push_back(static_cast<double>(r.n_features));
    y.push_back(r.encode_time);
  }
  return linear_least_squares(x, y);
}

}  // namespace mde
