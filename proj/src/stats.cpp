#include "mde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "mde/error.hpp"
#include "mde/ranking.hpp"

namespace mde {

PairedCVScores PairedCVScores::from(std::span<const double> a, std::span<const double> b) {
  if (a.size() != 10 || b.size() != 10) {
    throw ShapeError("5x2 CV scores need exactly 10 values per method (got " + std::to_string(a.size()) +
                     " and " + std::to_string(b.size()) + ")");
  }
  PairedCVScores s;
  std::copy(a.begin(), a.end(), s.a.begin());
  std::copy(b.begin(), b.end(), s.b.begin());
  return s;
}

FTestResult combined_5x2cv_f_test(const PairedCVScores& s, double alpha) {
  double numerator = 0.0;
  double variance_sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double p1 = s.a[2 * i] - s.b[2 * i];
    const double p2 = s.a[2 * i + 1] - s.b[2 * i + 1];
    const double mean = (p1 + p2) / 2.0;
    numerator += p1 * p1 + p2 * p2;
    variance_sum += (p1 - mean) * (p1 - mean) + (p2 - mean) * (p2 - mean);
  }
  FTestResult r;
  if (numerator == 0.0) {
    r.f = std::numeric_limits<double>::quiet_NaN();
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  if (variance_sum == 0.0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.significant = true;
    r.degenerate = true;
    return r;
  }
  r.f = numerator / (2.0 * variance_sum);
  r.p_value = f_distribution_sf(r.f, 10.0, 5.0);
  r.significant = r.p_value < alpha;
  return r;
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ParameterError("incomplete beta needs a, b > 0");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double x, double d1, double d2) {
  if (!(d1 >= 1.0 && d2 >= 1.0)) throw ParameterError("F distribution degrees of freedom must be >= 1");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return regularized_incomplete_beta(d2 / (d2 + d1 * x), d2 / 2.0, d1 / 2.0);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw ShapeError("Wilcoxon needs paired samples of equal length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  const std::size_t n = diffs.size();
  if (n < 5) {
    throw InsufficientDataError("Wilcoxon needs at least 5 non-zero differences (got " + std::to_string(n) + ")");
  }
  std::vector<double> magnitude(n);
  std::transform(diffs.begin(), diffs.end(), magnitude.begin(), [](double d) { return std::fabs(d); });
  const auto ranks = doubled_average_ranks(magnitude);

  std::int64_t plus2 = 0;
  std::int64_t minus2 = 0;
  for (std::size_t i = 0; i < n; ++i) (diffs[i] > 0 ? plus2 : minus2) += ranks[i];
  const std::int64_t w2 = std::min(plus2, minus2);

  WilcoxonResult r;
  r.n = n;
  r.w_plus = static_cast<double>(plus2) / 2.0;
  r.w_minus = static_cast<double>(minus2) / 2.0;
  r.w = static_cast<double>(w2) / 2.0;

  if (n <= kWilcoxonExactLimit) {
    // counts[s]: sign assignments whose positive-rank sum (doubled) equals s
    const auto total2 = static_cast<std::size_t>(plus2 + minus2);
    std::vector<std::uint64_t> counts(total2 + 1, 0);
    counts[0] = 1;
    for (auto rk : ranks) {
      const auto step = static_cast<std::size_t>(rk);
      for (std::size_t s = total2; s >= step; --s) {
        counts[s] += counts[s - step];
        if (s == step) break;
      }
    }
    std::uint64_t extreme = 0;
    for (std::size_t s = 0; s <= total2; ++s) {
      const auto other = static_cast<std::int64_t>(total2 - s);
      if (std::min(static_cast<std::int64_t>(s), other) <= w2) extreme += counts[s];
    }
    r.p_value = static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(n));
    r.exact = true;
  } else {
    const double nn = static_cast<double>(n);
    double tie_term = 0.0;
    std::vector<double> sorted = magnitude;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (r.w - mean) / std::sqrt(var);
    r.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
  }
  r.significant = r.p_value < alpha;
  return r;
}

std::vector<double> mean_ranks(const std::vector<std::vector<double>>& scores) {
  if (scores.empty() || scores.front().empty()) throw ShapeError("mean_ranks needs a non-empty score matrix");
  const std::size_t methods = scores.front().size();
  std::vector<double> sum(methods, 0.0);
  for (const auto& row : scores) {
    if (row.size() != methods) throw ShapeError("every dataset needs a score for every method");
    for (double v : row) {
      if (!std::isfinite(v)) throw MetricError("mean_ranks got a non-finite score");
    }
    const auto ranks = doubled_average_ranks(row);
    for (std::size_t m = 0; m < methods; ++m) sum[m] += static_cast<double>(ranks[m]) / 2.0;
  }
  for (auto& s : sum) s /= static_cast<double>(scores.size());
  return sum;
}

}  // namespace mde
