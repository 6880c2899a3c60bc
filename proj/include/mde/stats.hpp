#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mde {

/// Ten paired scores in repeat-major order: (r1 f1, r1 f2, ..., r5 f2).
struct PairedCVScores {
  std::array<double, 10> a{};
  std::array<double, 10> b{};

  /// Throws ShapeError unless both spans hold exactly 10 values.
  static PairedCVScores from(std::span<const double> a, std::span<const double> b);
};

struct FTestResult {
  double f = 0.0;        // NaN when every difference is zero, +inf when the variance term is zero
  double p_value = 1.0;
  bool significant = false;
  /// Set when the variance term is zero and F cannot be formed normally.
  bool degenerate = false;
};

/// Combined 5x2 CV F-test. With p_i^(j) = a - b, per repeat
/// s_i^2 = sum_j (p_i^(j) - mean_i)^2, F = sum p^2 / (2 sum s_i^2) ~ F(10, 5).
FTestResult combined_5x2cv_f_test(const PairedCVScores& s, double alpha = 0.05);

/// P(F_{d1,d2} > x), from the regularized incomplete beta function.
double f_distribution_sf(double x, double d1, double d2);

/// I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

struct WilcoxonResult {
  double w = 0.0;       // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;  // two-sided
  bool significant = false;
  std::size_t n = 0;     // pairs left after dropping zero differences
  bool exact = false;
};

/// Two-sided Wilcoxon signed-rank test on paired values. Zero differences
/// are dropped, |d| ranked with average ties. Exact p by enumerating all
/// sign assignments for n <= 20, normal approximation with tie correction
/// above that. Throws InsufficientDataError with fewer than 5 non-zero pairs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha = 0.05);

inline constexpr std::size_t kWilcoxonExactLimit = 20;

/// Per-method mean rank over datasets; within a dataset the highest score
/// gets rank M and ties share the average rank. `scores` is datasets x methods.
std::vector<double> mean_ranks(const std::vector<std::vector<double>>& scores);

}  // namespace mde
