#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mde {

/// Dense row-major matrix of reals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return values_; }

  /// Rows picked in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Dataset {
  std::string name;
  Matrix X;
  std::vector<int> y;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  /// Rows dropped at ingestion because they held a missing-value token.
  std::size_t dropped_rows = 0;

  std::size_t n_instances() const noexcept { return X.rows(); }
  std::size_t n_features() const noexcept { return X.cols(); }
  std::size_t n_classes() const noexcept { return class_names.size(); }

  Dataset subset(std::span<const std::size_t> indices) const;

  /// Throws if the shape or label invariants do not hold: matching sizes,
  /// finite values, at least two classes, labels contiguous from 0 and all used.
  void validate() const;
};

/// Reads a KEEL `.dat` file. Column order follows the `@attribute` lines,
/// the output attribute is taken from `@outputs` (last attribute otherwise),
/// and class indices follow the order of first appearance in `@data`.
Dataset load_keel(const std::filesystem::path& path);

/// Label column chosen by header name or by 0-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Reads a CSV file with a header row. Labels that are all non-negative
/// integers are indexed in numeric order; otherwise by first appearance.
Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column);

/// Writes `ds` as CSV: feature columns then a `class` column holding class names.
/// Reals are printed in shortest round-trip form.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Loads by extension: `.dat` as KEEL, anything else as CSV with the last
/// column as label.
Dataset load_dataset(const std::filesystem::path& path);

/// 5 repeats of stratified 2-fold cross-validation.
struct CVPlan {
  static constexpr std::size_t kRepeats = 5;
  static constexpr std::size_t kFolds = 2;
  static constexpr std::size_t kSplits = kRepeats * kFolds;

  std::uint64_t seed = 0;
  /// assignments[r][i] is the fold (0 or 1) of instance i in repeat r.
  std::array<std::vector<std::uint8_t>, kRepeats> assignments;

  std::size_t n_instances() const noexcept { return assignments[0].size(); }

  /// Split `s` in repeat-major order (repeat s/2, test fold s%2).
  std::vector<std::size_t> test_indices(std::size_t split) const;
  std::vector<std::size_t> train_indices(std::size_t split) const;

  bool operator==(const CVPlan&) const = default;
};

CVPlan make_cv_plan(const Dataset& ds, std::uint64_t seed);

/// Two-class MADELON-style generator: each class is a unit-variance Gaussian
/// cloud around its own vertex of the hypercube {-1, +1}^n_features (edge 2.0).
/// Classes have floor/ceil(n_samples / 2) members; rows are shuffled.
Dataset generate_synthetic(std::size_t n_samples, std::size_t n_features, std::uint64_t seed);

}  // namespace mde
