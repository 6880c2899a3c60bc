#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mde/data.hpp"
#include "mde/encoders.hpp"
#include "mde/raster.hpp"
#include "mde/scaling.hpp"

namespace mde {

/// Mean of per-class recalls. With n_classes == 0 the classes are those
/// present in y_true; otherwise every class in [0, n_classes) must occur.
double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred,
                         std::size_t n_classes = 0);

/// 1-NN on squared pixel differences; ties go to the lowest training index.
/// Binary canvases take a bit-packed Hamming path with identical results.
std::vector<int> knn1_pixel(std::span<const Canvas> train_images, std::span<const int> train_labels,
                            std::span<const Canvas> test_images, unsigned jobs = 1);

/// 1-NN on Euclidean distance between scaled feature vectors.
std::vector<int> knn1_tabular(const Matrix& X_train, std::span<const int> y_train,
                              const Matrix& X_test, const ScalerParams& scaler, unsigned jobs = 1);

/// Either an image encoder or the tabular 1-NN baseline.
struct ProbeTarget {
  bool tabular = false;
  EncoderKind kind = EncoderKind::Retire;

  std::string name() const { return tabular ? "tabular" : std::string(to_string(kind)); }
  /// "retire" | "stml" | "igtd" | "tabular".
  static ProbeTarget parse(std::string_view name);
};

struct EvalReport {
  std::string dataset;
  std::string encoder;
  std::vector<double> per_split_bac;            // repeat-major, 10 entries
  double mean_bac = 0.0;
  std::vector<std::vector<int>> fold_predictions;  // per split, in test-index order
};

struct EvalOptions {
  EncoderParams params;
  unsigned jobs = 1;
  /// Called with each split's fitted model before its test fold is encoded.
  /// For the tabular baseline the model holds only the scaler.
  std::function<void(std::size_t split, const EncoderModel&)> on_fit;
};

/// Full 5x2 evaluation: per split, fit on the training fold only, encode
/// both folds, classify with 1-NN and record balanced accuracy.
EvalReport run_cv_eval(const Dataset& ds, const ProbeTarget& target, const CVPlan& plan,
                       const EvalOptions& options = {});

}  // namespace mde
