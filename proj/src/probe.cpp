#include "mde/probe.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "mde/error.hpp"

namespace mde {

double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred,
                         std::size_t n_classes) {
  if (y_true.empty()) throw MetricError("balanced accuracy of an empty label set");
  if (y_true.size() != y_pred.size()) {
    throw MetricError("label vectors differ in length (" + std::to_string(y_true.size()) + " vs " +
                      std::to_string(y_pred.size()) + ")");
  }
  std::set<int> classes(y_true.begin(), y_true.end());
  if (n_classes > 0) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (!classes.count(static_cast<int>(c))) {
        throw MetricError("class " + std::to_string(c) + " has no true instances");
      }
    }
  }
  double sum = 0.0;
  for (int c : classes) {
    std::size_t total = 0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      if (y_true[i] != c) continue;
      ++total;
      hit += y_pred[i] == c;
    }
    sum += static_cast<double>(hit) / static_cast<double>(total);
  }
  return sum / static_cast<double>(classes.size());
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

void pack_bits(const Canvas& c, std::uint64_t* words) {
  const auto px = c.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

constexpr std::size_t kBlock = 16;

// Hamming distance over whole blocks, giving up once `bound` is reached.
#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
[[gnu::target_clones("popcnt", "default")]]
#endif
std::uint64_t hamming_bounded(const std::uint64_t* a, const std::uint64_t* b, std::size_t n_words,
                              std::uint64_t bound) {
  std::uint64_t d = 0;
  for (std::size_t start = 0; start < n_words && d < bound; start += kBlock) {
    const std::size_t stop = std::min(n_words, start + kBlock);
    for (std::size_t w = start; w < stop; ++w) d += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  }
  return d;
}

}  // namespace

std::vector<int> knn1_pixel(std::span<const Canvas> train_images, std::span<const int> train_labels,
                            std::span<const Canvas> test_images, unsigned jobs) {
  if (train_images.empty()) throw ShapeError("knn1 needs at least one training image");
  if (train_images.size() != train_labels.size()) throw ShapeError("training labels/images size mismatch");
  const int w = train_images.front().width();
  const int h = train_images.front().height();
  auto same_shape = [&](const Canvas& c) { return c.width() == w && c.height() == h; };
  if (!std::all_of(train_images.begin(), train_images.end(), same_shape) ||
      !std::all_of(test_images.begin(), test_images.end(), same_shape)) {
    throw ShapeError("all canvases must share one size");
  }

  std::vector<int> pred(test_images.size());
  auto binary = [](const Canvas& c) { return c.is_binary(); };
  if (std::all_of(train_images.begin(), train_images.end(), binary) &&
      std::all_of(test_images.begin(), test_images.end(), binary)) {
    // For {0,255} images the squared distance is 255^2 times the Hamming distance.
    const std::size_t full_words = (static_cast<std::size_t>(w) * static_cast<std::size_t>(h) + 63) / 64;
    std::vector<std::uint64_t> train_full(train_images.size() * full_words, 0);
    std::vector<std::uint64_t> test_full(test_images.size() * full_words, 0);
    for (std::size_t k = 0; k < train_images.size(); ++k) pack_bits(train_images[k], &train_full[k * full_words]);
    for (std::size_t t = 0; t < test_images.size(); ++t) pack_bits(test_images[t], &test_full[t * full_words]);

    // Words equal in every image add nothing to any distance.
    std::vector<std::size_t> active;
    for (std::size_t wd = 0; wd < full_words; ++wd) {
      const std::uint64_t ref = train_full[wd];
      bool varies = false;
      for (std::size_t k = 1; k < train_images.size() && !varies; ++k) varies = train_full[k * full_words + wd] != ref;
      for (std::size_t t = 0; t < test_images.size() && !varies; ++t) varies = test_full[t * full_words + wd] != ref;
      if (varies) active.push_back(wd);
    }
    const std::size_t n_words = active.size();
    auto compact = [&](const std::vector<std::uint64_t>& full, std::size_t count) {
      std::vector<std::uint64_t> out(count * n_words);
      for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < n_words; ++i) out[k * n_words + i] = full[k * full_words + active[i]];
      }
      return out;
    };
    const auto train_bits = compact(train_full, train_images.size());
    const auto test_bits = compact(test_full, test_images.size());

    parallel_for(test_images.size(), jobs, [&](std::size_t t) {
      const std::uint64_t* query = test_bits.data() + t * n_words;
      std::size_t best = 0;
      auto best_dist = std::numeric_limits<std::uint64_t>::max();
      for (std::size_t k = 0; k < train_images.size() && best_dist > 0; ++k) {
        const auto d = hamming_bounded(train_bits.data() + k * n_words, query, n_words, best_dist);
        if (d < best_dist) {
          best_dist = d;
          best = k;
        }
      }
      pred[t] = train_labels[best];
    });
    return pred;
  }

  parallel_for(test_images.size(), jobs, [&](std::size_t t) {
    const auto query = test_images[t].pixels();
    std::size_t best = 0;
    auto best_dist = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t k = 0; k < train_images.size(); ++k) {
      const auto ref = train_images[k].pixels();
      std::uint64_t d = 0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const int diff = static_cast<int>(ref[i]) - static_cast<int>(query[i]);
        d += static_cast<std::uint64_t>(diff * diff);
      }
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    pred[t] = train_labels[best];
  });
  return pred;
}

std::vector<int> knn1_tabular(const Matrix& X_train, std::span<const int> y_train,
                              const Matrix& X_test, const ScalerParams& scaler, unsigned jobs) {
  if (X_train.rows() == 0) throw ShapeError("knn1 needs at least one training row");
  if (X_train.rows() != y_train.size()) throw ShapeError("training labels/rows size mismatch");
  if (X_train.cols() != scaler.n_features() || X_test.cols() != scaler.n_features()) {
    throw ShapeError("feature count does not match the scaler");
  }
  const Matrix train = transform_rows(scaler, X_train);
  const Matrix test = transform_rows(scaler, X_test);
  std::vector<int> pred(test.rows());
  parallel_for(test.rows(), jobs, [&](std::size_t t) {
    const auto q = test.row(t);
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < train.rows(); ++k) {
      const auto r = train.row(k);
      double d = 0.0;
      for (std::size_t f = 0; f < r.size(); ++f) d += (r[f] - q[f]) * (r[f] - q[f]);
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    pred[t] = y_train[best];
  });
  return pred;
}

ProbeTarget ProbeTarget::parse(std::string_view name) {
  if (name == "tabular") return {true, EncoderKind::Retire};
  return {false, parse_encoder_kind(name)};
}

EvalReport run_cv_eval(const Dataset& ds, const ProbeTarget& target, const CVPlan& plan,
                       const EvalOptions& options) {
  if (plan.n_instances() != ds.n_instances()) {
    throw ShapeError("CV plan covers " + std::to_string(plan.n_instances()) + " instances, dataset has " +
                     std::to_string(ds.n_instances()));
  }
  EvalReport report;
  report.dataset = ds.name;
  report.encoder = target.name();

  for (std::size_t s = 0; s < CVPlan::kSplits; ++s) {
    const auto train_idx = plan.train_indices(s);
    const auto test_idx = plan.test_indices(s);
    const Dataset train = ds.subset(train_idx);
    const Dataset test = ds.subset(test_idx);

    std::vector<int> pred;
    if (target.tabular) {
      EncoderModel model;
      model.scaler = fit_scaler(train.X, options.params.l, options.params.u);
      if (options.on_fit) options.on_fit(s, model);
      pred = knn1_tabular(train.X, train.y, test.X, *model.scaler, options.jobs);
    } else {
      const auto model = fit_encoder(target.kind, train, options.params);
      if (options.on_fit) options.on_fit(s, model);
      const auto train_images = encode_rows(model, train.X, options.jobs);
      const auto test_images = encode_rows(model, test.X, options.jobs);
      pred = knn1_pixel(train_images, train.y, test_images, options.jobs);
    }
    report.per_split_bac.push_back(balanced_accuracy(test.y, pred, ds.n_classes()));
    report.fold_predictions.push_back(std::move(pred));
  }
  report.mean_bac = std::accumulate(report.per_split_bac.begin(), report.per_split_bac.end(), 0.0) /
                    static_cast<double>(report.per_split_bac.size());
  return report;
}

}  // namespace mde
