#include <doctest.h>

#include <cmath>
#include <limits>

#include "mde/data.hpp"
#include "mde/error.hpp"
#include "mde/probe.hpp"
#include "mde/rng.hpp"
#include "test_util.hpp"

using namespace mde;

namespace {

Canvas random_canvas(Rng& rng, int w, int h, bool binary) {
  Canvas c(w, h);
  for (auto& p : c.pixels()) p = binary ? (rng.below(2) ? 255 : 0) : static_cast<std::uint8_t>(rng.below(256));
  return c;
}

std::size_t brute_nearest(const std::vector<Canvas>& train, const Canvas& q) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < train.size(); ++k) {
    double d = 0;
    for (std::size_t i = 0; i < q.pixels().size(); ++i) {
      const double diff = double(train[k].pixels()[i]) - double(q.pixels()[i]);
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("balanced accuracy") {
  const std::vector<int> y{0, 1, 1, 0, 2};
  CHECK(balanced_accuracy(y, y) == 1.0);
  CHECK(balanced_accuracy(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 0, 0, 0}) == 0.5);
  CHECK(balanced_accuracy(std::vector<int>{0, 0, 0, 1}, std::vector<int>{0, 0, 0, 0}) == 0.5);
  CHECK(balanced_accuracy(std::vector<int>{0, 0, 1, 1, 1, 1}, std::vector<int>{0, 1, 1, 1, 0, 0}) ==
        doctest::Approx((0.5 + 0.5) / 2));
  // constant predictor on C present classes scores 1 / C
  const std::vector<int> three{0, 1, 2, 2, 1, 0, 0};
  CHECK(balanced_accuracy(three, std::vector<int>(7, 1)) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(balanced_accuracy(std::vector<int>{}, std::vector<int>{}), MetricError);
  CHECK_THROWS_AS(balanced_accuracy(std::vector<int>{0, 1}, std::vector<int>{0}), MetricError);
  CHECK_THROWS_AS(balanced_accuracy(std::vector<int>{0, 0}, std::vector<int>{0, 1}, 2), MetricError);
}

TEST_CASE("knn1 on pixels: exact matches and ties") {
  Rng rng(1);
  std::vector<Canvas> train{random_canvas(rng, 8, 8, true), random_canvas(rng, 8, 8, true)};
  const std::vector<int> labels{0, 1};
  CHECK(knn1_pixel(train, labels, std::vector<Canvas>{train[1]}) == std::vector<int>{1});
  CHECK(knn1_pixel(train, labels, std::vector<Canvas>{train[0]}) == std::vector<int>{0});

  // duplicates: the lowest index wins
  std::vector<Canvas> dup{train[0], train[0]};
  CHECK(knn1_pixel(dup, std::vector<int>{1, 0}, std::vector<Canvas>{train[0]}) == std::vector<int>{1});

  CHECK_THROWS_AS(knn1_pixel({}, {}, std::vector<Canvas>{train[0]}), ShapeError);
  CHECK_THROWS_AS(knn1_pixel(train, labels, std::vector<Canvas>{Canvas(4, 4)}), ShapeError);
}

TEST_CASE("knn1 on pixels matches brute force, binary and grayscale") {
  Rng rng(2);
  for (bool binary : {true, false}) {
    for (int t = 0; t < 30; ++t) {
      std::vector<Canvas> train;
      std::vector<int> labels;
      const int n = 3 + static_cast<int>(rng.below(6));
      for (int k = 0; k < n; ++k) {
        train.push_back(random_canvas(rng, 8 + t % 3, 8, binary));
        labels.push_back(k);
      }
      std::vector<Canvas> test{random_canvas(rng, 8 + t % 3, 8, binary), random_canvas(rng, 8 + t % 3, 8, binary)};
      const auto pred = knn1_pixel(train, labels, test, 1 + t % 3);
      for (std::size_t q = 0; q < test.size(); ++q) CHECK(pred[q] == labels[brute_nearest(train, test[q])]);
    }
  }
}

TEST_CASE("knn1 tabular") {
  Matrix Xtr(2, 2, std::vector<double>{0.0, 0.0, 10.0, 10.0});
  const auto scaler = fit_scaler(Xtr);
  const std::vector<int> y{3, 7};
  CHECK(knn1_tabular(Xtr, y, Matrix(1, 2, std::vector<double>{10.0, 10.0}), scaler) == std::vector<int>{7});
  CHECK(knn1_tabular(Xtr, y, Matrix(1, 2, std::vector<double>{2.0, 3.0}), scaler) == std::vector<int>{3});

  Rng rng(3);
  Matrix A(20, 3), Q(10, 3);
  std::vector<int> labels(20);
  for (std::size_t r = 0; r < 20; ++r) {
    labels[r] = static_cast<int>(r);
    for (std::size_t c = 0; c < 3; ++c) A(r, c) = rng.normal() * (c + 1);
  }
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 3; ++c) Q(r, c) = rng.normal() * (c + 1);
  }
  const auto sc = fit_scaler(A);
  const auto pred = knn1_tabular(A, labels, Q, sc, 3);
  const Matrix SA = transform_rows(sc, A), SQ = transform_rows(sc, Q);
  for (std::size_t q = 0; q < 10; ++q) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t k = 0; k < 20; ++k) {
      double d = 0;
      for (std::size_t c = 0; c < 3; ++c) d += std::pow(SA(k, c) - SQ(q, c), 2);
      if (d < bd) {
        bd = d;
        best = k;
      }
    }
    CHECK(pred[q] == static_cast<int>(best));
  }
  // train == test predicts perfectly
  CHECK(knn1_tabular(A, labels, A, sc) == labels);
}

TEST_CASE("probe targets") {
  CHECK(ProbeTarget::parse("tabular").tabular);
  CHECK(ProbeTarget::parse("igtd").kind == EncoderKind::Igtd);
  CHECK(ProbeTarget::parse("stml").name() == "stml");
  CHECK(ProbeTarget::parse("tabular").name() == "tabular");
  CHECK_THROWS_AS(ProbeTarget::parse("xgboost"), ParameterError);
}

TEST_CASE("cross-validated evaluation") {
  const Dataset ds = generate_synthetic(60, 4, 21);
  const auto plan = make_cv_plan(ds, 5);
  for (const char* name : {"retire", "stml", "igtd", "tabular"}) {
    CAPTURE(name);
    const auto target = ProbeTarget::parse(name);
    const auto a = run_cv_eval(ds, target, plan);
    const auto b = run_cv_eval(ds, target, plan, {{}, 3, {}});
    REQUIRE(a.per_split_bac.size() == 10);
    CHECK(a.per_split_bac == b.per_split_bac);
    CHECK(a.fold_predictions == b.fold_predictions);
    double sum = 0;
    for (std::size_t s = 0; s < 10; ++s) {
      CHECK(a.per_split_bac[s] >= 0.0);
      CHECK(a.per_split_bac[s] <= 1.0);
      CHECK(a.fold_predictions[s].size() == plan.test_indices(s).size());
      sum += a.per_split_bac[s];
    }
    CHECK(a.mean_bac == doctest::Approx(sum / 10));
    CHECK(a.encoder == std::string(name));
    CHECK(a.dataset == ds.name);
  }
  const auto small_plan = make_cv_plan(generate_synthetic(20, 4, 1), 0);
  CHECK_THROWS_AS(run_cv_eval(ds, ProbeTarget::parse("retire"), small_plan), ShapeError);
}

TEST_CASE("fitted state never sees the test fold") {
  const Dataset ds = generate_synthetic(40, 5, 33);
  const auto plan = make_cv_plan(ds, 2);
  for (const char* name : {"retire", "stml", "igtd", "tabular"}) {
    CAPTURE(name);
    std::vector<EncoderModel> clean(10), dirty(10);
    EvalOptions opt;
    opt.on_fit = [&](std::size_t s, const EncoderModel& m) { clean[s] = m; };
    run_cv_eval(ds, ProbeTarget::parse(name), plan, opt);
    for (std::size_t s = 0; s < 10; ++s) {
      Dataset perturbed = ds;
      for (auto i : plan.test_indices(s)) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) perturbed.X(i, c) *= 10.0;
      }
      EvalOptions popt;
      popt.on_fit = [&](std::size_t split, const EncoderModel& m) {
        if (split == s) dirty[s] = m;
      };
      run_cv_eval(perturbed, ProbeTarget::parse(name), plan, popt);
      CHECK(dirty[s] == clean[s]);
    }
  }
}
