#include <doctest.h>

#include <cmath>

#include "mde/data.hpp"
#include "mde/error.hpp"
#include "mde/rng.hpp"
#include "mde/scaling.hpp"

using namespace mde;

namespace {

Matrix column(std::initializer_list<double> v) { return Matrix(v.size(), 1, std::vector<double>(v)); }

}  // namespace

TEST_CASE("fit takes column extrema") {
  const auto p = fit_scaler(column({0.0, 10.0, 5.0}), 0.05, 0.95);
  CHECK(p.mins == std::vector<double>{0.0});
  CHECK(p.maxs == std::vector<double>{10.0});
  CHECK(p.l == 0.05);
  CHECK(p.u == 0.95);
  CHECK(p.fit_fingerprint == fingerprint(column({0.0, 10.0, 5.0})));
  CHECK(p.fit_fingerprint != fingerprint(column({0.0, 10.0, 5.5})));
}

TEST_CASE("constant columns are allowed") {
  const auto p = fit_scaler(Matrix(3, 2, 3.0));
  CHECK(p.mins == p.maxs);
  const auto s = transform(p, std::vector<double>{3.0, 100.0});
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(0.5));
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_scaler(column({1.0, 2.0}), 0.9, 0.1), ParameterError);
  CHECK_THROWS_AS(fit_scaler(column({1.0, 2.0}), 0.5, 0.5), ParameterError);
  CHECK_THROWS_AS(fit_scaler(column({1.0, 2.0}), -0.1, 0.5), ParameterError);
  CHECK_THROWS_AS(fit_scaler(column({1.0, 2.0}), 0.1, 1.5), ParameterError);
  CHECK_THROWS_AS(fit_scaler(Matrix(0, 3)), FitError);
  CHECK_NOTHROW(fit_scaler(column({1.0, 2.0}), 0.0, 1.0));
}

TEST_CASE("transform evaluates S and clamps") {
  const auto p = fit_scaler(column({0.0, 10.0}), 0.05, 0.95);
  CHECK(transform(p, std::vector<double>{5.0})[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(transform(p, std::vector<double>{0.0})[0] == 0.05);
  CHECK(transform(p, std::vector<double>{10.0})[0] == 0.95);
  // (20 - 0) / 10 * 0.9 + 0.05 = 1.85, clamped to 1
  CHECK(transform(p, std::vector<double>{20.0})[0] == 1.0);
  // (-10 - 0) / 10 * 0.9 + 0.05 = -0.85, clamped to 0
  CHECK(transform(p, std::vector<double>{-10.0})[0] == 0.0);
  // just past the training max: 10.5 -> 0.995, above u but still in [0, 1]
  CHECK(transform(p, std::vector<double>{10.5})[0] == doctest::Approx(0.995));
  CHECK_THROWS_AS(transform(p, std::vector<double>{1.0, 2.0}), ShapeError);
}

TEST_CASE("training rows stay inside [l, u]") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 2 + rng.below(50), cols = 1 + rng.below(10);
    Matrix X(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) X(r, c) = (rng.uniform() - 0.5) * std::pow(10.0, double(rng.below(12)) - 6);
    }
    const double l = rng.uniform() * 0.4, u = 0.6 + rng.uniform() * 0.4;
    const auto p = fit_scaler(X, l, u);
    const auto S = transform_rows(p, X);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        REQUIRE(S(r, c) >= l);
        REQUIRE(S(r, c) <= u);
        if (X(r, c) == p.mins[c] && p.mins[c] != p.maxs[c]) REQUIRE(S(r, c) == doctest::Approx(l).epsilon(1e-12));
        if (X(r, c) == p.maxs[c] && p.mins[c] != p.maxs[c]) REQUIRE(std::abs(S(r, c) - u) <= 1e-12);
      }
    }
  }
}

TEST_CASE("transform is monotone per feature") {
  const auto p = fit_scaler(column({-3.0, 7.0, 2.0}));
  double prev = -1.0;
  for (double x = -20.0; x <= 20.0; x += 0.37) {
    const double s = transform(p, std::vector<double>{x})[0];
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("positive rescaling of a column does not change the output") {
  Rng rng(8);
  Matrix X(30, 3);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 3; ++c) X(r, c) = rng.normal();
  }
  Matrix Y = X;
  const double a[3] = {3.7, 1e-4, 250.0};
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 3; ++c) Y(r, c) *= a[c];
  }
  const auto sx = transform_rows(fit_scaler(X), X);
  const auto sy = transform_rows(fit_scaler(Y), Y);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(sx(r, c) - sy(r, c)) <= 1e-12);
  }
}
