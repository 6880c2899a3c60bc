#include <doctest.h>

#include <bitset>
#include <cmath>

#include "mde/data.hpp"
#include "mde/error.hpp"
#include "mde/font.hpp"
#include "mde/rng.hpp"
#include "mde/encoders.hpp"
#include "test_util.hpp"

using namespace mde;

namespace {

Dataset random_dataset(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Dataset ds = generate_synthetic(rows, cols, seed);
  Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) ds.X(r, c) = ds.X(r, c) * (1.0 + c) + rng.uniform();
  }
  return ds;
}

std::vector<double> column_extreme(const Dataset& ds, bool max) {
  std::vector<double> out(ds.n_features());
  for (std::size_t c = 0; c < ds.n_features(); ++c) {
    out[c] = ds.X(0, c);
    for (std::size_t r = 1; r < ds.n_instances(); ++r) {
      out[c] = max ? std::max(out[c], ds.X(r, c)) : std::min(out[c], ds.X(r, c));
    }
  }
  return out;
}

Canvas border_only(const EncoderModel& m) {
  const auto& layout = std::get<PolarLayout>(m.layout);
  Canvas c(m.size.width, m.size.height);
  draw_polyline(c, polar_vertices(layout, std::vector<double>(layout.n, 1.0)), true);
  return c;
}

int glyph_bits(const std::string& text) {
  int bits = 0;
  for (char ch : text) {
    for (auto row : font::glyph(ch)) bits += static_cast<int>(std::bitset<8>(row).count());
  }
  return bits;
}

}  // namespace

TEST_CASE("encoder names") {
  CHECK(parse_encoder_kind("RETIRE") == EncoderKind::Retire);
  CHECK(parse_encoder_kind("stml") == EncoderKind::Stml);
  CHECK(parse_encoder_kind("Igtd") == EncoderKind::Igtd);
  CHECK(to_string(EncoderKind::Stml) == "stml");
  CHECK_THROWS_AS(parse_encoder_kind("deepinsight"), ParameterError);
}

TEST_CASE("RETIRE fit geometry") {
  const auto four = fit_retire(random_dataset(20, 4, 1));
  const auto& layout = std::get<PolarLayout>(four.layout);
  CHECK(layout.n == 4);
  CHECK(layout.r_max == 108.0);
  CHECK(four.size == Size{224, 224});

  const auto sonar = load_keel(testing::kData / "keel" / "sonar.dat");
  CHECK(std::get<PolarLayout>(fit_retire(sonar).layout).n == 60);
  CHECK(fit_retire(sonar).scaler->feature_names == sonar.feature_names);

  Dataset empty = random_dataset(10, 3, 2).subset(std::vector<std::size_t>{});
  CHECK_THROWS_AS(fit_retire(empty), FitError);
  CHECK_THROWS_AS(fit_retire(random_dataset(10, 3, 2), 0.9, 0.1), ParameterError);
}

TEST_CASE("RETIRE at the training maxima stays inside the border") {
  const auto ds = random_dataset(40, 7, 3);
  const auto m = fit_retire(ds);
  const auto& layout = std::get<PolarLayout>(m.layout);
  const auto x = column_extreme(ds, true);
  for (const auto& v : polar_vertices(layout, transform(*m.scaler, x))) {
    CHECK(std::hypot(v.x - layout.cx, v.y - layout.cy) == doctest::Approx(0.95 * 108.0));
  }
  const Canvas img = encode_retire(m, x);
  CHECK(img.is_binary());
  const int cx = 112;
  // straight up from the center: silhouette reaches 0.95 * 108 = 102.6 px, border sits at 108 px
  CHECK(img.at(cx, 112 - 100) == 255);
  for (int j = 112 - 106; j <= 112 - 104; ++j) CHECK(img.at(cx, j) == 0);
  CHECK(img.at(cx, 112 - 108) == 255);
  // nothing outside the border ring
  for (int j = 0; j < 224; ++j) {
    for (int i = 0; i < 224; ++i) {
      if (std::hypot(i + 0.5 - 112, j + 0.5 - 112) > 109.5) REQUIRE(img.at(i, j) == 0);
    }
  }
}

TEST_CASE("RETIRE at the training minima is a small polygon around the center") {
  const auto ds = random_dataset(40, 5, 4);
  const auto m = fit_retire(ds);
  const Canvas img = encode_retire(m, column_extreme(ds, false));
  const Canvas border = border_only(m);
  std::size_t extra = 0;
  for (int j = 0; j < 224; ++j) {
    for (int i = 0; i < 224; ++i) {
      if (img.at(i, j) && !border.at(i, j)) {
        ++extra;
        // 0.05 * 108 = 5.4 px
        CHECK(std::hypot(i + 0.5 - 112, j + 0.5 - 112) < 7.5);
      }
    }
  }
  CHECK(extra > 0);
  CHECK(img.at(112, 112) == 255);
}

TEST_CASE("RETIRE is deterministic and pure") {
  const auto ds = random_dataset(30, 6, 5);
  const auto m = fit_retire(ds);
  const auto x = ds.X.row(3);
  CHECK(encode_retire(m, x) == encode_retire(m, x));
  CHECK(encode(m, x) == encode_retire(m, x));
  std::vector<double> copy(x.begin(), x.end());
  CHECK(encode_retire(m, copy) == encode_retire(m, x));
}

TEST_CASE("RETIRE cyclic feature shift rotates the silhouette") {
  for (std::size_t n : {4u, 8u, 12u}) {
    const auto ds = random_dataset(30, n, 6 + n);
    Dataset shifted = ds;
    for (std::size_t r = 0; r < ds.n_instances(); ++r) {
      for (std::size_t c = 0; c < n; ++c) shifted.X(r, c) = ds.X(r, (c + 1) % n);
    }
    const auto m = fit_retire(ds);
    const auto ms = fit_retire(shifted);
    for (std::size_t r = 0; r < 5; ++r) {
      const auto a = encode_retire(m, ds.X.row(r)).count_foreground();
      const auto b = encode_retire(ms, shifted.X.row(r)).count_foreground();
      CAPTURE(n);
      // same polygon turned by 2*pi/N; only edge quantization differs
      CHECK(std::abs(double(a) - double(b)) <= 0.02 * double(std::max(a, b)));
    }
  }
}

TEST_CASE("RETIRE vertex radius is monotone in each raw feature") {
  const auto ds = random_dataset(30, 5, 9);
  const auto m = fit_retire(ds);
  const auto& layout = std::get<PolarLayout>(m.layout);
  std::vector<double> x(ds.X.row(0).begin(), ds.X.row(0).end());
  for (std::size_t f = 0; f < 5; ++f) {
    double prev = -1.0;
    auto probe = x;
    for (double v = -30.0; v <= 30.0; v += 0.5) {
      probe[f] = v;
      const auto p = polar_vertices(layout, transform(*m.scaler, probe))[f];
      const double r = std::hypot(p.x - layout.cx, p.y - layout.cy);
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("encoders reject misuse") {
  const auto ds = random_dataset(20, 4, 10);
  EncoderModel unfitted;
  CHECK_THROWS_AS(encode_retire(unfitted, ds.X.row(0)), StateError);
  CHECK_THROWS_AS(encode(unfitted, ds.X.row(0)), StateError);
  CHECK_THROWS_AS(encode_rows(unfitted, ds.X), StateError);
  const auto stml = fit_stml(ds);
  CHECK_THROWS_AS(encode_retire(stml, ds.X.row(0)), StateError);
  const auto retire = fit_retire(ds);
  CHECK_THROWS_AS(encode_retire(retire, std::vector<double>{1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(encode_stml(stml, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("STML grid layout") {
  const auto g6 = make_stml_grid(6, {224, 224});
  CHECK(g6.rows == 3);
  CHECK(g6.cols == 2);
  CHECK(g6.cell_w == 112);
  CHECK(g6.cell_h == 74);
  CHECK(g6.cell(5).x == 112);
  CHECK(g6.cell(5).y == 148);
  CHECK(g6.cell(5).h == 76);
  CHECK(g6.cell(0).h == 74);

  const auto g1 = make_stml_grid(1, {224, 224});
  CHECK(g1.rows == 1);
  CHECK(g1.cols == 1);
  CHECK(g1.cell(0).w == 224);
  CHECK(g1.cell(0).h == 224);

  const auto g10 = make_stml_grid(10, {224, 224});
  CHECK(g10.rows == 4);
  CHECK(g10.cols == 3);

  CHECK_THROWS_AS(make_stml_grid(5000, {32, 32}), CapacityError);
  CHECK_THROWS_AS(make_stml_grid(0, {32, 32}), FitError);
}

TEST_CASE("STML renders a single value centered at the largest scale") {
  Dataset ds = random_dataset(10, 1, 11);
  const auto m = fit_stml(ds);
  const Canvas img = encode_stml(m, std::vector<double>{1.0});
  CHECK(img.is_binary());
  // "1.000" is 29 px wide at scale 1; min(224 / 29, 224 / 7) = 7
  const int scale = 7;
  CHECK(img.count_foreground() == static_cast<std::size_t>(glyph_bits("1.000") * scale * scale));
  int x0 = 224, x1 = -1, y0 = 224, y1 = -1;
  for (int j = 0; j < 224; ++j) {
    for (int i = 0; i < 224; ++i) {
      if (!img.at(i, j)) continue;
      x0 = std::min(x0, i);
      x1 = std::max(x1, i);
      y0 = std::min(y0, j);
      y1 = std::max(y1, j);
    }
  }
  CHECK(x0 >= (224 - 29 * scale) / 2);
  CHECK(x1 < (224 - 29 * scale) / 2 + 29 * scale);
  CHECK(y0 >= (224 - 7 * scale) / 2);
  CHECK(y1 < (224 - 7 * scale) / 2 + 7 * scale);
  // roughly centered: margins differ by less than one glyph cell
  CHECK(std::abs(x0 - (223 - x1)) <= 6 * scale);
  CHECK(std::abs(y0 - (223 - y1)) <= scale);
}

TEST_CASE("STML keeps each value in its own cell") {
  const auto ds = random_dataset(10, 6, 12);
  const auto m = fit_stml(ds);
  const auto& grid = std::get<StmlGrid>(m.layout);
  std::vector<double> x{1.0, -2.5, 123456.7, 0.001, 42.0, -7.0};
  const Canvas img = encode_stml(m, x);
  for (std::size_t f = 0; f < 6; ++f) {
    const auto cell = grid.cell(f);
    std::size_t inside = 0;
    for (int j = cell.y; j < cell.y + cell.h; ++j) {
      for (int i = cell.x; i < cell.x + cell.w; ++i) inside += img.at(i, j) != 0;
    }
    CHECK(inside > 0);
  }
  CHECK(encode_stml(m, x) == img);
}

TEST_CASE("STML with a tiny cell clips instead of failing") {
  Dataset ds = random_dataset(10, 2, 13);
  const auto m = fit_stml(ds, {12, 16});
  CHECK_NOTHROW(encode_stml(m, std::vector<double>{123456.7, -1.5}));
}

TEST_CASE("batch encoding keeps row order for any worker count") {
  const auto ds = random_dataset(25, 5, 14);
  for (auto kind : {EncoderKind::Retire, EncoderKind::Stml, EncoderKind::Igtd}) {
    const auto m = fit_encoder(kind, ds);
    const auto one = encode_rows(m, ds.X, 1);
    const auto four = encode_rows(m, ds.X, 4);
    REQUIRE(one.size() == 25);
    CHECK(one == four);
    for (std::size_t r = 0; r < 25; ++r) CHECK(one[r] == encode(m, ds.X.row(r)));
  }
}

TEST_CASE("fit_encoder dispatches with the given parameters") {
  const auto ds = random_dataset(20, 4, 15);
  EncoderParams p;
  p.l = 0.1;
  p.u = 0.8;
  p.size = {64, 48};
  const auto r = fit_encoder(EncoderKind::Retire, ds, p);
  CHECK(r.kind == EncoderKind::Retire);
  CHECK(r.scaler->l == 0.1);
  CHECK(r.size == Size{64, 48});
  CHECK(encode(r, ds.X.row(0)).width() == 64);
  const auto s = fit_encoder(EncoderKind::Stml, ds, p);
  CHECK(std::get<StmlGrid>(s.layout).size == Size{64, 48});
  const auto g = fit_encoder(EncoderKind::Igtd, ds, p);
  CHECK(g.size == Size{2, 2});
  CHECK(g.scaler->u == 0.8);
}
