#include "mde/encoders.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "mde/error.hpp"
#include "mde/font.hpp"
#include "mde/ranking.hpp"
#include "mde/rng.hpp"

namespace mde {

std::string_view to_string(EncoderKind kind) noexcept {
  switch (kind) {
    case EncoderKind::Retire: return "retire";
    case EncoderKind::Stml: return "stml";
    case EncoderKind::Igtd: return "igtd";
  }
  return "unknown";
}

EncoderKind parse_encoder_kind(std::string_view name) {
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "retire") return EncoderKind::Retire;
  if (lowered == "stml") return EncoderKind::Stml;
  if (lowered == "igtd") return EncoderKind::Igtd;
  throw ParameterError("unknown encoder '" + std::string(name) + "'");
}

std::size_t EncoderModel::n_features() const {
  if (!scaler) throw StateError("encoder model is not fitted");
  return scaler->n_features();
}

namespace {

const ScalerParams& require_fitted(const EncoderModel& m, EncoderKind kind) {
  if (!m.fitted()) throw StateError("encoder model is not fitted");
  if (m.kind != kind) {
    throw StateError("model holds a " + std::string(to_string(m.kind)) + " encoder, not " +
                     std::string(to_string(kind)));
  }
  return *m.scaler;
}

void require_length(const ScalerParams& p, std::span<const double> x) {
  if (x.size() != p.n_features()) {
    throw ShapeError("expected " + std::to_string(p.n_features()) + " features, got " +
                     std::to_string(x.size()));
  }
}

void require_features(const Dataset& train) {
  if (train.n_instances() == 0) throw FitError("cannot fit an encoder on an empty training set");
}

}  // namespace

// ---------------------------------------------------------------------------
// RETIRE

EncoderModel fit_retire(const Dataset& train, double l, double u, Size size) {
  require_features(train);
  EncoderModel m;
  m.kind = EncoderKind::Retire;
  m.size = size;
  m.scaler = fit_scaler(train.X, l, u);
  m.scaler->feature_names = train.feature_names;
  m.layout = default_layout(size.width, size.height, train.n_features());
  return m;
}

Canvas encode_retire(const EncoderModel& model, std::span<const double> x) {
  const auto& scaler = require_fitted(model, EncoderKind::Retire);
  require_length(scaler, x);
  const auto& layout = std::get<PolarLayout>(model.layout);

  Canvas canvas(model.size.width, model.size.height);
  const std::vector<double> ones(layout.n, 1.0);
  draw_polyline(canvas, polar_vertices(layout, ones), true);
  fill_polygon(canvas, polar_vertices(layout, transform(scaler, x)));
  return canvas;
}

// ---------------------------------------------------------------------------
// STML

CellRect StmlGrid::cell(std::size_t feature) const noexcept {
  const int r = static_cast<int>(feature) / cols;
  const int c = static_cast<int>(feature) % cols;
  CellRect rect{c * cell_w, r * cell_h, cell_w, cell_h};
  if (c == cols - 1) rect.w = size.width - rect.x;
  if (r == rows - 1) rect.h = size.height - rect.y;
  return rect;
}

StmlGrid make_stml_grid(std::size_t n_features, Size size) {
  if (n_features == 0) throw FitError("STML needs at least one feature");
  if (size.width <= 0 || size.height <= 0) throw ParameterError("canvas size must be positive");
  StmlGrid g;
  g.n = n_features;
  g.size = size;
  std::size_t rows = 1;
  while (rows * rows < n_features) ++rows;
  g.rows = static_cast<int>(rows);
  g.cols = static_cast<int>((n_features + rows - 1) / rows);
  g.cell_w = size.width / g.cols;
  g.cell_h = size.height / g.rows;
  if (g.cell_w < font::kGlyphWidth || g.cell_h < font::kGlyphHeight) {
    throw CapacityError(std::to_string(n_features) + " features give " + std::to_string(g.cell_w) +
                        "x" + std::to_string(g.cell_h) + " px cells on a " +
                        std::to_string(size.width) + "x" + std::to_string(size.height) +
                        " canvas; a cell must hold one 5x7 character");
  }
  return g;
}

EncoderModel fit_stml(const Dataset& train, Size size) {
  require_features(train);
  EncoderModel m;
  m.kind = EncoderKind::Stml;
  m.size = size;
  m.layout = make_stml_grid(train.n_features(), size);
  m.scaler = fit_scaler(train.X);
  m.scaler->feature_names = train.feature_names;
  return m;
}

namespace {

void render_text(Canvas& canvas, const CellRect& cell, const std::string& text) {
  const int width1 = font::text_width(text.size());
  int scale = std::min(cell.w / std::max(width1, 1), cell.h / font::kGlyphHeight);
  scale = std::max(scale, 1);
  const int ox = cell.x + std::max((cell.w - scale * width1) / 2, 0);
  const int oy = cell.y + std::max((cell.h - scale * font::kGlyphHeight) / 2, 0);
  const int x_end = cell.x + cell.w;
  const int y_end = cell.y + cell.h;

  for (std::size_t k = 0; k < text.size(); ++k) {
    const auto& g = font::glyph(text[k]);
    const int gx = ox + static_cast<int>(k) * font::kAdvance * scale;
    if (gx >= x_end) break;
    for (int row = 0; row < font::kGlyphHeight; ++row) {
      for (int col = 0; col < font::kGlyphWidth; ++col) {
        if (!((g[row] >> (font::kGlyphWidth - 1 - col)) & 1)) continue;
        const int px = gx + col * scale;
        const int py = oy + row * scale;
        for (int dy = 0; dy < scale && py + dy < y_end; ++dy) {
          for (int dx = 0; dx < scale && px + dx < x_end; ++dx) canvas.set(px + dx, py + dy);
        }
      }
    }
  }
}

}  // namespace

Canvas encode_stml(const EncoderModel& model, std::span<const double> x) {
  const auto& scaler = require_fitted(model, EncoderKind::Stml);
  require_length(scaler, x);
  const auto& grid = std::get<StmlGrid>(model.layout);
  Canvas canvas(model.size.width, model.size.height);
  for (std::size_t f = 0; f < x.size(); ++f) render_text(canvas, grid.cell(f), font::format_value(x[f]));
  return canvas;
}

// ---------------------------------------------------------------------------
// IGTD

std::pair<int, int> igtd_grid(std::size_t n_features) {
  std::size_t cols = 1;
  while (cols * cols < n_features) ++cols;
  const std::size_t rows = (n_features + cols - 1) / cols;
  return {static_cast<int>(rows), static_cast<int>(cols)};
}

namespace {

// Doubled average ranks of the strict upper triangle of a symmetric n x n
// distance matrix, scattered back into a symmetric matrix.
std::vector<std::int64_t> pair_ranks(std::size_t n, const std::vector<double>& dist) {
  std::vector<double> upper;
  upper.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) upper.push_back(dist[i * n + j]);
  }
  const auto ranks = doubled_average_ranks(upper);
  std::vector<std::int64_t> out(n * n, 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      out[i * n + j] = ranks[k];
      out[j * n + i] = ranks[k];
    }
  }
  return out;
}

}  // namespace

std::int64_t IgtdProblem::doubled_error(std::span<const std::size_t> a) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += std::llabs(feature_rank[i * n + j] - pixel_rank[a[i] * n + a[j]]);
    }
  }
  return total;
}

IgtdProblem make_igtd_problem(const Matrix& scaled_train) {
  const std::size_t n = scaled_train.cols();
  if (n < 2) throw FitError("IGTD needs at least 2 features");
  if (scaled_train.rows() == 0) throw FitError("IGTD needs training rows");
  IgtdProblem p;
  p.n = n;
  std::tie(p.rows, p.cols) = igtd_grid(n);

  std::vector<double> feature_dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < scaled_train.rows(); ++r) {
        const double d = scaled_train(r, i) - scaled_train(r, j);
        acc += d * d;
      }
      feature_dist[i * n + j] = feature_dist[j * n + i] = std::sqrt(acc);
    }
  }
  // squared integer distances rank identically to Euclidean ones and tie exactly
  std::vector<double> cell_dist(n * n, 0.0);
  const auto cols = static_cast<std::size_t>(p.cols);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dr = static_cast<double>(a / cols) - static_cast<double>(b / cols);
      const double dc = static_cast<double>(a % cols) - static_cast<double>(b % cols);
      cell_dist[a * n + b] = cell_dist[b * n + a] = dr * dr + dc * dc;
    }
  }
  p.feature_rank = pair_ranks(n, feature_dist);
  p.pixel_rank = pair_ranks(n, cell_dist);
  return p;
}

IgtdMapping optimize_igtd(const IgtdProblem& problem, const IgtdOptions& options) {
  const std::size_t n = problem.n;
  const auto& F = problem.feature_rank;
  const auto& P = problem.pixel_rank;
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();

  IgtdMapping m;
  m.rows = problem.rows;
  m.cols = problem.cols;
  m.assignment.resize(n);
  std::iota(m.assignment.begin(), m.assignment.end(), std::size_t{0});
  auto& a = m.assignment;

  std::int64_t error = problem.doubled_error(a);
  m.error_trace.push_back(static_cast<double>(error) / 2.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
  }

  std::size_t stale = 0;
  while (error > 0 && m.scans < options.max_iters) {
    Rng rng(derive_seed(options.seed, m.scans));
    rng.shuffle(std::span(pairs));
    bool improved = false;
    for (const auto& [p, q] : pairs) {
      const std::size_t cp = a[p];
      const std::size_t cq = a[q];
      std::int64_t delta = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const std::size_t ck = a[k];
        const std::int64_t fp = F[p * n + k];
        const std::int64_t fq = F[q * n + k];
        const std::int64_t pp = P[cp * n + ck];
        const std::int64_t pq = P[cq * n + ck];
        delta += std::llabs(fp - pq) - std::llabs(fp - pp) + std::llabs(fq - pp) - std::llabs(fq - pq);
      }
      if (delta < 0) {
        std::swap(a[p], a[q]);
        error += delta;
        ++m.swaps;
        improved = true;
      }
    }
    ++m.scans;
    m.error_trace.push_back(static_cast<double>(error) / 2.0);
    if (options.observer) options.observer(a, error);

    stale = improved ? 0 : stale + 1;
    if (stale >= std::max<std::size_t>(options.patience, 1)) break;
    if (options.budget_secs > 0.0 &&
        std::chrono::duration<double>(clock::now() - started).count() > options.budget_secs) {
      m.truncated = true;
      break;
    }
  }
  return m;
}

EncoderModel fit_igtd(const Dataset& train, const IgtdOptions& options, double l, double u) {
  require_features(train);
  if (train.n_features() < 2) throw FitError("IGTD needs at least 2 features");
  EncoderModel m;
  m.kind = EncoderKind::Igtd;
  m.scaler = fit_scaler(train.X, l, u);
  m.scaler->feature_names = train.feature_names;
  const auto problem = make_igtd_problem(transform_rows(*m.scaler, train.X));
  auto mapping = optimize_igtd(problem, options);
  m.size = {mapping.cols, mapping.rows};
  m.layout = std::move(mapping);
  return m;
}

Canvas encode_igtd(const EncoderModel& model, std::span<const double> x) {
  const auto& scaler = require_fitted(model, EncoderKind::Igtd);
  require_length(scaler, x);
  const auto& mapping = std::get<IgtdMapping>(model.layout);
  const auto scaled = transform(scaler, x);
  Canvas canvas(mapping.cols, mapping.rows);
  const auto cols = static_cast<std::size_t>(mapping.cols);
  for (std::size_t f = 0; f < scaled.size(); ++f) {
    const std::size_t cell = mapping.assignment[f];
    canvas.set(static_cast<int>(cell % cols), static_cast<int>(cell / cols),
               static_cast<std::uint8_t>(std::lround(255.0 * scaled[f])));
  }
  return canvas;
}

// ---------------------------------------------------------------------------

EncoderModel fit_encoder(EncoderKind kind, const Dataset& train, const EncoderParams& params) {
  switch (kind) {
    case EncoderKind::Retire: return fit_retire(train, params.l, params.u, params.size);
    case EncoderKind::Stml: return fit_stml(train, params.size);
    case EncoderKind::Igtd: return fit_igtd(train, params.igtd, params.l, params.u);
  }
  throw ParameterError("unknown encoder kind");
}

Canvas encode(const EncoderModel& model, std::span<const double> x) {
  switch (model.kind) {
    case EncoderKind::Retire: return encode_retire(model, x);
    case EncoderKind::Stml: return encode_stml(model, x);
    case EncoderKind::Igtd: return encode_igtd(model, x);
  }
  throw ParameterError("unknown encoder kind");
}

std::vector<Canvas> encode_rows(const EncoderModel& model, const Matrix& X, unsigned jobs) {
  if (!model.fitted()) throw StateError("encoder model is not fitted");
  std::vector<Canvas> out(X.rows());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(X.rows())));
  if (workers <= 1) {
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = encode(model, X.row(r));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < X.rows() && !failed; r = next++) {
        try {
          out[r] = encode(model, X.row(r));
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mde
