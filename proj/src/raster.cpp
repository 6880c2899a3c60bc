#include "mde/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "mde/error.hpp"

namespace mde {

Canvas::Canvas(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ParameterError("canvas size must be positive (got " + std::to_string(width) + "x" +
                         std::to_string(height) + ")");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, kBackground);
}

bool Canvas::is_binary() const noexcept {
  return std::all_of(pixels_.begin(), pixels_.end(),
                     [](std::uint8_t v) { return v == kBackground || v == kForeground; });
}

std::size_t Canvas::count_foreground() const noexcept {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), kForeground));
}

PolarLayout default_layout(int width, int height, std::size_t n) {
  const double r_max = std::min(width, height) / 2.0 - kRadarMargin;
  if (r_max <= 0.0) throw ParameterError("canvas too small for the radar margin");
  return {width / 2.0, height / 2.0, r_max, n};
}

std::vector<Point> polar_vertices(const PolarLayout& layout, std::span<const double> scaled) {
  if (scaled.size() != layout.n || layout.n == 0) {
    throw ShapeError("expected " + std::to_string(layout.n) + " scaled values, got " +
                     std::to_string(scaled.size()));
  }
  std::vector<Point> pts(scaled.size());
  const double step = 2.0 * std::numbers::pi / static_cast<double>(layout.n);
  for (std::size_t k = 0; k < scaled.size(); ++k) {
    const double angle = static_cast<double>(k) * step - std::numbers::pi / 2.0;
    const double r = layout.r_max * scaled[k];
    pts[k] = {layout.cx + r * std::cos(angle), layout.cy + r * std::sin(angle)};
  }
  return pts;
}

namespace {

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Liang-Barsky clip of segment a-b against [x0, x1] x [y0, y1].
bool clip_segment(Point& a, Point& b, double x0, double y0, double x1, double y1) {
  double t0 = 0.0;
  double t1 = 1.0;
  int k0 = -1, k1 = -1;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      if (t > t0) {
        t0 = t;
        k0 = k;
      }
    } else if (t < t1) {
      t1 = t;
      k1 = k;
    }
    if (t0 > t1) return false;
  }
  // Put the clipped endpoint exactly on its boundary and take the other
  // coordinate from the slope; t alone loses everything for huge inputs.
  const double bound[4] = {x0, x1, y0, y1};
  const Point start = a;
  auto onto = [&](int k) -> Point {
    if (k < 2) return {bound[k], start.y + (bound[k] - start.x) * (dy / dx)};
    return {start.x + (bound[k] - start.y) * (dx / dy), bound[k]};
  };
  if (k0 >= 0) a = onto(k0);
  if (k1 >= 0) b = onto(k1);
  return true;
}

void plot(Canvas& c, long long i, long long j) {
  if (c.contains(i, j)) c.set(static_cast<int>(i), static_cast<int>(j));
}

void draw_segment(Canvas& c, Point a, Point b) {
  if (!finite(a) || !finite(b)) return;
  const double x0 = -2.0, y0 = -2.0, x1 = c.width() + 2.0, y1 = c.height() + 2.0;
  auto outside = [&](Point p) { return p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1; };
  if ((outside(a) || outside(b)) && !clip_segment(a, b, x0, y0, x1, y1)) return;

  long long i0 = static_cast<long long>(std::floor(a.x));
  long long j0 = static_cast<long long>(std::floor(a.y));
  const long long i1 = static_cast<long long>(std::floor(b.x));
  const long long j1 = static_cast<long long>(std::floor(b.y));
  const long long di = std::llabs(i1 - i0);
  const long long dj = -std::llabs(j1 - j0);
  const long long si = i0 < i1 ? 1 : -1;
  const long long sj = j0 < j1 ? 1 : -1;
  long long err = di + dj;
  while (true) {
    plot(c, i0, j0);
    if (i0 == i1 && j0 == j1) break;
    const long long e2 = 2 * err;
    if (e2 >= dj) {
      err += dj;
      i0 += si;
    }
    if (e2 <= di) {
      err += di;
      j0 += sj;
    }
  }
}

double signed_area2(std::span<const Point> pts) {
  double acc = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point& p = pts[k];
    const Point& q = pts[(k + 1) % pts.size()];
    acc += p.x * q.y - q.x * p.y;
  }
  return acc;
}

// Smallest pixel index i with i + 0.5 >= x, for x already bounded to the canvas range.
long long first_center_at_or_after(double x) {
  auto i = static_cast<long long>(std::ceil(x - 0.5));
  while (static_cast<double>(i) + 0.5 < x) ++i;
  while (static_cast<double>(i - 1) + 0.5 >= x) --i;
  return i;
}

}  // namespace

void draw_polyline(Canvas& c, std::span<const Point> pts, bool closed) {
  if (pts.empty()) return;
  if (pts.size() == 1) {
    draw_segment(c, pts[0], pts[0]);
    return;
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) draw_segment(c, pts[k], pts[k + 1]);
  if (closed && pts.size() > 2) draw_segment(c, pts.back(), pts.front());
}

void scanline_fill(Canvas& c, std::span<const Point> pts) {
  if (pts.size() < 3) return;
  const int height = c.height();
  const double x_lo = -1.0;
  const double x_hi = c.width() + 1.0;
  std::vector<std::vector<double>> crossings(static_cast<std::size_t>(height));

  for (std::size_t k = 0; k < pts.size(); ++k) {
    Point a = pts[k];
    Point b = pts[(k + 1) % pts.size()];
    if (!finite(a) || !finite(b) || a.y == b.y) continue;
    if (a.y > b.y) std::swap(a, b);
    // rows whose center ordinate lies in [a.y, b.y)
    const double j_first = std::max(std::ceil(a.y - 0.5) - 1.0, 0.0);
    const double j_last = std::min(std::ceil(b.y - 0.5) + 1.0, static_cast<double>(height));
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    for (auto j = static_cast<long long>(j_first); j < static_cast<long long>(j_last); ++j) {
      const double yc = static_cast<double>(j) + 0.5;
      if (yc < a.y || yc >= b.y) continue;
      const double x = a.x + (yc - a.y) * dx / dy;
      crossings[static_cast<std::size_t>(j)].push_back(std::clamp(x, x_lo, x_hi));
    }
  }

  for (int j = 0; j < height; ++j) {
    auto& xs = crossings[static_cast<std::size_t>(j)];
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const long long i_begin = std::max(first_center_at_or_after(xs[k]), 0LL);
      const long long i_end = std::min(first_center_at_or_after(xs[k + 1]),
                                       static_cast<long long>(c.width()));
      for (long long i = i_begin; i < i_end; ++i) c.set(static_cast<int>(i), j);
    }
  }
}

void fill_polygon(Canvas& c, std::span<const Point> pts) {
  if (pts.size() >= 3 && signed_area2(pts) != 0.0) scanline_fill(c, pts);
  draw_polyline(c, pts, true);
}

std::string encode_pgm(const Canvas& c) {
  std::string out = "P5\n" + std::to_string(c.width()) + " " + std::to_string(c.height()) + "\n255\n";
  const auto px = c.pixels();
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

std::string encode_ppm(const Canvas& c) {
  std::string out = "P6\n" + std::to_string(c.width()) + " " + std::to_string(c.height()) + "\n255\n";
  out.reserve(out.size() + c.pixels().size() * 3);
  for (auto v : c.pixels()) out.append(3, static_cast<char>(v));
  return out;
}

void write_image(const Canvas& c, const std::filesystem::path& path, int channels) {
  if (channels != 1 && channels != 3) throw ParameterError("channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto bytes = channels == 1 ? encode_pgm(c) : encode_ppm(c);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mde
