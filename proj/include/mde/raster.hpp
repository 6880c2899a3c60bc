#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mde {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Single-channel 8-bit image. Origin top-left, x to the right, y down;
/// pixel (i, j) covers [i, i+1) x [j, j+1) and is sampled at its center.
class Canvas {
 public:
  static constexpr std::uint8_t kForeground = 255;
  static constexpr std::uint8_t kBackground = 0;

  Canvas() = default;
  Canvas(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool contains(long long i, long long j) const noexcept {
    return i >= 0 && j >= 0 && i < width_ && j < height_;
  }

  std::uint8_t at(int i, int j) const noexcept { return pixels_[static_cast<std::size_t>(j) * width_ + i]; }
  void set(int i, int j, std::uint8_t v = kForeground) noexcept {
    pixels_[static_cast<std::size_t>(j) * width_ + i] = v;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  /// True when every pixel is 0 or 255.
  bool is_binary() const noexcept;
  std::size_t count_foreground() const noexcept;

  bool operator==(const Canvas&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Radar-chart geometry: value 1.0 sits at `r_max` pixels from the center.
struct PolarLayout {
  double cx = 0.0;
  double cy = 0.0;
  double r_max = 0.0;
  std::size_t n = 0;

  bool operator==(const PolarLayout&) const = default;
};

inline constexpr int kRadarMargin = 4;

/// Centered layout with r_max = min(W, H) / 2 - kRadarMargin.
PolarLayout default_layout(int width, int height, std::size_t n);

/// Vertex n (0-based) at angle 2*pi*n/N, measured clockwise from 12 o'clock.
std::vector<Point> polar_vertices(const PolarLayout& layout, std::span<const double> scaled);

/// 1-pixel segments between the pixels containing consecutive points
/// (integer Bresenham stepping). Pixels off the canvas are skipped.
void draw_polyline(Canvas& c, std::span<const Point> pts, bool closed);

/// Even-odd scanline fill only: pixel (i, j) is set iff its center lies
/// inside the polygon. Edges count on the half-open span [y_min, y_max).
void scanline_fill(Canvas& c, std::span<const Point> pts);

/// Scanline fill followed by a closed outline stroke. Zero-area polygons
/// reduce to the stroke.
void fill_polygon(Canvas& c, std::span<const Point> pts);

/// Binary PGM (P5, maxval 255).
std::string encode_pgm(const Canvas& c);
/// Binary PPM (P6) with the gray plane replicated into all three channels.
std::string encode_ppm(const Canvas& c);
void write_image(const Canvas& c, const std::filesystem::path& path, int channels);

}  // namespace mde
