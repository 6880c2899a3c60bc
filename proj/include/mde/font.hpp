#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mde::font {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
/// Horizontal advance per character: glyph plus one blank column.
inline constexpr int kAdvance = kGlyphWidth + 1;

/// One 5x7 glyph, a row per byte; bit 4 is the leftmost column.
using Glyph = std::array<std::uint8_t, kGlyphHeight>;

/// Glyph for `ch`; characters outside the numeric set render blank.
const Glyph& glyph(char ch) noexcept;

/// Width in pixels of `text` at scale 1 (no trailing gap).
constexpr int text_width(std::size_t length) noexcept {
  return length == 0 ? 0 : static_cast<int>(length) * kAdvance - 1;
}

/// Formats a feature value with 4 significant digits. Fixed notation is used
/// when the decimal exponent lies in [-4, 3] and the result fits in 7
/// characters; otherwise compact scientific notation ("1.235e5", "-2.500e-7").
std::string format_value(double value);

}  // namespace mde::font
