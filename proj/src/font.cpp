#include "mde/font.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace mde::font {

namespace {

constexpr Glyph kBlank{};

// Classic public-domain 5x7 numerals.
constexpr Glyph kDigits[10] = {
    {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},
    {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
    {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},
    {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},
    {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},
    {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},
    {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},
    {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},
    {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},
    {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},
};
constexpr Glyph kDot{0, 0, 0, 0, 0, 0b01100, 0b01100};
constexpr Glyph kMinus{0, 0, 0, 0b11111, 0, 0, 0};
constexpr Glyph kPlus{0, 0b00100, 0b00100, 0b11111, 0b00100, 0b00100, 0};
constexpr Glyph kExp{0, 0, 0b01110, 0b10001, 0b11111, 0b10000, 0b01110};

}  // namespace

const Glyph& glyph(char ch) noexcept {
  if (ch >= '0' && ch <= '9') return kDigits[ch - '0'];
  switch (ch) {
    case '.': return kDot;
    case '-': return kMinus;
    case '+': return kPlus;
    case 'e': return kExp;
    default: return kBlank;
  }
}

std::string format_value(double value) {
  if (value == 0.0) return "0.000";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  // %.3e rounds to 4 significant digits and reports the post-rounding exponent.
  std::snprintf(buf, sizeof buf, "%.3e", value);
  std::string sci(buf);
  const auto e_pos = sci.find('e');
  const int exponent = std::atoi(sci.c_str() + e_pos + 1);

  if (exponent >= -4 && exponent <= 3) {
    std::snprintf(buf, sizeof buf, "%.*f", 3 - exponent, value);
    std::string fixed(buf);
    if (fixed.size() <= 7) return fixed;
  }
  return sci.substr(0, e_pos) + "e" + std::to_string(exponent);
}

}  // namespace mde::font
