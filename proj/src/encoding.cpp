#include "hidmap/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hidmap::encoding {

double hue_for_dimension(std::size_t i, std::size_t n) noexcept {
  if (n <= 1) return 0.0;
  if (i + 1 >= n) return 0.9;
  const double s = 0.7 * static_cast<double>(i) / static_cast<double>(n - 1);
  // skip the band reserved for area around 0.5
  return s <= 0.4 ? s : 0.6 + (s - 0.4);
}

double lightness_for_value(std::size_t j, std::size_t k) noexcept {
  if (k <= 1) return 0.4;
  if (j + 1 >= k) return 0.7;
  return 0.4 + 0.3 * static_cast<double>(j) / static_cast<double>(k - 1);
}

double saturation_for_leaf(double a, double amin, double amax) noexcept {
  if (!(amax > amin)) return 1.0;
  if (a <= amin) return 0.25;
  if (a >= amax) return 1.0;
  return 0.25 + 0.75 * (a - amin) / (amax - amin);
}

double stroke_width_for_depth(std::size_t d, std::size_t n) noexcept {
  if (n <= 1) return 6.0;
  if (d + 1 >= n) return 1.5;
  return 6.0 - 4.5 * static_cast<double>(d) / static_cast<double>(n - 1);
}

Style leaf_fill(std::size_t last_order_pos, std::size_t n_visible, std::size_t value, std::size_t value_count,
                double leaf_area, double amin, double amax) noexcept {
  return {hue_for_dimension(last_order_pos, n_visible), saturation_for_leaf(leaf_area, amin, amax),
          lightness_for_value(value, value_count), stroke_width_for_depth(last_order_pos, n_visible)};
}

Rgb hsl_to_rgb(double h, double s, double l) noexcept {
  auto channel = [&](double t) {
    t -= std::floor(t);
    const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
    const double p = 2 * l - q;
    double v;
    if (t < 1.0 / 6) v = p + (q - p) * 6 * t;
    else if (t < 0.5) v = q;
    else if (t < 2.0 / 3) v = p + (q - p) * (2.0 / 3 - t) * 6;
    else v = p;
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  return {channel(h + 1.0 / 3), channel(h), channel(h - 1.0 / 3)};
}

std::string hex_color(double h, double s, double l) {
  const Rgb c = hsl_to_rgb(h, s, l);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

}  // namespace hidmap::encoding
