#pragma once

#include <cstddef>
#include <string>

namespace hidmap {

// HSL components in [0,1]; stroke width in px at the 1000x1000 reference viewport.
struct Style {
  double hue = 0.0;
  double saturation = 0.0;
  double lightness = 0.0;
  double stroke_width = 0.0;
  friend bool operator==(const Style&, const Style&) = default;
};

namespace encoding {

inline constexpr double kReferenceViewport = 1000.0;
inline constexpr double kMarbleHue = 0.5;
inline constexpr double kMarbleSaturation = 0.6;
inline constexpr double kMarbleLightness = 0.5;

// Order position i of n visible dimensions onto [0, 0.4] U [0.6, 0.9].
double hue_for_dimension(std::size_t i, std::size_t n) noexcept;
// Value j of k: 0.4 (darkest, lexicographically first) to 0.7.
double lightness_for_value(std::size_t j, std::size_t k) noexcept;
// 0.25 for the smallest leaf to 1.0 for the largest.
double saturation_for_leaf(double a, double amin, double amax) noexcept;
// 6.0 px for the first dimension down to 1.5 px for the last.
double stroke_width_for_depth(std::size_t d, std::size_t n) noexcept;

Style leaf_fill(std::size_t last_order_pos, std::size_t n_visible, std::size_t value, std::size_t value_count,
                double leaf_area, double amin, double amax) noexcept;

struct Rgb {
  int r, g, b;
};
Rgb hsl_to_rgb(double h, double s, double l) noexcept;
// "#rrggbb"
std::string hex_color(double h, double s, double l);

}  // namespace encoding
}  // namespace hidmap
