#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hidmap/layout.hpp"

namespace hidmap {

struct RenderOptions {
  int width = 1000;
  int height = 1000;
  bool show_marbles = true;
  bool show_labels = true;
  // When set, a second panel of the same size is drawn to the right.
  std::optional<std::uint64_t> detail_node;
};

// Model -> pixel mapping with the y axis flipped.
struct ViewTransform {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Point to_px(Point p) const noexcept { return {offset_x + scale * p.x, offset_y - scale * p.y}; }
};

namespace render {

// The overview fits the circumradius into 40% of the smaller viewport side.
ViewTransform overview_transform(const RenderOptions& opts, double circumradius);

// Content box of the detail panel, relative to the panel origin: 5% side
// insets, 12% top and bottom bands for the captions.
struct Box {
  double x, y, w, h;
};
Box detail_box(const RenderOptions& opts);

// Fixed six-decimal text, "-0" normalised to "0".
std::string fmt6(double v);
std::string percent_caption(double percentage);  // "7.40%"
std::string xml_escape(std::string_view s);

}  // namespace render

// Throws InvalidPosition for a viewport under 100x100, UnknownNode for a bad detail node.
std::string to_svg(const LayoutTree& tree, const Dataset& ds, const RenderOptions& opts = {});

// A <g> holding the magnified node: value path at the top, percentage at the bottom.
// `origin_x` is the panel's left edge in the enclosing document.
std::string detail_panel(const LayoutTree& tree, const Dataset& ds, std::uint64_t node_id,
                         const RenderOptions& opts, double origin_x = 0.0);

}  // namespace hidmap
