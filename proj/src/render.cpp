#include "hidmap/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace hidmap {
namespace render {

std::string fmt6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

std::string percent_caption(double percentage) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, percentage, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr) + "%";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

ViewTransform overview_transform(const RenderOptions& opts, double circumradius) {
  const double side = std::min(opts.width, opts.height);
  return {0.4 * side / circumradius, 0.5 * opts.width, 0.5 * opts.height};
}

Box detail_box(const RenderOptions& opts) {
  return {0.05 * opts.width, 0.12 * opts.height, 0.9 * opts.width, 0.76 * opts.height};
}

}  // namespace render

namespace {

using render::fmt6;
using render::xml_escape;

std::string path_data(const ConvexPolygon& poly, const ViewTransform& t) {
  std::string d;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = t.to_px(poly[i]);
    d += i == 0 ? "M" : " L";
    d += fmt6(p.x) + " " + fmt6(p.y);
  }
  return d + " Z";
}

std::string model_path_data(const ConvexPolygon& poly) {
  std::string d;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    d += i == 0 ? "M" : " L";
    d += fmt6(poly[i].x) + " " + fmt6(poly[i].y);
  }
  return d + " Z";
}

std::string color(double h, double s, double l) { return encoding::hex_color(h, s, l); }

double font_size(const RenderOptions& opts) { return 0.022 * opts.height; }

double stroke_scale(const RenderOptions& opts) {
  return std::min(opts.width, opts.height) / encoding::kReferenceViewport;
}

bool in_subtree(const LayoutTree& tree, std::size_t node, std::size_t ancestor) {
  for (std::optional<std::size_t> at = node; at; at = tree.nodes[*at].parent) {
    if (*at == ancestor) return true;
  }
  return false;
}

// Every stroked cut inside `within`: the owner's upper cut, deepest first.
std::vector<std::size_t> cut_owners(const LayoutTree& tree, std::size_t within) {
  std::vector<std::size_t> owners;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].upper_cut && i != within && in_subtree(tree, i, within)) owners.push_back(i);
  }
  std::stable_sort(owners.begin(), owners.end(), [&](std::size_t a, std::size_t b) {
    return tree.nodes[a].depth > tree.nodes[b].depth;
  });
  return owners;
}

std::string cut_stroke(const LayoutTree& tree, const LayoutNode& node) {
  const std::size_t n = tree.cut_order.size();
  const auto pos = static_cast<std::size_t>(node.depth);
  return color(encoding::hue_for_dimension(pos, n), 1.0, node.style.lightness);
}

std::string value_path_text(const LayoutTree& tree, const Dataset& ds, std::size_t index) {
  const auto summary = node_summary(tree, ds, index);
  std::string text;
  for (const auto& [dim, value] : summary.value_path) {
    if (!text.empty()) text += ", ";
    text += dim + ": " + value;
  }
  return text.empty() ? "all data" : text;
}

void emit_text(std::string& out, Point at, const std::string& text, double size, const std::string& fill,
               const char* anchor = "middle") {
  out += "<text x=\"" + fmt6(at.x) + "\" y=\"" + fmt6(at.y) + "\" font-size=\"" + fmt6(size) +
         "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\">" + xml_escape(text) + "</text>\n";
}

}  // namespace

std::string detail_panel(const LayoutTree& tree, const Dataset& ds, std::uint64_t node_id,
                         const RenderOptions& opts, double origin_x) {
  const auto found = tree.find(node_id);
  if (!found) throw Error(ErrorCode::UnknownNode, "no node with id " + std::to_string(node_id));
  const std::size_t index = *found;
  const LayoutNode& node = tree.nodes[index];

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const Point& p : node.polygon.vertices()) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const render::Box box = render::detail_box(opts);
  const double scale = std::min(box.w / (max_x - min_x), box.h / (max_y - min_y));
  const double tx = origin_x + box.x + 0.5 * box.w - scale * 0.5 * (min_x + max_x);
  const double ty = box.y + 0.5 * box.h + scale * 0.5 * (min_y + max_y);
  const double px = 1.0 / scale;  // one screen pixel in model units

  std::string out;
  out += "<g class=\"detail\" data-node=\"" + std::to_string(node.id) + "\">\n";
  out += "<rect x=\"" + fmt6(origin_x) + "\" y=\"0.000000\" width=\"" + fmt6(opts.width) + "\" height=\"" +
         fmt6(opts.height) + "\" fill=\"#ffffff\" stroke=\"#999999\"/>\n";
  emit_text(out, {origin_x + 0.5 * opts.width, 0.06 * opts.height}, value_path_text(tree, ds, index),
            font_size(opts), "#222222");
  out += "<g class=\"magnified\" transform=\"matrix(" + fmt6(scale) + " 0 0 " + fmt6(-scale) + " " + fmt6(tx) +
         " " + fmt6(ty) + ")\">\n";

  const Style& base = node.style;
  out += "<path d=\"" + model_path_data(node.polygon) + "\" fill=\"" +
         color(base.hue, base.saturation, base.lightness) + "\" stroke=\"none\"/>\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& leaf = tree.nodes[i];
    if (!tree.is_leaf(leaf) || !in_subtree(tree, i, index)) continue;
    out += "<path d=\"" + model_path_data(leaf.polygon) + "\" fill=\"" +
           color(leaf.style.hue, leaf.style.saturation, leaf.style.lightness) + "\"/>\n";
  }
  const double sscale = stroke_scale(opts);
  for (std::size_t i : cut_owners(tree, index)) {
    const auto& owner = tree.nodes[i];
    const Segment& s = *owner.upper_cut;
    out += "<line x1=\"" + fmt6(s.a.x) + "\" y1=\"" + fmt6(s.a.y) + "\" x2=\"" + fmt6(s.b.x) + "\" y2=\"" +
           fmt6(s.b.y) + "\" stroke=\"" + cut_stroke(tree, owner) + "\" stroke-width=\"" +
           fmt6(owner.style.stroke_width * sscale * px) + "\"/>\n";
  }
  out += "<path d=\"" + model_path_data(node.polygon) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"" +
         fmt6(1.5 * sscale * px) + "\"/>\n";
  if (opts.show_marbles) {
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (!in_subtree(tree, i, index)) continue;
      for (const auto& m : tree.nodes[i].marbles) {
        out += "<circle cx=\"" + fmt6(m.position.x) + "\" cy=\"" + fmt6(m.position.y) + "\" r=\"" +
               fmt6(m.radius) + "\" fill=\"" +
               color(encoding::kMarbleHue, encoding::kMarbleSaturation, encoding::kMarbleLightness) + "\"/>\n";
      }
    }
  }
  out += "</g>\n";
  const double pct = index == 0 ? 100.0 : node_summary(tree, ds, index).percentage;
  emit_text(out, {origin_x + 0.5 * opts.width, 0.96 * opts.height}, render::percent_caption(pct),
            font_size(opts), "#222222");
  out += "</g>\n";
  return out;
}

std::string to_svg(const LayoutTree& tree, const Dataset& ds, const RenderOptions& opts) {
  if (opts.width < 100 || opts.height < 100) {
    throw Error(ErrorCode::InvalidPosition, "viewport must be at least 100x100");
  }
  const ViewTransform t = render::overview_transform(opts, tree.circumradius);
  const double sscale = stroke_scale(opts);
  const double fsize = font_size(opts);
  const int total_width = opts.detail_node ? 2 * opts.width : opts.width;
  const std::size_t n_cut = tree.cut_order.size();

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(total_width) +
         "\" height=\"" + std::to_string(opts.height) + "\" viewBox=\"0 0 " + std::to_string(total_width) + " " +
         std::to_string(opts.height) + "\" font-family=\"sans-serif\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" fill=\"#ffffff\"/>\n";

  out += "<g class=\"leaves\">\n";
  for (const auto& node : tree.nodes) {
    if (!tree.is_leaf(node)) continue;
    out += "<path id=\"n" + std::to_string(node.id) + "\" d=\"" + path_data(node.polygon, t) + "\" fill=\"" +
           color(node.style.hue, node.style.saturation, node.style.lightness) + "\"/>\n";
  }
  out += "</g>\n<g class=\"cuts\">\n";
  for (std::size_t i : cut_owners(tree, 0)) {
    const auto& owner = tree.nodes[i];
    const Point a = t.to_px(owner.upper_cut->a), b = t.to_px(owner.upper_cut->b);
    out += "<line x1=\"" + fmt6(a.x) + "\" y1=\"" + fmt6(a.y) + "\" x2=\"" + fmt6(b.x) + "\" y2=\"" + fmt6(b.y) +
           "\" stroke=\"" + cut_stroke(tree, owner) + "\" stroke-width=\"" +
           fmt6(owner.style.stroke_width * sscale) + "\" stroke-linecap=\"round\"/>\n";
  }
  out += "</g>\n<g class=\"sides\">\n";
  const ConvexPolygon& root = tree.root().polygon;
  out += "<path d=\"" + path_data(root, t) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"" +
         fmt6(1.0 * sscale) + "\"/>\n";
  for (const auto& entry : tree.sides.entries) {
    const Point a = t.to_px(root.edge_start(entry.side)), b = t.to_px(root.edge_end(entry.side));
    auto pos = std::find(tree.cut_order.begin(), tree.cut_order.end(), entry.dimension);
    if (pos == tree.cut_order.end()) {
      out += "<line x1=\"" + fmt6(a.x) + "\" y1=\"" + fmt6(a.y) + "\" x2=\"" + fmt6(b.x) + "\" y2=\"" + fmt6(b.y) +
             "\" stroke=\"#aaaaaa\" stroke-width=\"" + fmt6(1.5 * sscale) + "\" stroke-dasharray=\"6 4\"/>\n";
      continue;
    }
    const auto i = static_cast<std::size_t>(pos - tree.cut_order.begin());
    out += "<line x1=\"" + fmt6(a.x) + "\" y1=\"" + fmt6(a.y) + "\" x2=\"" + fmt6(b.x) + "\" y2=\"" + fmt6(b.y) +
           "\" stroke=\"" + color(encoding::hue_for_dimension(i, n_cut), 1.0, 0.45) + "\" stroke-width=\"" +
           fmt6(encoding::stroke_width_for_depth(i, n_cut) * sscale) + "\"/>\n";
  }
  out += "</g>\n";

  if (opts.show_marbles) {
    out += "<g class=\"marbles\">\n";
    const std::string fill =
        color(encoding::kMarbleHue, encoding::kMarbleSaturation, encoding::kMarbleLightness);
    for (const auto& node : tree.nodes) {
      for (const auto& m : node.marbles) {
        const Point c = t.to_px(m.position);
        out += "<circle cx=\"" + fmt6(c.x) + "\" cy=\"" + fmt6(c.y) + "\" r=\"" + fmt6(m.radius * t.scale) +
               "\" fill=\"" + fill + "\"/>\n";
      }
    }
    out += "</g>\n";
  }

  if (opts.show_labels) {
    out += "<g class=\"labels\">\n";
    const Point center = t.to_px({0, 0});
    for (const auto& entry : tree.sides.entries) {
      const Point mid = t.to_px(0.5 * (root.edge_start(entry.side) + root.edge_end(entry.side)));
      const Point dir = mid - center;
      const double len = norm(dir);
      const Point at = mid + (0.06 * std::min(opts.width, opts.height) / len) * dir;
      const auto& dim = ds.dimension(entry.dimension);
      auto pos = std::find(tree.cut_order.begin(), tree.cut_order.end(), entry.dimension);
      std::string label = dim.name;
      std::string fill = "#888888";
      if (pos != tree.cut_order.end()) {
        fill = color(encoding::hue_for_dimension(static_cast<std::size_t>(pos - tree.cut_order.begin()), n_cut),
                     1.0, 0.35);
      } else {
        for (const auto& e : tree.drill.entries()) {
          if (e.dimension == entry.dimension) label += " = " + dim.values[e.value];
        }
      }
      emit_text(out, at, label, fsize, fill);
    }
    for (const auto& node : tree.nodes) {
      if (node.depth != 0) continue;
      const Point c = t.to_px(centroid(node.polygon));
      const auto& dim = ds.dimension(*node.dimension);
      emit_text(out, c, dim.values[node.value], fsize,
                color(encoding::hue_for_dimension(0, n_cut), 1.0, node.style.lightness));
    }
    if (!tree.drill.empty()) {
      std::string crumb;
      for (const auto& e : tree.drill.entries()) {
        if (!crumb.empty()) crumb += ", ";
        crumb += ds.dimension(e.dimension).name + ": " + ds.dimension(e.dimension).values[e.value];
      }
      emit_text(out, {0.5 * opts.width, 0.04 * opts.height}, crumb, fsize, "#222222");
    }
    out += "</g>\n";
  }

  if (opts.detail_node) out += detail_panel(tree, ds, *opts.detail_node, opts, opts.width);
  out += "</svg>\n";
  return out;
}

}  // namespace hidmap
