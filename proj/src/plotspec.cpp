#include "vecscope/plotspec.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vecscope/canonical_json.hpp"
#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"

namespace vecscope {

PlotSpec scatter_projection(const EmbeddingSet& set, std::string_view x_axis,
                            std::string_view y_axis, const VectorStore& store,
                            bool show_axis_point) {
  const Embedding x = evaluate(parse(x_axis), store);
  const Embedding y = evaluate(parse(y_axis), store);
  return scatter_projection(set, x, y, show_axis_point);
}

PlotSpec scatter_projection(const EmbeddingSet& set, const Embedding& x_axis,
                            const Embedding& y_axis, bool show_axis_point) {
  if (!set.empty()) {
    require_same_dim(set.dim(), x_axis.dim(), "x axis");
    require_same_dim(set.dim(), y_axis.dim(), "y axis");
  }
  // Validate both axes even when the set is empty.
  projection_coefficient(x_axis, x_axis);
  projection_coefficient(y_axis, y_axis);

  PlotSpec spec;
  spec.kind = PlotKind::kScatter;
  spec.x_label = x_axis.expression();
  spec.y_label = y_axis.expression();
  for (const auto& m : set) {
    spec.points.push_back(
        {m.name(), projection_coefficient(m, x_axis), projection_coefficient(m, y_axis), {}});
  }
  if (show_axis_point) {
    for (const Embedding* axis : {&x_axis, &y_axis}) {
      const bool taken = set.contains(axis->name()) ||
                         std::any_of(spec.points.begin(), spec.points.end(),
                                     [&](const PlotPoint& p) { return p.name == axis->name(); });
      if (taken) continue;
      spec.points.push_back({axis->name(), projection_coefficient(*axis, x_axis),
                             projection_coefficient(*axis, y_axis), std::string(kAxisGroup)});
    }
  }
  return spec;
}

PlotSpec arrow_plot(const EmbeddingSet& set) {
  if (!set.empty() && set.dim() != 2) {
    throw DimensionError("arrow plots need 2-dimensional embeddings, got dimension " +
                         std::to_string(set.dim()) + "; apply pca or mds with k=2 first");
  }
  PlotSpec spec;
  spec.kind = PlotKind::kArrows;
  spec.x_label = "dim_0";
  spec.y_label = "dim_1";
  for (const auto& e : set) spec.points.push_back({e.name(), e.vector()[0], e.vector()[1], {}});
  return spec;
}

HeatmapSpec heatmap(const DistanceMatrix& matrix) {
  const auto n = static_cast<std::size_t>(matrix.values.rows());
  if (matrix.values.cols() != matrix.values.rows() || matrix.labels.size() != n) {
    throw InvalidArgument("distance matrix must be square with one label per row");
  }
  HeatmapSpec spec;
  spec.labels = matrix.labels;
  spec.metric = std::string(to_string(matrix.metric));
  spec.values.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      spec.values[i][j] = matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return spec;
}

PlotSpec transform_plot(const TransformResult& result) {
  PlotSpec spec;
  spec.kind = PlotKind::kScatter;
  spec.x_label = result.method + "_0";
  spec.y_label = result.k >= 2 ? result.method + "_1" : "";
  const std::size_t members = result.reduced.size() - result.k;
  for (std::size_t i = 0; i < result.reduced.size(); ++i) {
    const auto& e = result.reduced[i];
    PlotPoint p{e.name(), e.vector()[0], result.k >= 2 ? e.vector()[1] : 0.0, {}};
    if (i >= members) p.group = std::string(kAxisGroup);
    spec.points.push_back(std::move(p));
  }
  return spec;
}

std::string_view to_string(PlotKind kind) {
  return kind == PlotKind::kScatter ? "scatter" : "arrows";
}

nlohmann::json to_json(const PlotSpec& spec) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : spec.points) {
    nlohmann::json point = {{"name", p.name}, {"x", p.x}, {"y", p.y}};
    if (p.group) point["group"] = *p.group;
    points.push_back(std::move(point));
  }
  return {{"kind", to_string(spec.kind)},
          {"points", std::move(points)},
          {"x_label", spec.x_label},
          {"y_label", spec.y_label}};
}

nlohmann::json to_json(const HeatmapSpec& spec) {
  return {{"kind", "heatmap"},
          {"labels", spec.labels},
          {"values", spec.values},
          {"metric", spec.metric}};
}

nlohmann::json to_json(const TransformResult& result) {
  nlohmann::json json = to_json(transform_plot(result));
  if (result.method == "pca") json["explained_variance"] = result.explained_variance;
  return json;
}

namespace {

const nlohmann::json& field(const nlohmann::json& json, const char* key) {
  if (!json.is_object() || !json.contains(key)) {
    throw InvalidArgument(std::string("chart JSON is missing \"") + key + '"');
  }
  return json.at(key);
}

double finite_number(const nlohmann::json& json, const char* what) {
  if (!json.is_number() || !std::isfinite(json.get<double>())) {
    throw InvalidArgument(std::string("chart JSON field \"") + what + "\" must be a finite number");
  }
  return json.get<double>();
}

std::string string_field(const nlohmann::json& json, const char* key) {
  const auto& v = field(json, key);
  if (!v.is_string()) throw InvalidArgument(std::string("chart JSON field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

PlotSpec plot_from_json(const nlohmann::json& json) {
  PlotSpec spec;
  const std::string kind = string_field(json, "kind");
  if (kind == "scatter") {
    spec.kind = PlotKind::kScatter;
  } else if (kind == "arrows") {
    spec.kind = PlotKind::kArrows;
  } else {
    throw InvalidArgument("unknown plot kind \"" + kind + '"');
  }
  spec.x_label = string_field(json, "x_label");
  spec.y_label = string_field(json, "y_label");
  const auto& points = field(json, "points");
  if (!points.is_array()) throw InvalidArgument("chart JSON \"points\" must be an array");
  std::unordered_set<std::string> names;
  for (const auto& p : points) {
    PlotPoint point{string_field(p, "name"), finite_number(field(p, "x"), "x"),
                    finite_number(field(p, "y"), "y"), {}};
    if (p.contains("group")) point.group = string_field(p, "group");
    if (!names.insert(point.name).second) {
      throw InvalidArgument("duplicate point name \"" + point.name + '"');
    }
    spec.points.push_back(std::move(point));
  }
  return spec;
}

HeatmapSpec heatmap_from_json(const nlohmann::json& json) {
  if (string_field(json, "kind") != "heatmap") throw InvalidArgument("not a heatmap chart");
  HeatmapSpec spec;
  spec.metric = string_field(json, "metric");
  const auto& labels = field(json, "labels");
  const auto& values = field(json, "values");
  if (!labels.is_array() || !values.is_array() || labels.size() != values.size()) {
    throw InvalidArgument("heatmap labels and values must be arrays of equal length");
  }
  for (const auto& l : labels) {
    if (!l.is_string()) throw InvalidArgument("heatmap labels must be strings");
    spec.labels.push_back(l.get<std::string>());
  }
  for (const auto& row : values) {
    if (!row.is_array() || row.size() != labels.size()) {
      throw InvalidArgument("heatmap values must form a square matrix");
    }
    std::vector<double> r;
    for (const auto& v : row) r.push_back(finite_number(v, "values"));
    spec.values.push_back(std::move(r));
  }
  return spec;
}

std::string emit_json(const PlotSpec& spec) { return canonical_json(to_json(spec)); }
std::string emit_json(const HeatmapSpec& spec) { return canonical_json(to_json(spec)); }

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kPadFraction = 0.05;
constexpr double kMarginLeft = 64;
constexpr double kMarginRight = 24;
constexpr double kMarginTop = 24;
constexpr double kMarginBottom = 48;

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) return {lo - 0.5, lo + 0.5};
  const double pad = (hi - lo) * kPadFraction;
  return {lo - pad, hi + pad};
}

std::string escape_xml(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(fmt::memory_buffer& buf, int width, int height) {
  fmt::format_to(std::back_inserter(buf),
                 "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" "
                 "height=\"{1}\" viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n",
                 width, height);
}

void require_size(int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidArgument("SVG dimensions must be positive");
}

std::string tick(double v) { return fmt::format("{:.3g}", std::abs(v) < 1e-12 ? 0.0 : v); }

}  // namespace

Domain data_domain(const PlotSpec& spec) {
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool first = spec.kind != PlotKind::kArrows;
  for (const auto& p : spec.points) {
    if (first) {
      x_lo = x_hi = p.x;
      y_lo = y_hi = p.y;
      first = false;
      continue;
    }
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  auto [x0, x1] = padded(x_lo, x_hi);
  auto [y0, y1] = padded(y_lo, y_hi);
  return {x0, x1, y0, y1};
}

Domain merge(const Domain& a, const Domain& b) {
  return {std::min(a.x_min, b.x_min), std::max(a.x_max, b.x_max), std::min(a.y_min, b.y_min),
          std::max(a.y_max, b.y_max)};
}

ValueRange value_range(const HeatmapSpec& spec) {
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& row : spec.values) {
    for (double v : row) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (!(hi > lo)) return {lo - 0.5, lo + 0.5};
  return {lo, hi};
}

std::string render_svg(const PlotSpec& spec, int width_px, int height_px,
                       const std::optional<Domain>& domain) {
  require_size(width_px, height_px);
  const Domain d = domain ? *domain : data_domain(spec);
  const double plot_w = std::max(1.0, width_px - kMarginLeft - kMarginRight);
  const double plot_h = std::max(1.0, height_px - kMarginTop - kMarginBottom);
  auto sx = [&](double x) { return kMarginLeft + (x - d.x_min) / (d.x_max - d.x_min) * plot_w; };
  auto sy = [&](double y) {
    return kMarginTop + plot_h - (y - d.y_min) / (d.y_max - d.y_min) * plot_h;
  };
  fmt::memory_buffer buf;
  auto it = std::back_inserter(buf);
  open_svg(buf, width_px, height_px);
  const bool arrows = spec.kind == PlotKind::kArrows;
  if (arrows) {
    fmt::format_to(it,
                   "<defs><marker id=\"arrowhead\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
                   "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">"
                   "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333333\"/></marker></defs>\n");
  }

  // Frame and tick labels.
  const double left = kMarginLeft, right = kMarginLeft + plot_w;
  const double top = kMarginTop, bottom = kMarginTop + plot_h;
  fmt::format_to(it,
                 "<path class=\"frame\" d=\"M{:.2f},{:.2f} L{:.2f},{:.2f} L{:.2f},{:.2f}\" "
                 "fill=\"none\" stroke=\"#888888\"/>\n",
                 left, top, left, bottom, right, bottom);
  for (int i = 0; i <= 4; ++i) {
    const double fx = d.x_min + (d.x_max - d.x_min) * i / 4.0;
    const double fy = d.y_min + (d.y_max - d.y_min) * i / 4.0;
    fmt::format_to(it,
                   "<text class=\"tick\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" "
                   "text-anchor=\"middle\">{}</text>\n",
                   sx(fx), bottom + 14, tick(fx));
    fmt::format_to(it,
                   "<text class=\"tick\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" "
                   "text-anchor=\"end\">{}</text>\n",
                   left - 6, sy(fy) + 3, tick(fy));
  }
  fmt::format_to(it,
                 "<text class=\"axis-label\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" "
                 "text-anchor=\"middle\">{}</text>\n",
                 (left + right) / 2, static_cast<double>(height_px) - 8, escape_xml(spec.x_label));
  fmt::format_to(it,
                 "<text class=\"axis-label\" x=\"14\" y=\"{:.2f}\" font-size=\"12\" "
                 "text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2f})\">{}</text>\n",
                 (top + bottom) / 2, (top + bottom) / 2, escape_xml(spec.y_label));

  for (const auto& p : spec.points) {
    const double px = sx(p.x), py = sy(p.y);
    const bool axis_point = p.group && *p.group == kAxisGroup;
    if (arrows) {
      fmt::format_to(it,
                     "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                     "stroke=\"#333333\" stroke-width=\"1.5\" marker-end=\"url(#arrowhead)\"/>\n",
                     sx(0.0), sy(0.0), px, py);
    } else {
      fmt::format_to(it, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", px, py,
                     axis_point ? "#d62728" : "#1f77b4");
    }
    fmt::format_to(it,
                   "<text class=\"point-label\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\">{}</text>\n",
                   px + 6, py - 6, escape_xml(p.name));
  }
  fmt::format_to(it, "</svg>\n");
  return fmt::to_string(buf);
}

std::string render_svg(const HeatmapSpec& spec, int width_px, int height_px,
                       const std::optional<ValueRange>& range) {
  require_size(width_px, height_px);
  const ValueRange r = range ? *range : value_range(spec);
  const std::size_t n = spec.labels.size();
  const double label_space = 110;
  const double grid = std::max(1.0, std::min(width_px, height_px) - label_space - 10);
  const double cell = n > 0 ? grid / static_cast<double>(n) : grid;

  fmt::memory_buffer buf;
  auto it = std::back_inserter(buf);
  open_svg(buf, width_px, height_px);
  fmt::format_to(it, "<title>{} distance</title>\n", escape_xml(spec.metric));
  for (std::size_t i = 0; i < n; ++i) {
    const double center = label_space + (static_cast<double>(i) + 0.5) * cell;
    fmt::format_to(it,
                   "<text class=\"row-label\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" "
                   "text-anchor=\"end\">{}</text>\n",
                   label_space - 6, center + 4, escape_xml(spec.labels[i]));
    fmt::format_to(it,
                   "<text class=\"col-label\" x=\"{0:.2f}\" y=\"{1:.2f}\" font-size=\"11\" "
                   "transform=\"rotate(-45 {0:.2f} {1:.2f})\">{2}</text>\n",
                   center, label_space - 6, escape_xml(spec.labels[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = spec.values[i][j];
      const double t = std::clamp((v - r.min) / (r.max - r.min), 0.0, 1.0);
      const int gray = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      const double x = label_space + static_cast<double>(j) * cell;
      const double y = label_space + static_cast<double>(i) * cell;
      fmt::format_to(it,
                     "<rect class=\"cell\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
                     "height=\"{:.2f}\" fill=\"rgb({},{},{})\"/>\n",
                     x, y, cell, cell, gray, gray, gray);
      fmt::format_to(it,
                     "<text class=\"cell-value\" x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" "
                     "text-anchor=\"middle\" fill=\"{}\">{:.2f}</text>\n",
                     x + cell / 2, y + cell / 2 + 3, gray < 128 ? "#ffffff" : "#000000", v);
    }
  }
  fmt::format_to(it, "</svg>\n");
  return fmt::to_string(buf);
}

std::string render_svg_panels(std::span<const PlotSpec> specs, std::span<const std::string> titles,
                              int panel_width_px, int panel_height_px) {
  require_size(panel_width_px, panel_height_px);
  if (specs.size() != titles.size()) throw InvalidArgument("one title per panel is required");
  constexpr int kTitleHeight = 24;

  std::optional<Domain> shared;
  for (const auto& spec : specs) {
    const Domain d = data_domain(spec);
    shared = shared ? merge(*shared, d) : d;
  }

  const int width = panel_width_px * static_cast<int>(std::max<std::size_t>(specs.size(), 1));
  fmt::memory_buffer buf;
  auto it = std::back_inserter(buf);
  open_svg(buf, width, panel_height_px + kTitleHeight);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const int x = panel_width_px * static_cast<int>(i);
    fmt::format_to(it,
                   "<text class=\"panel-title\" x=\"{}\" y=\"16\" font-size=\"13\" "
                   "text-anchor=\"middle\">{}</text>\n",
                   x + panel_width_px / 2, escape_xml(titles[i]));
    std::string panel = render_svg(specs[i], panel_width_px, panel_height_px, shared);
    // Drop the XML declaration and place the nested root.
    panel.erase(0, panel.find('\n') + 1);
    panel.replace(0, 4, fmt::format("<svg x=\"{}\" y=\"{}\"", x, kTitleHeight));
    // Marker ids must stay unique across panels.
    for (std::size_t pos = panel.find("arrowhead"); pos != std::string::npos;
         pos = panel.find("arrowhead", pos + 1)) {
      panel.insert(pos + 9, "-" + std::to_string(i));
    }
    fmt::format_to(it, "{}", panel);
  }
  fmt::format_to(it, "</svg>\n");
  return fmt::to_string(buf);
}

}  // namespace vecscope
