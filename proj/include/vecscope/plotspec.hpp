#pragma once

#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/embedding.hpp"
#include "vecscope/retrieval.hpp"
#include "vecscope/transforms.hpp"
#include "vecscope/vecstore.hpp"

namespace vecscope {

struct PlotPoint {
  std::string name;
  double x = 0.0;
  double y = 0.0;
  std::optional<std::string> group;

  friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

enum class PlotKind { kScatter, kArrows };

struct PlotSpec {
  PlotKind kind = PlotKind::kScatter;
  std::vector<PlotPoint> points;
  std::string x_label;
  std::string y_label;

  friend bool operator==(const PlotSpec&, const PlotSpec&) = default;
};

struct HeatmapSpec {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  std::string metric;

  friend bool operator==(const HeatmapSpec&, const HeatmapSpec&) = default;
};

// Group assigned to appended axis points.
inline constexpr std::string_view kAxisGroup = "axis";

// Each member m lands at (v(m -> X), v(m -> Y)) where v is the projection
// coefficient and X, Y are the axis expressions evaluated in `store`.
// With show_axis_point the axis embeddings are appended as points in group
// "axis", unless a member already carries that name.
PlotSpec scatter_projection(const EmbeddingSet& set, std::string_view x_axis,
                            std::string_view y_axis, const VectorStore& store,
                            bool show_axis_point = false);

// Same, with axes already evaluated.
PlotSpec scatter_projection(const EmbeddingSet& set, const Embedding& x_axis,
                            const Embedding& y_axis, bool show_axis_point = false);

// Arrow tips for a 2-d set; the origin is implicit.
PlotSpec arrow_plot(const EmbeddingSet& set);

HeatmapSpec heatmap(const DistanceMatrix& matrix);

// First two reduced coordinates; y is 0 when k == 1. Axis pseudo-embeddings
// are included in group "axis".
PlotSpec transform_plot(const TransformResult& result);

std::string_view to_string(PlotKind kind);

nlohmann::json to_json(const PlotSpec& spec);
nlohmann::json to_json(const HeatmapSpec& spec);
// PlotSpec JSON plus "explained_variance" when the method reports it.
nlohmann::json to_json(const TransformResult& result);

// Throw InvalidArgument on schema violations.
PlotSpec plot_from_json(const nlohmann::json& json);
HeatmapSpec heatmap_from_json(const nlohmann::json& json);

std::string emit_json(const PlotSpec& spec);
std::string emit_json(const HeatmapSpec& spec);

struct Domain {
  double x_min, x_max, y_min, y_max;
};

// Data extent padded by 5% per axis; a zero-width extent becomes a unit
// range centred on the value. Arrow plots include the origin.
Domain data_domain(const PlotSpec& spec);
Domain merge(const Domain& a, const Domain& b);

struct ValueRange {
  double min, max;
};

ValueRange value_range(const HeatmapSpec& spec);

// Standalone SVG 1.1 documents. `domain` / `range` override the data-derived
// scales so several charts can share one.
std::string render_svg(const PlotSpec& spec, int width_px, int height_px,
                       const std::optional<Domain>& domain = std::nullopt);
std::string render_svg(const HeatmapSpec& spec, int width_px, int height_px,
                       const std::optional<ValueRange>& range = std::nullopt);

// Side-by-side panels on one shared domain, each titled; a single SVG root.
std::string render_svg_panels(std::span<const PlotSpec> specs, std::span<const std::string> titles,
                              int panel_width_px, int panel_height_px);

}  // namespace vecscope
