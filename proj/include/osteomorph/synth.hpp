#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "osteomorph/geometry.hpp"
#include "osteomorph/label_mask.hpp"

namespace osteomorph {

enum class ShapeKind { kDisk, kEllipse, kRect };
const char* to_string(ShapeKind kind);
std::optional<ShapeKind> parse_shape_kind(std::string_view text);

// dim_x / dim_y: disk radius (dim_y unused), ellipse semi-axes along x and y
// before rotation, or rectangle side lengths. Pixels are painted when their
// center lies inside the analytic shape; rectangles use half-open extents so
// integer sides give exactly dim_x * dim_y pixels.
struct SyntheticSpec {
  ShapeKind shape = ShapeKind::kDisk;
  double dim_x = 100.0;
  double dim_y = 100.0;
  double angle_deg = 0.0;  // ellipse only
  // Defaults to the canvas center ((w - 1) / 2, (h - 1) / 2).
  std::optional<Point2> center;
  Label label = kFemur;
  int canvas_w = 640;
  int canvas_h = 640;
};

// Throws kInvalidArgument when the shape's analytic extent leaves the canvas
// ([-0.5, w - 0.5] x [-0.5, h - 0.5]) or the parameters are invalid.
void paint_shape(LabelMask& canvas, const SyntheticSpec& spec);
LabelMask render_shape(const SyntheticSpec& spec);

// Knee-like demo dataset: a femur ellipse above a tibia ellipse per image.
// Femur eccentricity is set by pain category (Worsened rounder, Improved more
// elongated), so shape features separate the categories.
struct DemoDatasetOptions {
  int images_per_category = 4;
  int canvas = 640;
  std::uint64_t seed = 7;
  bool with_predictions = true;  // pred mask == gt mask, written as a copy
};

// Writes masks and manifest.csv into `dir`; returns the manifest path.
std::filesystem::path write_demo_dataset(const std::filesystem::path& dir,
                                         const DemoDatasetOptions& options = {});

}  // namespace osteomorph
