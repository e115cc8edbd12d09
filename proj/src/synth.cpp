#include "osteomorph/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/core.h>

#include "osteomorph/error.hpp"
#include "osteomorph/manifest.hpp"
#include "osteomorph/mask_io.hpp"
#include "osteomorph/pain.hpp"

namespace osteomorph {

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kDisk: return "disk";
    case ShapeKind::kEllipse: return "ellipse";
    case ShapeKind::kRect: return "rect";
  }
  return "?";
}

std::optional<ShapeKind> parse_shape_kind(std::string_view text) {
  if (text == "disk") return ShapeKind::kDisk;
  if (text == "ellipse") return ShapeKind::kEllipse;
  if (text == "rect") return ShapeKind::kRect;
  return std::nullopt;
}

void paint_shape(LabelMask& canvas, const SyntheticSpec& spec) {
  if (!is_bone_class(spec.label)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("synthetic shapes paint femur (1) or tibia (2), not {}", spec.label));
  }
  const double rx = spec.dim_x;
  const double ry = spec.shape == ShapeKind::kDisk ? spec.dim_x : spec.dim_y;
  if (!(rx > 0.0) || !(ry > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("shape dimensions must be positive, got {} x {}", rx, ry));
  }
  if (spec.shape != ShapeKind::kEllipse && spec.angle_deg != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "only ellipses can be rotated");
  }
  const Point2 c = spec.center.value_or(
      Point2{(canvas.width() - 1) / 2.0, (canvas.height() - 1) / 2.0});
  const double theta = spec.angle_deg * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);

  double half_w = rx;
  double half_h = ry;
  if (spec.shape == ShapeKind::kRect) {
    half_w = rx / 2.0;
    half_h = ry / 2.0;
  } else if (spec.shape == ShapeKind::kEllipse) {
    half_w = std::hypot(rx * cos_t, ry * sin_t);
    half_h = std::hypot(rx * sin_t, ry * cos_t);
  }
  if (c.x - half_w < -0.5 || c.x + half_w > canvas.width() - 0.5 || c.y - half_h < -0.5 ||
      c.y + half_h > canvas.height() - 0.5) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} at ({}, {}) extends beyond the {}x{} canvas", to_string(spec.shape),
                            c.x, c.y, canvas.width(), canvas.height()));
  }

  const int x0 = std::max(0, static_cast<int>(std::floor(c.x - half_w)));
  const int x1 = std::min(canvas.width() - 1, static_cast<int>(std::ceil(c.x + half_w)));
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y - half_h)));
  const int y1 = std::min(canvas.height() - 1, static_cast<int>(std::ceil(c.y + half_h)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - c.x;
      const double dy = y - c.y;
      bool hit = false;
      switch (spec.shape) {
        case ShapeKind::kDisk:
          hit = dx * dx + dy * dy <= rx * rx;
          break;
        case ShapeKind::kEllipse: {
          const double u = (dx * cos_t + dy * sin_t) / rx;
          const double v = (-dx * sin_t + dy * cos_t) / ry;
          hit = u * u + v * v <= 1.0;
          break;
        }
        case ShapeKind::kRect:
          hit = dx >= -half_w && dx < half_w && dy >= -half_h && dy < half_h;
          break;
      }
      if (hit) canvas.set(x, y, spec.label);
    }
  }
}

LabelMask render_shape(const SyntheticSpec& spec) {
  LabelMask canvas(spec.canvas_w, spec.canvas_h);
  paint_shape(canvas, spec);
  return canvas;
}

std::filesystem::path write_demo_dataset(const std::filesystem::path& dir,
                                         const DemoDatasetOptions& options) {
  if (options.images_per_category < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "demo dataset needs at least 3 images per category (train, val, test)");
  }
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  std::uniform_real_distribution<double> tilt(-4.0, 4.0);
  std::uniform_int_distribution<int> baseline_dist(3, 6);
  std::uniform_int_distribution<int> small_change(-1, 1);
  std::uniform_int_distribution<int> large_change(2, 3);

  // Geometry is laid out on a 640 canvas and scaled to the requested size.
  const double s = options.canvas / 640.0;
  const int per = options.images_per_category;
  const int n_test = std::max(1, per / 4);
  const int n_val = std::max(1, per / 4);

  DatasetManifest manifest;
  for (PainCategory cat : kAllPainCategories) {
    const double femur_b = cat == PainCategory::kWorsened   ? 130.0
                           : cat == PainCategory::kNoChange ? 100.0
                                                            : 80.0;
    for (int i = 0; i < per; ++i) {
      LabelMask mask(options.canvas, options.canvas);
      SyntheticSpec femur{ShapeKind::kEllipse, (150.0 + jitter(rng)) * s,
                          (femur_b + jitter(rng)) * s, tilt(rng), Point2{319.5 * s, 200.0 * s},
                          kFemur, options.canvas, options.canvas};
      SyntheticSpec tibia{ShapeKind::kEllipse, (170.0 + jitter(rng)) * s,
                          (70.0 + jitter(rng)) * s, tilt(rng), Point2{319.5 * s, 470.0 * s},
                          kTibia, options.canvas, options.canvas};
      paint_shape(mask, femur);
      paint_shape(mask, tibia);

      const int baseline = baseline_dist(rng);
      int delta = small_change(rng);
      if (cat == PainCategory::kWorsened) delta = large_change(rng);
      if (cat == PainCategory::kImproved) delta = -large_change(rng);

      ManifestEntry entry;
      entry.image_id = fmt::format("{}_{:02d}", to_string(cat), i);
      entry.gt_mask = fmt::format("gt_{}.png", entry.image_id);
      write_mask(mask, dir / entry.gt_mask);
      if (options.with_predictions) {
        entry.pred_mask = fmt::format("pred_{}.png", entry.image_id);
        write_mask(mask, dir / *entry.pred_mask);
      }
      entry.split = i < per - n_val - n_test ? Split::kTrain
                    : i < per - n_test       ? Split::kVal
                                             : Split::kTest;
      entry.pain = PainRecord{entry.image_id, baseline, baseline + delta};
      manifest.entries.push_back(std::move(entry));
    }
  }

  const auto path = dir / "manifest.csv";
  std::ofstream out(path);
  write_manifest(manifest, out);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  return path;
}

}  // namespace osteomorph
