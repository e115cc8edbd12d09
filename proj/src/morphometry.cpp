#include "osteomorph/morphometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {

double circularity(double area, double perimeter) {
  if (!(area > 0.0) || !(perimeter > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("circularity needs positive area and perimeter, got {} and {}", area,
                            perimeter));
  }
  return 4.0 * std::numbers::pi * area / (perimeter * perimeter);
}

double eccentricity(double semi_major, double semi_minor) {
  if (!(semi_minor > 0.0) || !(semi_major > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("semi-axes must be positive, got a={} b={}", semi_major, semi_minor));
  }
  if (semi_minor > semi_major) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("semi-minor axis {} exceeds semi-major axis {}", semi_minor,
                            semi_major));
  }
  const double ratio = semi_minor / semi_major;
  return std::sqrt(1.0 - ratio * ratio);
}

EllipseFit fit_ellipse_moments(std::span<const Pixel> pixels) {
  if (pixels.size() < 2) {
    throw Error(ErrorCode::kDegenerateShape,
                fmt::format("moment ellipse needs at least 2 pixels, got {}", pixels.size()));
  }
  const auto n = static_cast<double>(pixels.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const Pixel& p : pixels) {
    sx += p.x;
    sy += p.y;
  }
  const double cx = sx / n;
  const double cy = sy / n;

  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;
  for (const Pixel& p : pixels) {
    const double dx = p.x - cx;
    const double dy = p.y - cy;
    mu20 += dx * dx;
    mu02 += dy * dy;
    mu11 += dx * dy;
  }
  mu20 /= n;
  mu02 /= n;
  mu11 /= n;

  const double half_trace = 0.5 * (mu20 + mu02);
  const double spread = std::hypot(0.5 * (mu20 - mu02), mu11);
  const double lambda1 = half_trace + spread;
  const double lambda2 = half_trace - spread;
  if (!(lambda2 > 1e-9 * lambda1)) {
    throw Error(ErrorCode::kDegenerateShape,
                fmt::format("pixel set of {} points is collinear", pixels.size()));
  }

  EllipseFit fit;
  fit.semi_major = 2.0 * std::sqrt(lambda1);
  fit.semi_minor = 2.0 * std::sqrt(lambda2);
  fit.centroid = {cx, cy};
  fit.orientation = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
  return fit;
}

EllipseFit fit_ellipse_moments(const LabelMask& mask, Label class_id) {
  std::vector<Pixel> pixels;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) == class_id) pixels.push_back({x, y});
    }
  }
  return fit_ellipse_moments(pixels);
}

ShapeFeatures compute_shape_features(const LabelMask& mask, Label class_id) {
  const auto contours = extract_contours(mask, class_id);
  if (contours.empty()) {
    throw Error(ErrorCode::kClassAbsent,
                fmt::format("no {} pixels in mask", bone_name(class_id)));
  }
  const Contour& outline = largest_contour(contours);
  const auto seed = pixel_on_contour(mask, class_id, outline);
  if (!seed) {
    throw Error(ErrorCode::kDegenerateShape, "largest contour does not border the class");
  }
  const auto component = connected_component(mask, class_id, *seed);
  const EllipseFit fit = fit_ellipse_moments(component);

  ShapeFeatures f;
  f.class_id = class_id;
  f.area = polygon_area(outline);
  f.perimeter = polygon_perimeter(outline);
  f.circularity = circularity(f.area, f.perimeter);
  f.semi_major = fit.semi_major;
  f.semi_minor = fit.semi_minor;
  f.eccentricity = eccentricity(f.semi_major, f.semi_minor);
  f.centroid = fit.centroid;
  return f;
}

const char* to_string(ShapeMetric metric) {
  switch (metric) {
    case ShapeMetric::kCircularity: return "circularity";
    case ShapeMetric::kEccentricity: return "eccentricity";
  }
  return "?";
}

std::vector<GroupStats> group_stats(std::span<const CategorizedShape> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "group_stats: no records");
  }
  using Key = std::tuple<Label, int, int>;  // bone, category, metric
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : records) {
    const int cat = static_cast<int>(r.category);
    groups[{r.features.class_id, cat, static_cast<int>(ShapeMetric::kCircularity)}].push_back(
        r.features.circularity);
    groups[{r.features.class_id, cat, static_cast<int>(ShapeMetric::kEccentricity)}].push_back(
        r.features.eccentricity);
  }

  std::vector<GroupStats> out;
  out.reserve(groups.size());
  for (auto& [key, values] : groups) {
    // Sorted summation makes the result independent of record order.
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);

    GroupStats g;
    g.bone = std::get<0>(key);
    g.category = static_cast<PainCategory>(std::get<1>(key));
    g.metric = static_cast<ShapeMetric>(std::get<2>(key));
    g.mean = mean;
    g.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    g.n = n;
    out.push_back(g);
  }
  return out;
}

}  // namespace osteomorph
