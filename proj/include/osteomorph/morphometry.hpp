#pragma once

#include <span>
#include <vector>

#include "osteomorph/geometry.hpp"
#include "osteomorph/label_mask.hpp"
#include "osteomorph/pain.hpp"
#include "osteomorph/regions.hpp"

namespace osteomorph {

// 4*pi*area / perimeter^2. Throws kInvalidArgument unless both are positive.
double circularity(double area, double perimeter);

// sqrt(1 - (b/a)^2) for semi-axes a >= b > 0.
double eccentricity(double semi_major, double semi_minor);

// Ellipse with the same normalized second central moments as a pixel set:
// semi-axes are 2*sqrt of the covariance eigenvalues, so a digital disk of
// radius r yields a ~= b ~= r.
struct EllipseFit {
  double semi_major = 0.0;
  double semi_minor = 0.0;
  Point2 centroid;
  // Angle of the major axis from +x, radians in (-pi/2, pi/2].
  double orientation = 0.0;
};

// Throws kDegenerateShape for fewer than two pixels or a collinear set.
EllipseFit fit_ellipse_moments(std::span<const Pixel> pixels);
// Moments of every pixel labelled class_id.
EllipseFit fit_ellipse_moments(const LabelMask& mask, Label class_id);

struct ShapeFeatures {
  Label class_id = kFemur;
  double area = 0.0;
  double perimeter = 0.0;
  double circularity = 0.0;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double eccentricity = 0.0;
  Point2 centroid;
};

// One shape per bone: area and perimeter come from the largest contour, the
// moment ellipse from the 8-connected component that contour bounds. Holes
// and satellite blobs are ignored.
ShapeFeatures compute_shape_features(const LabelMask& mask, Label class_id);

enum class ShapeMetric { kCircularity, kEccentricity };
const char* to_string(ShapeMetric metric);

struct GroupStats {
  PainCategory category = PainCategory::kNoChange;
  Label bone = kFemur;
  ShapeMetric metric = ShapeMetric::kCircularity;
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1); 0 when n == 1
  std::size_t n = 0;
};

struct CategorizedShape {
  ShapeFeatures features;
  PainCategory category = PainCategory::kNoChange;
};

// Rows ordered by bone, then category (Worsened, Improved, NoChange), then
// metric; groups with no members are omitted. The result does not depend on
// input order.
std::vector<GroupStats> group_stats(std::span<const CategorizedShape> records);

}  // namespace osteomorph
