#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "osteomorph/label_mask.hpp"

namespace osteomorph {

// Pixel centers sit at integer coordinates; x grows right, y grows down.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Closed polyline. The closing edge from the last vertex back to the first is
// implicit; the first vertex is never repeated at the end.
struct Contour {
  std::vector<Point2> vertices;
};

inline constexpr double kIsoLevel = 0.5;

// Marching squares at level 0.5 over the indicator image (1 where label ==
// class_id). The image is padded with one ring of background so every
// contour closes. Edge crossings are linearly interpolated. Saddle cells use
// the mean of the four corners: a mean >= 0.5 joins the two foreground
// corners. Outer boundaries wind with negative signed area, holes positive.
// Contours are ordered by their first crossing in row-major scan order.
std::vector<Contour> extract_contours(const LabelMask& mask, Label class_id);

// Same algorithm over an arbitrary scalar field (row-major, width*height
// values). Cells outside the field read as `level - 1`.
std::vector<Contour> extract_isocontours(std::span<const double> field, int width, int height,
                                         double level);

// Shoelace sum; negative for the winding produced for outer boundaries.
double signed_area(const Contour& c);
double polygon_area(const Contour& c);
double polygon_perimeter(const Contour& c);
bool is_outer_boundary(const Contour& c);

// Contour with the largest enclosed area; the first one wins ties.
const Contour& largest_contour(std::span<const Contour> contours);

// Debug dump: `contour_id,vertex_index,x,y`.
void write_contours_csv(std::span<const Contour> contours, std::ostream& out);

}  // namespace osteomorph
