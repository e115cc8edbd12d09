#pragma once

#include <optional>
#include <vector>

#include "osteomorph/geometry.hpp"
#include "osteomorph/label_mask.hpp"

namespace osteomorph {

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// 8-connected component of `class_id` containing `seed`, in BFS order.
// 8-connectivity matches the marching-squares saddle rule, which joins
// diagonal foreground pixels.
std::vector<Pixel> connected_component(const LabelMask& mask, Label class_id, Pixel seed);

// A foreground pixel adjacent to the first vertex of a contour produced by
// extract_contours for the same mask and class.
std::optional<Pixel> pixel_on_contour(const LabelMask& mask, Label class_id,
                                      const Contour& contour);

// Pixels of `class_id` with at least one 4-neighbour of another label (or
// the frame edge).
std::size_t boundary_pixel_count(const LabelMask& mask, Label class_id);

}  // namespace osteomorph
