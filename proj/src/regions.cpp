#include "osteomorph/regions.hpp"

#include <cmath>
#include <deque>

namespace osteomorph {

std::vector<Pixel> connected_component(const LabelMask& mask, Label class_id, Pixel seed) {
  std::vector<Pixel> pixels;
  const auto in_frame = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < mask.width() && y < mask.height();
  };
  if (!in_frame(seed.x, seed.y) || mask.at(seed.x, seed.y) != class_id) return pixels;

  std::vector<bool> seen(mask.size(), false);
  const auto idx = [&](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(mask.width()) +
           static_cast<std::size_t>(x);
  };
  std::deque<Pixel> queue{seed};
  seen[idx(seed.x, seed.y)] = true;
  while (!queue.empty()) {
    const Pixel p = queue.front();
    queue.pop_front();
    pixels.push_back(p);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = p.x + dx;
        const int y = p.y + dy;
        if ((dx == 0 && dy == 0) || !in_frame(x, y)) continue;
        if (seen[idx(x, y)] || mask.at(x, y) != class_id) continue;
        seen[idx(x, y)] = true;
        queue.push_back({x, y});
      }
    }
  }
  return pixels;
}

std::optional<Pixel> pixel_on_contour(const LabelMask& mask, Label class_id,
                                      const Contour& contour) {
  if (contour.vertices.empty()) return std::nullopt;
  // Every vertex lies on the segment between two neighbouring pixel centers.
  const Point2 v = contour.vertices.front();
  const Pixel candidates[] = {{static_cast<int>(std::floor(v.x)), static_cast<int>(std::floor(v.y))},
                              {static_cast<int>(std::ceil(v.x)), static_cast<int>(std::ceil(v.y))}};
  for (const Pixel& p : candidates) {
    if (p.x >= 0 && p.y >= 0 && p.x < mask.width() && p.y < mask.height() &&
        mask.at(p.x, p.y) == class_id) {
      return p;
    }
  }
  return std::nullopt;
}

std::size_t boundary_pixel_count(const LabelMask& mask, Label class_id) {
  std::size_t count = 0;
  const auto is_class = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < mask.width() && y < mask.height() && mask.at(x, y) == class_id;
  };
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!is_class(x, y)) continue;
      if (!is_class(x - 1, y) || !is_class(x + 1, y) || !is_class(x, y - 1) ||
          !is_class(x, y + 1)) {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace osteomorph
