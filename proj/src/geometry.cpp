#include "osteomorph/geometry.hpp"

#include <array>
#include <cmath>
#include <cstdint>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

// Padded grid of (width + 2) x (height + 2) samples. Grid edges are keyed as
// 2 * (j * pw + i) for the horizontal edge (i,j)-(i+1,j) and that plus one
// for the vertical edge (i,j)-(i,j+1).
class MarchingSquares {
 public:
  MarchingSquares(std::vector<double> padded, int pw, int ph, double level)
      : grid_(std::move(padded)), pw_(pw), ph_(ph), level_(level),
        next_(2 * static_cast<std::size_t>(pw) * static_cast<std::size_t>(ph), -1) {}

  std::vector<Contour> run() {
    for (int j = 0; j + 1 < ph_; ++j) {
      for (int i = 0; i + 1 < pw_; ++i) march_cell(i, j);
    }
    return link();
  }

 private:
  double value(int i, int j) const {
    return grid_[static_cast<std::size_t>(j) * static_cast<std::size_t>(pw_) +
                 static_cast<std::size_t>(i)];
  }
  bool inside(int i, int j) const { return value(i, j) >= level_; }

  std::int32_t h_edge(int i, int j) const { return 2 * (j * pw_ + i); }
  std::int32_t v_edge(int i, int j) const { return 2 * (j * pw_ + i) + 1; }

  void march_cell(int i, int j) {
    // Corners clockwise on screen: tl, tr, br, bl. Edge k runs from corner k
    // to corner k+1, so a shared edge is walked in opposite directions by its
    // two cells and an entering crossing here is a leaving one there.
    const std::array<std::array<int, 2>, 4> corner = {
        {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
    const std::array<std::int32_t, 4> edge = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1),
                                              v_edge(i, j)};
    std::array<bool, 4> in{};
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      in[k] = inside(corner[k][0], corner[k][1]);
      count += in[k];
    }
    if (count == 0 || count == 4) return;

    const bool saddle = count == 2 && in[0] == in[2];
    if (!saddle) {
      std::int32_t from = -1;
      std::int32_t to = -1;
      for (int k = 0; k < 4; ++k) {
        const bool a = in[k];
        const bool b = in[(k + 1) % 4];
        if (!a && b) from = edge[k];
        if (a && !b) to = edge[k];
      }
      next_[static_cast<std::size_t>(from)] = to;
      return;
    }

    double mean = 0.0;
    for (const auto& c : corner) mean += value(c[0], c[1]);
    mean *= 0.25;
    const bool join_inside = mean >= level_;
    // Cut off the two corners that must stay separated: the outside pair
    // when the inside diagonal is joined, the inside pair otherwise.
    for (int k = 0; k < 4; ++k) {
      if (in[k] == join_inside) continue;
      const int before = (k + 3) % 4;  // edge arriving at corner k
      const int after = k;             // edge leaving corner k
      if (in[k]) {
        next_[static_cast<std::size_t>(edge[before])] = edge[after];
      } else {
        next_[static_cast<std::size_t>(edge[after])] = edge[before];
      }
    }
  }

  Point2 crossing(std::int32_t e) const {
    const int cell = e / 2;
    const int i = cell % pw_;
    const int j = cell / pw_;
    const bool horizontal = (e % 2) == 0;
    const int i1 = horizontal ? i + 1 : i;
    const int j1 = horizontal ? j : j + 1;
    const double v0 = value(i, j);
    const double v1 = value(i1, j1);
    const double t = (level_ - v0) / (v1 - v0);
    // Shift back from padded to image coordinates.
    return {i - 1 + t * (i1 - i), j - 1 + t * (j1 - j)};
  }

  std::vector<Contour> link() {
    std::vector<Contour> contours;
    std::vector<bool> visited(next_.size(), false);
    for (std::size_t start = 0; start < next_.size(); ++start) {
      if (next_[start] < 0 || visited[start]) continue;
      Contour c;
      auto e = static_cast<std::int32_t>(start);
      while (e >= 0 && !visited[static_cast<std::size_t>(e)]) {
        visited[static_cast<std::size_t>(e)] = true;
        const Point2 p = crossing(e);
        if (c.vertices.empty() || !(c.vertices.back() == p)) c.vertices.push_back(p);
        e = next_[static_cast<std::size_t>(e)];
      }
      while (c.vertices.size() > 1 && c.vertices.front() == c.vertices.back()) {
        c.vertices.pop_back();
      }
      if (c.vertices.size() >= 3) contours.push_back(std::move(c));
    }
    return contours;
  }

  std::vector<double> grid_;
  int pw_;
  int ph_;
  double level_;
  std::vector<std::int32_t> next_;
};

std::vector<double> pad(int width, int height, double outside, auto&& sample) {
  const int pw = width + 2;
  const int ph = height + 2;
  std::vector<double> padded(static_cast<std::size_t>(pw) * static_cast<std::size_t>(ph),
                             outside);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      padded[static_cast<std::size_t>(y + 1) * static_cast<std::size_t>(pw) +
             static_cast<std::size_t>(x + 1)] = sample(x, y);
    }
  }
  return padded;
}

}  // namespace

std::vector<Contour> extract_contours(const LabelMask& mask, Label class_id) {
  if (!is_bone_class(class_id)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("contours are extracted for femur (1) or tibia (2), not {}",
                            class_id));
  }
  auto padded = pad(mask.width(), mask.height(), 0.0,
                    [&](int x, int y) { return mask.at(x, y) == class_id ? 1.0 : 0.0; });
  return MarchingSquares(std::move(padded), mask.width() + 2, mask.height() + 2, kIsoLevel)
      .run();
}

std::vector<Contour> extract_isocontours(std::span<const double> field, int width, int height,
                                         double level) {
  if (width <= 0 || height <= 0 ||
      field.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("field of {} samples is not {}x{}", field.size(), width, height));
  }
  auto padded = pad(width, height, level - 1.0, [&](int x, int y) {
    return field[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)];
  });
  return MarchingSquares(std::move(padded), width + 2, height + 2, level).run();
}

double signed_area(const Contour& c) {
  const auto& v = c.vertices;
  double twice = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2& a = v[k];
    const Point2& b = v[(k + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

double polygon_area(const Contour& c) { return std::abs(signed_area(c)); }

double polygon_perimeter(const Contour& c) {
  const auto& v = c.vertices;
  double length = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2& a = v[k];
    const Point2& b = v[(k + 1) % v.size()];
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

bool is_outer_boundary(const Contour& c) { return signed_area(c) < 0.0; }

const Contour& largest_contour(std::span<const Contour> contours) {
  if (contours.empty()) {
    throw Error(ErrorCode::kEmptyInput, "largest_contour: no contours");
  }
  std::size_t best = 0;
  double best_area = polygon_area(contours[0]);
  for (std::size_t k = 1; k < contours.size(); ++k) {
    const double a = polygon_area(contours[k]);
    if (a > best_area) {
      best = k;
      best_area = a;
    }
  }
  return contours[best];
}

void write_contours_csv(std::span<const Contour> contours, std::ostream& out) {
  out << "contour_id,vertex_index,x,y\n";
  for (std::size_t id = 0; id < contours.size(); ++id) {
    const auto& v = contours[id].vertices;
    for (std::size_t k = 0; k < v.size(); ++k) {
      out << fmt::format("{},{},{:.4f},{:.4f}\n", id, k, v[k].x, v[k].y);
    }
  }
}

}  // namespace osteomorph
