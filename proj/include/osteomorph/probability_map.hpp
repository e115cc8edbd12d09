#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace osteomorph {

// Per-pixel class distributions, row-major with the class index innermost.
class ProbabilityMap {
 public:
  static constexpr double kSumTolerance = 1e-6;

  ProbabilityMap(int width, int height, int classes, std::vector<double> probs);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int classes() const noexcept { return classes_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const double> pixel(std::size_t i) const {
    return std::span<const double>(probs_).subspan(i * static_cast<std::size_t>(classes_),
                                                   static_cast<std::size_t>(classes_));
  }
  double at(std::size_t pixel_index, int class_index) const {
    return probs_[pixel_index * static_cast<std::size_t>(classes_) +
                  static_cast<std::size_t>(class_index)];
  }
  std::span<const double> values() const noexcept { return probs_; }

 private:
  int width_;
  int height_;
  int classes_;
  std::vector<double> probs_;
};

// Binary layout: three little-endian uint32 (width, height, classes) followed
// by width*height*classes little-endian float32, row-major, class innermost.
ProbabilityMap load_probability_map(const std::filesystem::path& path);
void write_probability_map(const ProbabilityMap& map, const std::filesystem::path& path);

}  // namespace osteomorph
