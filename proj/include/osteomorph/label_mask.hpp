#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace osteomorph {

using Label = std::uint8_t;

inline constexpr Label kBackground = 0;
inline constexpr Label kFemur = 1;
inline constexpr Label kTibia = 2;
inline constexpr Label kMaxLabel = kTibia;

// Bone classes that are scored and measured; background never is.
bool is_bone_class(int class_id) noexcept;
const char* bone_name(Label class_id);
// Accepts "femur" / "tibia"; throws kInvalidArgument otherwise.
Label parse_bone(const std::string_view name);

// Row-major grid of class labels. Construction validates every label.
class LabelMask {
 public:
  LabelMask() = default;
  // All-background mask.
  LabelMask(int width, int height);
  LabelMask(int width, int height, std::vector<Label> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  Label at(int x, int y) const { return labels_[index(x, y)]; }
  void set(int x, int y, Label value);

  std::span<const Label> labels() const noexcept { return labels_; }
  std::size_t count(Label value) const;

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Label> labels_;
};

}  // namespace osteomorph
