#include "osteomorph/label_mask.hpp"

#include <algorithm>
#include <string>
#include <string_view>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "file-not-found";
    case ErrorCode::kUnreadableImage: return "unreadable-image";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInvalidProbabilities: return "invalid-probabilities";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kUnknownSplit: return "unknown-split";
    case ErrorCode::kMalformedRow: return "malformed-row";
    case ErrorCode::kClassAbsent: return "class-absent";
    case ErrorCode::kDegenerateShape: return "degenerate-shape";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kDegenerateLabels: return "degenerate-labels";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

bool is_bone_class(int class_id) noexcept {
  return class_id == kFemur || class_id == kTibia;
}

const char* bone_name(Label class_id) {
  switch (class_id) {
    case kFemur: return "femur";
    case kTibia: return "tibia";
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("class id {} is not a bone class", class_id));
  }
}

Label parse_bone(const std::string_view name) {
  if (name == "femur") return kFemur;
  if (name == "tibia") return kTibia;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown bone '{}' (expected femur or tibia)", name));
}

LabelMask::LabelMask(int width, int height)
    : LabelMask(width, height,
                std::vector<Label>(static_cast<std::size_t>(std::max(width, 0)) *
                                   static_cast<std::size_t>(std::max(height, 0)))) {}

LabelMask::LabelMask(int width, int height, std::vector<Label> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("mask dimensions must be positive, got {}x{}", width, height));
  }
  if (labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("label count {} does not match {}x{}", labels_.size(), width,
                            height));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > kMaxLabel) {
      throw Error(ErrorCode::kInvalidLabel,
                  fmt::format("invalid label {} at ({}, {})", labels_[i],
                              i % static_cast<std::size_t>(width),
                              i / static_cast<std::size_t>(width)));
    }
  }
}

void LabelMask::set(int x, int y, Label value) {
  if (value > kMaxLabel) {
    throw Error(ErrorCode::kInvalidLabel,
                fmt::format("invalid label {} at ({}, {})", value, x, y));
  }
  labels_[index(x, y)] = value;
}

std::size_t LabelMask::count(Label value) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), value));
}

}  // namespace osteomorph
