#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "osteomorph/label_mask.hpp"
#include "osteomorph/probability_map.hpp"

namespace osteomorph {

struct ConfusionCounts {
  Label class_id = kFemur;
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// One-vs-rest counts for class_id over every pixel.
ConfusionCounts confusion_counts(const LabelMask& pred, const LabelMask& gt, Label class_id);

// Percentages in [0, 100]. A zero denominator yields 0 and raises the
// matching flag instead of failing, so empty predictions still aggregate.
struct SegMetrics {
  double acc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double dice = 0.0;
  double iou = 0.0;
  bool precision_degenerate = false;  // tp + fp == 0
  bool recall_degenerate = false;     // tp + fn == 0
  bool overlap_degenerate = false;    // tp + fp + fn == 0 (dice and iou)

  bool any_degenerate() const noexcept {
    return precision_degenerate || recall_degenerate || overlap_degenerate;
  }
};

SegMetrics metrics_from_counts(const ConfusionCounts& c);

// Mean of -log p(true class) over all pixels, p clamped below at 1e-12.
inline constexpr double kProbabilityFloor = 1e-12;
double sparse_ce_loss(const ProbabilityMap& probs, const LabelMask& gt);

enum class Aggregation { kMacro, kMicro };
const char* to_string(Aggregation mode);
std::optional<Aggregation> parse_aggregation(std::string_view text);

// Unweighted per-image mean; a flag is set when any input had it set.
SegMetrics aggregate_macro(std::span<const SegMetrics> per_image);
// Metrics of the pooled counts.
SegMetrics aggregate_micro(std::span<const ConfusionCounts> per_image);
SegMetrics aggregate_metrics(std::span<const ConfusionCounts> per_image,
                             Aggregation mode = Aggregation::kMacro);

}  // namespace osteomorph
