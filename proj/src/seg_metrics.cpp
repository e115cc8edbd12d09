#include "osteomorph/seg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

double percent(std::uint64_t num, std::uint64_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

ConfusionCounts confusion_counts(const LabelMask& pred, const LabelMask& gt, Label class_id) {
  if (!is_bone_class(class_id)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("metrics are computed for femur (1) or tibia (2), not {}", class_id));
  }
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("prediction is {}x{} but ground truth is {}x{}", pred.width(),
                            pred.height(), gt.width(), gt.height()));
  }
  ConfusionCounts c;
  c.class_id = class_id;
  const auto p = pred.labels();
  const auto g = gt.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool predicted = p[i] == class_id;
    const bool actual = g[i] == class_id;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

SegMetrics metrics_from_counts(const ConfusionCounts& c) {
  if (c.total() == 0) {
    throw Error(ErrorCode::kEmptyInput, "metrics_from_counts: all counts are zero");
  }
  SegMetrics m;
  bool unused = false;
  m.acc = percent(c.tp + c.tn, c.total(), unused);
  m.precision = percent(c.tp, c.tp + c.fp, m.precision_degenerate);
  m.recall = percent(c.tp, c.tp + c.fn, m.recall_degenerate);
  m.dice = percent(2 * c.tp, 2 * c.tp + c.fp + c.fn, m.overlap_degenerate);
  m.iou = percent(c.tp, c.tp + c.fp + c.fn, m.overlap_degenerate);
  return m;
}

double sparse_ce_loss(const ProbabilityMap& probs, const LabelMask& gt) {
  if (probs.width() != gt.width() || probs.height() != gt.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("probability map is {}x{} but ground truth is {}x{}", probs.width(),
                            probs.height(), gt.width(), gt.height()));
  }
  const auto labels = gt.labels();
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= probs.classes()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("ground-truth label {} at pixel {} has no probability channel "
                              "({} classes)",
                              labels[i], i, probs.classes()));
    }
    sum -= std::log(std::max(probs.at(i, labels[i]), kProbabilityFloor));
  }
  return sum / static_cast<double>(labels.size());
}

const char* to_string(Aggregation mode) {
  return mode == Aggregation::kMacro ? "macro" : "micro";
}

std::optional<Aggregation> parse_aggregation(std::string_view text) {
  if (text == "macro") return Aggregation::kMacro;
  if (text == "micro" || text == "micro-counts") return Aggregation::kMicro;
  return std::nullopt;
}

SegMetrics aggregate_macro(std::span<const SegMetrics> per_image) {
  if (per_image.empty()) throw Error(ErrorCode::kEmptyInput, "aggregate: no images");
  std::vector<double> acc, precision, recall, dice, iou;
  SegMetrics out;
  for (const auto& m : per_image) {
    acc.push_back(m.acc);
    precision.push_back(m.precision);
    recall.push_back(m.recall);
    dice.push_back(m.dice);
    iou.push_back(m.iou);
    out.precision_degenerate |= m.precision_degenerate;
    out.recall_degenerate |= m.recall_degenerate;
    out.overlap_degenerate |= m.overlap_degenerate;
  }
  out.acc = sorted_mean(std::move(acc));
  out.precision = sorted_mean(std::move(precision));
  out.recall = sorted_mean(std::move(recall));
  out.dice = sorted_mean(std::move(dice));
  out.iou = sorted_mean(std::move(iou));
  return out;
}

SegMetrics aggregate_micro(std::span<const ConfusionCounts> per_image) {
  if (per_image.empty()) throw Error(ErrorCode::kEmptyInput, "aggregate: no images");
  ConfusionCounts pooled;
  pooled.class_id = per_image.front().class_id;
  for (const auto& c : per_image) {
    pooled.tp += c.tp;
    pooled.tn += c.tn;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return metrics_from_counts(pooled);
}

SegMetrics aggregate_metrics(std::span<const ConfusionCounts> per_image, Aggregation mode) {
  if (mode == Aggregation::kMicro) return aggregate_micro(per_image);
  std::vector<SegMetrics> metrics;
  metrics.reserve(per_image.size());
  for (const auto& c : per_image) metrics.push_back(metrics_from_counts(c));
  return aggregate_macro(metrics);
}

}  // namespace osteomorph
