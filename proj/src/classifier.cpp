#include "osteomorph/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {

FeatureVector make_feature_vector(std::string image_id, const ShapeFeatures& femur,
                                  const ShapeFeatures& tibia) {
  return {std::move(image_id),
          {femur.circularity, femur.eccentricity, femur.area, femur.perimeter,
           tibia.circularity, tibia.eccentricity, tibia.area, tibia.perimeter}};
}

FeatureSet build_features(std::span<const ImageMask> images) {
  FeatureSet out;
  for (const auto& image : images) {
    try {
      const auto femur = compute_shape_features(image.mask, kFemur);
      const auto tibia = compute_shape_features(image.mask, kTibia);
      out.vectors.push_back(make_feature_vector(image.image_id, femur, tibia));
    } catch (const Error& e) {
      out.skipped.push_back({image.image_id, e.what()});
    }
  }
  return out;
}

KnnModel KnnModel::fit(std::span<const FeatureVector> features,
                       std::span<const PainCategory> labels, int k) {
  if (features.empty()) throw Error(ErrorCode::kEmptyInput, "fit_knn: empty training set");
  if (labels.size() != features.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("fit_knn: {} vectors but {} labels", features.size(), labels.size()));
  }
  if (k < 1 || static_cast<std::size_t>(k) > features.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("fit_knn: k={} outside [1, {}]", k, features.size()));
  }

  KnnModel model;
  model.k_ = k;
  model.labels_.assign(labels.begin(), labels.end());
  const auto n = static_cast<double>(features.size());
  for (std::size_t d = 0; d < kFeatureDims; ++d) {
    double sum = 0.0;
    for (const auto& f : features) {
      if (!std::isfinite(f.values[d])) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("fit_knn: non-finite {} for {}", kFeatureNames[d], f.image_id));
      }
      sum += f.values[d];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& f : features) ss += (f.values[d] - mean) * (f.values[d] - mean);
    const double sd = std::sqrt(ss / n);
    model.mean_[d] = mean;
    model.std_[d] = sd;
    // Relative floor: summing identical values can leave rounding residue.
    if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
      model.kept_.push_back(d);
    } else {
      model.dropped_.push_back(d);
    }
  }
  model.scaled_.reserve(features.size());
  for (const auto& f : features) model.scaled_.push_back(model.scale(f));
  return model;
}

std::vector<double> KnnModel::scale(const FeatureVector& v) const {
  std::vector<double> out;
  out.reserve(kept_.size());
  for (std::size_t d : kept_) out.push_back((v.values[d] - mean_[d]) / std_[d]);
  return out;
}

std::vector<Neighbor> KnnModel::rank(const FeatureVector& v) const {
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("query {} has a non-finite feature", v.image_id));
    }
  }
  const auto q = scale(v);
  std::vector<Neighbor> ranked(scaled_.size());
  for (std::size_t i = 0; i < scaled_.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t d = 0; d < q.size(); ++d) {
      const double diff = scaled_[i][d] - q[d];
      d2 += diff * diff;
    }
    ranked[i] = {i, std::sqrt(d2)};
  }
  std::sort(ranked.begin(), ranked.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  return ranked;
}

PainCategory KnnModel::predict(const FeatureVector& v) const {
  const auto ranked = rank(v);
  std::array<int, 3> votes{};
  for (int i = 0; i < k_; ++i) ++votes[static_cast<std::size_t>(labels_[ranked[static_cast<std::size_t>(i)].index])];
  const int best = *std::max_element(votes.begin(), votes.end());
  // The nearest neighbour whose class reached the top vote count wins.
  for (int i = 0; i < k_; ++i) {
    const PainCategory c = labels_[ranked[static_cast<std::size_t>(i)].index];
    if (votes[static_cast<std::size_t>(c)] == best) return c;
  }
  return labels_[ranked.front().index];
}

ClassificationReport evaluate_predictions(std::span<const PainCategory> truth,
                                          std::span<const PainCategory> predicted) {
  if (truth.empty()) throw Error(ErrorCode::kEmptyInput, "evaluate: empty test set");
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("evaluate: {} labels but {} predictions", truth.size(),
                            predicted.size()));
  }
  ClassificationReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++r.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  std::size_t trace = 0;
  for (std::size_t c = 0; c < 3; ++c) trace += r.confusion[c][c];
  r.accuracy = 100.0 * static_cast<double>(trace) / static_cast<double>(truth.size());

  double f1_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      row += r.confusion[c][o];
      col += r.confusion[o][c];
    }
    auto& m = r.per_class[c];
    const double tp = static_cast<double>(r.confusion[c][c]);
    m.support = row;
    m.present = row > 0;
    m.precision = col > 0 ? 100.0 * tp / static_cast<double>(col) : 0.0;
    m.recall = row > 0 ? 100.0 * tp / static_cast<double>(row) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    if (m.present) {
      f1_sum += m.f1;
      ++present;
    } else {
      r.absent_classes.emplace_back(to_string(static_cast<PainCategory>(c)));
    }
  }
  r.macro_f1 = f1_sum / static_cast<double>(present);
  return r;
}

ClassificationReport evaluate(const KnnModel& model, std::span<const FeatureVector> features,
                              std::span<const PainCategory> labels) {
  std::vector<PainCategory> predicted;
  predicted.reserve(features.size());
  for (const auto& f : features) predicted.push_back(model.predict(f));
  return evaluate_predictions(labels, predicted);
}

KSelection select_k(std::span<const FeatureVector> train, std::span<const PainCategory> train_labels,
                    std::span<const FeatureVector> val, std::span<const PainCategory> val_labels) {
  KSelection sel;
  double best = -1.0;
  const auto n = train.size();
  if (static_cast<std::size_t>(kDefaultK) <= n) {
    best = evaluate(KnnModel::fit(train, train_labels, kDefaultK), val, val_labels).accuracy;
  }
  for (int k : kCandidateK) {
    if (static_cast<std::size_t>(k) > n) continue;
    const double acc = evaluate(KnnModel::fit(train, train_labels, k), val, val_labels).accuracy;
    sel.accuracy_by_k.emplace_back(k, acc);
    if (acc > best) {
      best = acc;
      sel.k = k;
    }
  }
  if (best < 0.0) throw Error(ErrorCode::kEmptyInput, "select_k: empty training set");
  return sel;
}

}  // namespace osteomorph
