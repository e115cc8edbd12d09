#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osteomorph/label_mask.hpp"
#include "osteomorph/morphometry.hpp"
#include "osteomorph/pain.hpp"

namespace osteomorph {

inline constexpr std::size_t kFeatureDims = 8;

inline constexpr std::array<std::string_view, kFeatureDims> kFeatureNames = {
    "femur_circularity", "femur_eccentricity", "femur_area", "femur_perimeter",
    "tibia_circularity", "tibia_eccentricity", "tibia_area", "tibia_perimeter"};

struct FeatureVector {
  std::string image_id;
  std::array<double, kFeatureDims> values{};
};

FeatureVector make_feature_vector(std::string image_id, const ShapeFeatures& femur,
                                  const ShapeFeatures& tibia);

struct ImageMask {
  std::string image_id;
  LabelMask mask;
};

struct SkippedImage {
  std::string image_id;
  std::string reason;
};

struct FeatureSet {
  std::vector<FeatureVector> vectors;
  std::vector<SkippedImage> skipped;
};

// Images where either bone is missing or degenerate are skipped with a reason
// rather than failing the batch.
FeatureSet build_features(std::span<const ImageMask> images);

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // Euclidean, in z-scored units
};

// Z-scored k-nearest-neighbours over the shape features. Scaling statistics
// (population mean and std) come from the training vectors only; dimensions
// that are constant in training are dropped.
class KnnModel {
 public:
  static KnnModel fit(std::span<const FeatureVector> features,
                      std::span<const PainCategory> labels, int k);

  // Majority vote among the k nearest; distance ties go to the lower training
  // index, vote ties to the tied class holding the nearest neighbour.
  PainCategory predict(const FeatureVector& v) const;
  // All training points ordered by (distance, index).
  std::vector<Neighbor> rank(const FeatureVector& v) const;

  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const std::size_t> kept_dimensions() const noexcept { return kept_; }
  std::span<const std::size_t> dropped_dimensions() const noexcept { return dropped_; }
  std::span<const PainCategory> labels() const noexcept { return labels_; }
  const std::array<double, kFeatureDims>& means() const noexcept { return mean_; }
  const std::array<double, kFeatureDims>& stds() const noexcept { return std_; }

 private:
  std::vector<double> scale(const FeatureVector& v) const;

  int k_ = 1;
  std::array<double, kFeatureDims> mean_{};
  std::array<double, kFeatureDims> std_{};
  std::vector<std::size_t> kept_;
  std::vector<std::size_t> dropped_;
  std::vector<std::vector<double>> scaled_;
  std::vector<PainCategory> labels_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // true count in the test set
  bool present = false;     // support > 0; absent classes stay out of macro F1
};

struct ClassificationReport {
  double accuracy = 0.0;  // percent
  double macro_f1 = 0.0;  // percent, over present classes
  std::array<ClassMetrics, 3> per_class{};
  // confusion[true][predicted], indexed by PainCategory.
  std::array<std::array<std::size_t, 3>, 3> confusion{};
  std::vector<std::string> absent_classes;
};

ClassificationReport evaluate_predictions(std::span<const PainCategory> truth,
                                          std::span<const PainCategory> predicted);
ClassificationReport evaluate(const KnnModel& model, std::span<const FeatureVector> features,
                              std::span<const PainCategory> labels);

inline constexpr int kDefaultK = 5;
inline constexpr std::array<int, 5> kCandidateK = {1, 3, 5, 7, 9};

struct KSelection {
  int k = kDefaultK;
  std::vector<std::pair<int, double>> accuracy_by_k;  // validation accuracy, percent
};

// Starts from the default k and moves to another candidate only when its
// validation accuracy is strictly higher. Candidates above the training size
// are skipped.
KSelection select_k(std::span<const FeatureVector> train, std::span<const PainCategory> train_labels,
                    std::span<const FeatureVector> val, std::span<const PainCategory> val_labels);

}  // namespace osteomorph
