#include <gtest/gtest.h>

#include <cmath>

#include "osteomorph/error.hpp"
#include "osteomorph/probability_map.hpp"
#include "osteomorph/seg_metrics.hpp"
#include "test_support.hpp"

namespace osteomorph {
namespace {

ConfusionCounts counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
  ConfusionCounts c;
  c.tp = tp;
  c.tn = tn;
  c.fp = fp;
  c.fn = fn;
  return c;
}

LabelMask with_foreground(int n) {
  LabelMask m(5, 5);
  for (int i = 0; i < n; ++i) m.set(i % 5, i / 5, kFemur);
  return m;
}

TEST(Confusion, PerfectAndEmptyPredictions) {
  const auto gt = with_foreground(10);
  EXPECT_EQ(confusion_counts(gt, gt, kFemur), counts(10, 15, 0, 0));
  EXPECT_EQ(confusion_counts(LabelMask(5, 5), gt, kFemur), counts(0, 15, 0, 10));
}

TEST(Confusion, ThreePixelEnumeration) {
  const LabelMask gt(3, 1, {1, 1, 0});
  const LabelMask pred(3, 1, {1, 0, 1});
  EXPECT_EQ(confusion_counts(pred, gt, kFemur), counts(1, 0, 1, 1));
}

TEST(Confusion, Errors) {
  try {
    confusion_counts(LabelMask(3, 3), LabelMask(3, 4), kFemur);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(confusion_counts(LabelMask(3, 3), LabelMask(3, 3), kBackground), Error);
}

TEST(Metrics, PerfectCase) {
  const auto m = metrics_from_counts(counts(5, 5, 0, 0));
  for (double v : {m.acc, m.precision, m.recall, m.dice, m.iou}) EXPECT_DOUBLE_EQ(v, 100.0);
  EXPECT_FALSE(m.any_degenerate());
}

TEST(Metrics, OneOfEach) {
  const auto m = metrics_from_counts(counts(1, 0, 1, 1));
  EXPECT_NEAR(m.acc, 33.33, 0.005);
  EXPECT_DOUBLE_EQ(m.precision, 50.0);
  EXPECT_DOUBLE_EQ(m.recall, 50.0);
  EXPECT_DOUBLE_EQ(m.dice, 50.0);
  EXPECT_NEAR(m.iou, 33.33, 0.005);
}

TEST(Metrics, ZeroDenominatorSentinel) {
  const auto m = metrics_from_counts(counts(0, 90, 0, 10));
  EXPECT_DOUBLE_EQ(m.recall, 0.0);
  EXPECT_DOUBLE_EQ(m.precision, 0.0);
  EXPECT_TRUE(m.precision_degenerate);
  EXPECT_FALSE(m.recall_degenerate);
  EXPECT_FALSE(m.overlap_degenerate);
  EXPECT_DOUBLE_EQ(m.acc, 90.0);

  const auto absent = metrics_from_counts(counts(0, 25, 0, 0));
  EXPECT_TRUE(absent.precision_degenerate);
  EXPECT_TRUE(absent.recall_degenerate);
  EXPECT_TRUE(absent.overlap_degenerate);
  EXPECT_DOUBLE_EQ(absent.acc, 100.0);
  EXPECT_DOUBLE_EQ(absent.dice, 0.0);

  try {
    metrics_from_counts(counts(0, 0, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(CrossEntropy, Examples) {
  const LabelMask gt(2, 1, {0, 2});
  const ProbabilityMap onehot(2, 1, 3, {1, 0, 0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(sparse_ce_loss(onehot, gt), 0.0);

  const double t = 1.0 / 3.0;
  const ProbabilityMap uniform(2, 1, 3, {t, t, t, t, t, t});
  EXPECT_NEAR(sparse_ce_loss(uniform, gt), std::log(3.0), 1e-12);

  const ProbabilityMap mixed(2, 1, 3, {0.5, 0.25, 0.25, 0.5, 0.25, 0.25});
  const LabelMask gt2(2, 1, {0, 1});
  EXPECT_NEAR(sparse_ce_loss(mixed, gt2), 1.0397, 1e-4);
}

TEST(CrossEntropy, ClampsZeroProbability) {
  const LabelMask gt(1, 1, {1});
  const ProbabilityMap wrong(1, 1, 3, {1, 0, 0});
  const double loss = sparse_ce_loss(wrong, gt);
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -std::log(kProbabilityFloor), 1e-9);
}

TEST(CrossEntropy, Errors) {
  const ProbabilityMap two(2, 1, 2, {0.5, 0.5, 0.5, 0.5});
  try {
    sparse_ce_loss(two, LabelMask(2, 1, {0, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  try {
    sparse_ce_loss(two, LabelMask(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Aggregate, Examples) {
  const std::vector<ConfusionCounts> one = {counts(3, 4, 1, 2)};
  const auto single = metrics_from_counts(one[0]);
  for (auto mode : {Aggregation::kMacro, Aggregation::kMicro}) {
    const auto a = aggregate_metrics(one, mode);
    EXPECT_DOUBLE_EQ(a.acc, single.acc);
    EXPECT_DOUBLE_EQ(a.dice, single.dice);
    EXPECT_DOUBLE_EQ(a.iou, single.iou);
  }
  const std::vector<ConfusionCounts> two = {counts(10, 0, 0, 0), counts(0, 0, 0, 10)};
  EXPECT_NEAR(aggregate_metrics(two, Aggregation::kMicro).dice, 66.67, 0.005);
  EXPECT_DOUBLE_EQ(aggregate_metrics(two).dice, 50.0);
  EXPECT_THROW(aggregate_metrics(std::span<const ConfusionCounts>{}), Error);
  EXPECT_THROW(aggregate_macro(std::span<const SegMetrics>{}), Error);
}

TEST(Aggregate, ParseModes) {
  EXPECT_EQ(parse_aggregation("macro"), Aggregation::kMacro);
  EXPECT_EQ(parse_aggregation("micro"), Aggregation::kMicro);
  EXPECT_EQ(parse_aggregation("micro-counts"), Aggregation::kMicro);
  EXPECT_FALSE(parse_aggregation("weighted").has_value());
}

TEST(MetricsProperty, SwapSymmetryAndDiceIou) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = testing::random_mask(rng, 8, 8);
    const auto b = testing::random_mask(rng, 8, 8);
    for (Label cls : {kFemur, kTibia}) {
      const auto ab = confusion_counts(a, b, cls);
      const auto ba = confusion_counts(b, a, cls);
      EXPECT_EQ(ab.tp, ba.tp);
      EXPECT_EQ(ab.tn, ba.tn);
      EXPECT_EQ(ab.fp, ba.fn);
      EXPECT_EQ(ab.fn, ba.fp);
      const auto m1 = metrics_from_counts(ab);
      const auto m2 = metrics_from_counts(ba);
      EXPECT_DOUBLE_EQ(m1.dice, m2.dice);
      EXPECT_DOUBLE_EQ(m1.iou, m2.iou);
      EXPECT_DOUBLE_EQ(m1.acc, m2.acc);
      EXPECT_DOUBLE_EQ(m1.precision, m2.recall);
      EXPECT_DOUBLE_EQ(m1.recall, m2.precision);
      if (ab.tp + ab.fp + ab.fn > 0) {
        const double j = m1.iou / 100.0;
        EXPECT_NEAR(m1.dice / 100.0, 2 * j / (1 + j), 1e-12);
      }
      for (double v : {m1.acc, m1.precision, m1.recall, m1.dice, m1.iou}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 100.0);
      }
    }
  }
}

TEST(MetricsProperty, MatchesBruteForceCounter) {
  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pred = testing::random_mask(rng, 8, 8);
    const auto gt = testing::random_mask(rng, 8, 8);
    for (Label cls : {kFemur, kTibia}) {
      const auto c = confusion_counts(pred, gt, cls);
      const auto o = testing::brute_force_counts(pred, gt, cls);
      ASSERT_EQ(c.tp, o.tp);
      ASSERT_EQ(c.tn, o.tn);
      ASSERT_EQ(c.fp, o.fp);
      ASSERT_EQ(c.fn, o.fn);
    }
  }
}

TEST(MetricsProperty, ClassesPartitionAgreement) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pred = testing::random_mask(rng, 9, 6);
    const auto gt = testing::random_mask(rng, 9, 6);
    std::uint64_t agree = 0;
    std::uint64_t background_agree = 0;
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 9; ++x) {
        agree += pred.at(x, y) == gt.at(x, y);
        background_agree += pred.at(x, y) == 0 && gt.at(x, y) == 0;
      }
    }
    const auto f = confusion_counts(pred, gt, kFemur);
    const auto t = confusion_counts(pred, gt, kTibia);
    EXPECT_EQ(f.tp + t.tp + background_agree, agree);
    EXPECT_EQ(f.total(), 54u);
  }
}

TEST(MetricsProperty, CrossEntropyNonNegative) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gt = testing::random_mask(rng, 4, 3);
    std::vector<double> probs;
    for (int i = 0; i < 12; ++i) {
      double p[3] = {u(rng), u(rng), u(rng)};
      const double s = p[0] + p[1] + p[2];
      for (double v : p) probs.push_back(v / s);
    }
    EXPECT_GE(sparse_ce_loss(ProbabilityMap(4, 3, 3, probs), gt), 0.0);
  }
}

}  // namespace
}  // namespace osteomorph
