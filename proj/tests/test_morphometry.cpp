#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "osteomorph/error.hpp"
#include "osteomorph/geometry.hpp"
#include "osteomorph/morphometry.hpp"
#include "test_support.hpp"

namespace osteomorph {
namespace {

using testing::disk_mask;
using testing::ellipse_mask;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

TEST(Circularity, Examples) {
  EXPECT_NEAR(circularity(std::numbers::pi, 2 * std::numbers::pi), 1.0, 1e-12);
  EXPECT_NEAR(circularity(1.0, 4.0), std::numbers::pi / 4, 1e-12);
  EXPECT_EQ(code_of([] { circularity(0.0, 1.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { circularity(1.0, 0.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { circularity(-1.0, 2.0); }), ErrorCode::kInvalidArgument);
}

TEST(Eccentricity, Examples) {
  EXPECT_DOUBLE_EQ(eccentricity(1.0, 1.0), 0.0);
  EXPECT_NEAR(eccentricity(2.0, 1.0), std::sqrt(3.0) / 2, 1e-12);
  EXPECT_NEAR(eccentricity(5.0, 3.0), 0.8, 1e-12);
  EXPECT_EQ(code_of([] { eccentricity(1.0, 2.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { eccentricity(1.0, 0.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { eccentricity(0.0, 0.0); }), ErrorCode::kInvalidArgument);
}

TEST(Eccentricity, MonotoneInAxisRatio) {
  for (double a = 1.0; a <= 50.0; a += 7.0) {
    double prev = -1.0;
    for (double ratio = 1.0; ratio > 0.01; ratio -= 0.05) {
      const double e = eccentricity(a, a * ratio);
      EXPECT_GT(e, prev);
      EXPECT_GE(e, 0.0);
      EXPECT_LT(e, 1.0);
      prev = e;
    }
  }
}

TEST(EllipseFit, AxisAlignedEllipse) {
  const auto fit = fit_ellipse_moments(ellipse_mask(640, 640, 319.5, 319.5, 200, 100, 0), kFemur);
  EXPECT_NEAR(fit.semi_major, 200.0, 4.0);
  EXPECT_NEAR(fit.semi_minor, 100.0, 2.0);
  EXPECT_NEAR(fit.centroid.x, 319.5, 1e-9);
  EXPECT_NEAR(fit.centroid.y, 319.5, 1e-9);
  EXPECT_NEAR(fit.orientation, 0.0, 1e-9);
}

TEST(EllipseFit, DiskAxesEqualRadius) {
  const auto fit = fit_ellipse_moments(disk_mask(300, 300, 150, 150, 100), kFemur);
  EXPECT_NEAR(fit.semi_major, 100.0, 1.0);
  EXPECT_NEAR(fit.semi_minor, 100.0, 1.0);
}

TEST(EllipseFit, RotatedEllipseOrientation) {
  const auto fit = fit_ellipse_moments(ellipse_mask(640, 640, 319.5, 319.5, 150, 60, 30), kFemur);
  EXPECT_NEAR(fit.orientation, std::numbers::pi / 6, 0.01 * std::numbers::pi / 6);
  EXPECT_NEAR(fit.semi_major, 150.0, 1.5);
  EXPECT_NEAR(fit.semi_minor, 60.0, 0.6);
}

TEST(EllipseFit, DegenerateSets) {
  EXPECT_EQ(code_of([] { fit_ellipse_moments(std::span<const Pixel>{}); }),
            ErrorCode::kDegenerateShape);
  const std::vector<Pixel> one = {{1, 1}};
  EXPECT_EQ(code_of([&] { fit_ellipse_moments(one); }), ErrorCode::kDegenerateShape);
  const std::vector<Pixel> line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(code_of([&] { fit_ellipse_moments(line); }), ErrorCode::kDegenerateShape);
  LabelMask row(10, 3);
  for (int x = 0; x < 10; ++x) row.set(x, 1, kTibia);
  EXPECT_EQ(code_of([&] { compute_shape_features(row, kTibia); }), ErrorCode::kDegenerateShape);
}

TEST(ShapeFeatures, DiskMatchesOctagonalOracle) {
  const double r = 100.0;
  const auto f = compute_shape_features(disk_mask(640, 640, 319.5, 319.5, r), kFemur);
  const double oracle = 4 * std::numbers::pi * std::numbers::pi * r * r /
                        std::pow(testing::octagonal_circle_perimeter(r), 2);
  EXPECT_NEAR(oracle, 0.8988, 1e-4);
  EXPECT_NEAR(f.circularity, oracle, 0.02);
  EXPECT_LE(f.eccentricity, 0.05);
  EXPECT_EQ(f.class_id, kFemur);
}

TEST(ShapeFeatures, EllipseEccentricity) {
  const auto f =
      compute_shape_features(ellipse_mask(640, 640, 319.5, 319.5, 200, 100, 0, kTibia), kTibia);
  EXPECT_NEAR(f.eccentricity, std::sqrt(3.0) / 2, 0.02);
  EXPECT_EQ(f.class_id, kTibia);
}

TEST(ShapeFeatures, AbsentClass) {
  const auto m = disk_mask(64, 64, 32, 32, 10, kFemur);
  EXPECT_EQ(code_of([&] { compute_shape_features(m, kTibia); }), ErrorCode::kClassAbsent);
}

TEST(ShapeFeatures, SatelliteAndHoleIgnored) {
  const auto clean = disk_mask(200, 200, 80, 100, 40);
  const auto base = compute_shape_features(clean, kFemur);

  LabelMask satellite = clean;
  for (int y = 10; y < 15; ++y)
    for (int x = 170; x < 175; ++x) satellite.set(x, y, kFemur);
  const auto s = compute_shape_features(satellite, kFemur);
  EXPECT_DOUBLE_EQ(s.area, base.area);
  EXPECT_DOUBLE_EQ(s.perimeter, base.perimeter);
  EXPECT_DOUBLE_EQ(s.eccentricity, base.eccentricity);
  EXPECT_DOUBLE_EQ(s.centroid.x, base.centroid.x);

  LabelMask holed = clean;
  holed.set(80, 100, kBackground);
  holed.set(81, 100, kBackground);
  const auto h = compute_shape_features(holed, kFemur);
  EXPECT_DOUBLE_EQ(h.area, base.area);
  EXPECT_DOUBLE_EQ(h.perimeter, base.perimeter);
  EXPECT_NEAR(h.eccentricity, base.eccentricity, 0.01);
}

TEST(ShapeProperty, ScaleCovariance) {
  const auto base = compute_shape_features(ellipse_mask(640, 640, 319.5, 319.5, 40, 25, 20), kFemur);
  for (double k : {2.0, 3.0}) {
    const auto f =
        compute_shape_features(ellipse_mask(640, 640, 319.5, 319.5, 40 * k, 25 * k, 20), kFemur);
    EXPECT_NEAR(f.area / (base.area * k * k), 1.0, 0.03) << k;
    EXPECT_NEAR(f.perimeter / (base.perimeter * k), 1.0, 0.03) << k;
    EXPECT_NEAR(f.semi_major / (base.semi_major * k), 1.0, 0.03) << k;
    EXPECT_NEAR(f.circularity / base.circularity, 1.0, 0.03) << k;
    EXPECT_NEAR(f.eccentricity, base.eccentricity, 0.03) << k;
  }
}

TEST(ShapeProperty, RotationKeepsEccentricityAndArea) {
  const auto base = compute_shape_features(ellipse_mask(640, 640, 319.5, 319.5, 150, 75, 0), kFemur);
  for (int deg = 15; deg < 180; deg += 15) {
    const auto f =
        compute_shape_features(ellipse_mask(640, 640, 319.5, 319.5, 150, 75, deg), kFemur);
    EXPECT_LT(std::abs(f.eccentricity - base.eccentricity), 0.02) << deg;
    EXPECT_NEAR(f.area / base.area, 1.0, 0.01) << deg;
  }
}

TEST(ShapeProperty, IsoperimetricBound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 0;
    const auto m = testing::row_interval_blob(rng, 20, 20, &n);
    const auto cs = extract_contours(m, kFemur);
    ASSERT_FALSE(cs.empty());
    const double c = circularity(polygon_area(cs[0]), polygon_perimeter(cs[0]));
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

CategorizedShape shape(Label bone, PainCategory cat, double circ, double ecc) {
  CategorizedShape s;
  s.features.class_id = bone;
  s.features.circularity = circ;
  s.features.eccentricity = ecc;
  s.category = cat;
  return s;
}

TEST(GroupStats, SingletonHasZeroStd) {
  const std::vector<CategorizedShape> in = {shape(kFemur, PainCategory::kImproved, 0.9, 0.4)};
  const auto g = group_stats(in);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].metric, ShapeMetric::kCircularity);
  EXPECT_DOUBLE_EQ(g[0].mean, 0.9);
  EXPECT_DOUBLE_EQ(g[0].std, 0.0);
  EXPECT_EQ(g[0].n, 1u);
  EXPECT_DOUBLE_EQ(g[1].mean, 0.4);
}

TEST(GroupStats, SampleStandardDeviation) {
  const std::vector<CategorizedShape> in = {shape(kTibia, PainCategory::kWorsened, 0.8, 0.1),
                                            shape(kTibia, PainCategory::kWorsened, 0.9, 0.1)};
  const auto g = group_stats(in);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(g[0].mean, 0.85, 1e-12);
  EXPECT_NEAR(g[0].std, 0.0707107, 1e-7);
  EXPECT_EQ(g[0].n, 2u);
  EXPECT_EQ(g[1].std, 0.0);
}

TEST(GroupStats, FullTableOrderAndEmptyInput) {
  std::vector<CategorizedShape> in;
  for (Label bone : {kTibia, kFemur}) {
    for (auto cat : {PainCategory::kNoChange, PainCategory::kImproved, PainCategory::kWorsened}) {
      in.push_back(shape(bone, cat, 0.5, 0.5));
    }
  }
  const auto g = group_stats(in);
  ASSERT_EQ(g.size(), 12u);
  EXPECT_EQ(g.front().bone, kFemur);
  EXPECT_EQ(g.front().category, PainCategory::kWorsened);
  EXPECT_EQ(g[2].category, PainCategory::kImproved);
  EXPECT_EQ(g[4].category, PainCategory::kNoChange);
  EXPECT_EQ(g.back().bone, kTibia);
  EXPECT_EQ(g.back().metric, ShapeMetric::kEccentricity);
  EXPECT_EQ(code_of([] { group_stats(std::span<const CategorizedShape>{}); }),
            ErrorCode::kEmptyInput);
}

TEST(GroupStats, IndependentOfInputOrder) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::uniform_int_distribution<int> cat(0, 2);
  std::uniform_int_distribution<int> bone(1, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CategorizedShape> in;
    for (int i = 0; i < 25; ++i) {
      in.push_back(shape(static_cast<Label>(bone(rng)), static_cast<PainCategory>(cat(rng)),
                         val(rng), val(rng)));
    }
    const auto a = group_stats(in);
    std::shuffle(in.begin(), in.end(), rng);
    const auto b = group_stats(in);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].mean, b[k].mean);
      EXPECT_EQ(a[k].std, b[k].std);
      EXPECT_EQ(a[k].n, b[k].n);
    }
  }
}

}  // namespace
}  // namespace osteomorph
