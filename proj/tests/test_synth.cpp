#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "osteomorph/error.hpp"
#include "osteomorph/manifest.hpp"
#include "osteomorph/mask_io.hpp"
#include "osteomorph/synth.hpp"
#include "test_support.hpp"

namespace osteomorph {
namespace {

TEST(Synth, DiskPixelCount) {
  SyntheticSpec spec;
  const auto m = render_shape(spec);
  const double expected = std::numbers::pi * 100.0 * 100.0;
  EXPECT_LT(std::abs(static_cast<double>(m.count(kFemur)) - expected) / expected, 0.01);
  // Same pixel-center rule as the test rasterizer.
  EXPECT_EQ(m, testing::disk_mask(640, 640, 319.5, 319.5, 100.0));
}

TEST(Synth, RectIsExact) {
  SyntheticSpec spec{ShapeKind::kRect, 10, 10};
  EXPECT_EQ(render_shape(spec).count(kFemur), 100u);
  spec.dim_x = 7;
  spec.dim_y = 3;
  spec.center = Point2{20.0, 20.0};
  EXPECT_EQ(render_shape(spec).count(kFemur), 21u);
}

TEST(Synth, EllipseLabelDiscipline) {
  SyntheticSpec spec{ShapeKind::kEllipse, 200, 100};
  spec.label = kTibia;
  const auto m = render_shape(spec);
  std::set<Label> seen(m.labels().begin(), m.labels().end());
  EXPECT_EQ(seen, (std::set<Label>{kBackground, kTibia}));
  EXPECT_EQ(m, testing::ellipse_mask(640, 640, 319.5, 319.5, 200, 100, 0, kTibia));
}

TEST(Synth, RotatedEllipseMatchesRasterizer) {
  SyntheticSpec spec{ShapeKind::kEllipse, 120, 40, 33.0};
  EXPECT_EQ(render_shape(spec), testing::ellipse_mask(640, 640, 319.5, 319.5, 120, 40, 33.0));
}

TEST(Synth, InvalidSpecsRejected) {
  const auto code = [](const SyntheticSpec& s) {
    try {
      render_shape(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  SyntheticSpec big;
  big.dim_x = 400;
  EXPECT_EQ(code(big), ErrorCode::kInvalidArgument);
  SyntheticSpec off;
  off.center = Point2{50, 320};
  EXPECT_EQ(code(off), ErrorCode::kInvalidArgument);
  SyntheticSpec zero;
  zero.dim_x = 0;
  EXPECT_EQ(code(zero), ErrorCode::kInvalidArgument);
  SyntheticSpec bg;
  bg.label = kBackground;
  EXPECT_EQ(code(bg), ErrorCode::kInvalidArgument);
  SyntheticSpec tilted_rect{ShapeKind::kRect, 10, 10, 5.0};
  EXPECT_EQ(code(tilted_rect), ErrorCode::kInvalidArgument);
  // Touching the frame edge exactly is allowed.
  SyntheticSpec fits{ShapeKind::kRect, 640, 640};
  EXPECT_EQ(render_shape(fits).count(kFemur), 640u * 640u);
}

TEST(Synth, ParseShapeKind) {
  for (auto k : {ShapeKind::kDisk, ShapeKind::kEllipse, ShapeKind::kRect}) {
    EXPECT_EQ(parse_shape_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_shape_kind("hexagon").has_value());
}

TEST(Synth, DemoDataset) {
  testing::TempDir dir("demo");
  const auto path = write_demo_dataset(dir.path());
  const auto m = load_manifest(path);
  ASSERT_EQ(m.entries.size(), 12u);
  int per_split[3] = {0, 0, 0};
  for (const auto& e : m.entries) {
    ++per_split[static_cast<int>(e.split)];
    ASSERT_TRUE(e.pain.has_value());
    EXPECT_EQ(e.image_id.substr(0, e.image_id.find('_')), to_string(e.pain->category()));
    const auto gt = load_mask(m.resolve(e.gt_mask));
    EXPECT_EQ(gt.width(), 640);
    EXPECT_GT(gt.count(kFemur), 0u);
    EXPECT_GT(gt.count(kTibia), 0u);
    ASSERT_TRUE(e.pred_mask.has_value());
    EXPECT_EQ(load_mask(m.resolve(*e.pred_mask)), gt);
  }
  EXPECT_EQ(per_split[0], 6);
  EXPECT_EQ(per_split[1], 3);
  EXPECT_EQ(per_split[2], 3);

  testing::TempDir again("demo");
  write_demo_dataset(again.path());
  EXPECT_EQ(testing::read_file(again / "manifest.csv"), testing::read_file(path));
  EXPECT_EQ(testing::read_file(again / "gt_Improved_02.png"),
            testing::read_file(dir / "gt_Improved_02.png"));
  DemoDatasetOptions tiny;
  tiny.images_per_category = 2;
  EXPECT_THROW(write_demo_dataset(dir / "tiny", tiny), Error);
}

}  // namespace
}  // namespace osteomorph
