#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

extern "C" {
#include <quadmath.h>
}

#include "qcdim/errors.hpp"
#include "qcdim/fractal.hpp"
#include "test_support.hpp"

namespace qcdim {
namespace {

double d(Coord x) { return static_cast<double>(x); }

CantorSpec spec(int m, double r, int n, double offset = 0.0, double scale = 1.0) {
  return CantorSpec{m, r, n, offset, scale};
}

IntervalCover single(double a, double b) { return IntervalCover{{{a, b}}, 0}; }

// -- CantorSpec and generation -------------------------------------------------

TEST(CantorSpec, ValidationAndAnalyticDimension) {
  EXPECT_NEAR(spec(2, 1.0 / 3, 1).analytic_dimension(), std::log(2) / std::log(3), 1e-15);
  EXPECT_NEAR(spec(3, 0.2, 8).analytic_dimension(), 0.6826061944859854, 1e-12);
  EXPECT_THROW(spec(1, 0.5, 3).validate(), DomainError);
  EXPECT_THROW(spec(3, 0.4, 3).validate(), DomainError);
  EXPECT_THROW(spec(2, 0.3, 0).validate(), DomainError);
  EXPECT_THROW(spec(2, 0.3, 2, 0.0, -1.0).validate(), DomainError);
  EXPECT_NO_THROW(spec(2, 0.5, 3).validate());
}

TEST(CantorSpec, ParseAndLabel) {
  const CantorSpec s = CantorSpec::parse("3:5:8");
  EXPECT_EQ(s.pieces, 3);
  EXPECT_DOUBLE_EQ(s.ratio, 0.2);
  EXPECT_EQ(s.depth, 8);
  EXPECT_EQ(s.label(), "3:5:8");
  const CantorSpec shifted = CantorSpec::parse("2:3:4:1:1");
  EXPECT_DOUBLE_EQ(shifted.offset, 1.0);
  EXPECT_EQ(shifted.label(), "2:3:4:1:1");
  EXPECT_THROW(CantorSpec::parse("2:3"), UsageError);
  EXPECT_THROW(CantorSpec::parse("2:x:4"), UsageError);
  EXPECT_THROW(CantorSpec::parse("2:1.5:4"), DomainError);
}

TEST(GenerateCantor, FirstMiddleThirdsStep) {
  const IntervalCover c = generate_cantor(spec(2, 1.0 / 3, 1));
  ASSERT_EQ(c.intervals.size(), 2u);
  EXPECT_EQ(c.generation, 1);
  EXPECT_EQ(c.intervals[0].left, 0);
  EXPECT_NEAR(d(c.intervals[0].right), 1.0 / 3, 1e-30);
  EXPECT_NEAR(d(c.intervals[1].left), 2.0 / 3, 1e-30);
  EXPECT_EQ(c.intervals[1].right, 1);
}

TEST(GenerateCantor, CountsAndLengths) {
  const IntervalCover c = generate_cantor(spec(2, 1.0 / 3, 12));
  ASSERT_EQ(c.intervals.size(), 4096u);
  EXPECT_TRUE(c.well_formed());
  const Coord expected = powq(3.0Q, -12);
  for (const Interval& iv : c.intervals) ASSERT_LT(fabsq(iv.right - iv.left - expected), 1e-30Q);

  const IntervalCover c3 = generate_cantor(spec(3, 0.2, 8));
  EXPECT_EQ(c3.intervals.size(), 6561u);
  EXPECT_TRUE(c3.well_formed());
}

TEST(GenerateCantor, OffsetAndScale) {
  const IntervalCover c = generate_cantor(spec(2, 1.0 / 3, 3, 1.0, 2.0));
  EXPECT_EQ(c.intervals.front().left, 1);
  EXPECT_LT(fabsq(c.intervals.back().right - 3), 1e-32Q);
  EXPECT_NEAR(d(c.intervals.front().right - c.intervals.front().left), 2.0 / 27, 1e-30);
}

TEST(GenerateCantor, ResourceCap) {
  EXPECT_THROW(generate_cantor(spec(10, 0.1, 8)), ResourceError);
  EXPECT_NO_THROW(generate_cantor(spec(10, 0.1, 7)));
}

// -- Model maps -------------------------------------------------------------------

TEST(ModelMap, DistortionAndLabels) {
  EXPECT_EQ(ModelMap::identity().distortion_K(), 1.0);
  EXPECT_EQ(ModelMap::affine(-3, 2).distortion_K(), 1.0);
  EXPECT_EQ(ModelMap::power_stretch(1.5).distortion_K(), 1.5);
  EXPECT_THROW(ModelMap::power_stretch(0.5), DomainError);
  EXPECT_THROW(ModelMap::affine(0, 1), DomainError);
  EXPECT_EQ(ModelMap::parse("power:2").label(), "power:2");
  EXPECT_EQ(ModelMap::parse("affine:2:1").label(), "affine:2:1");
  EXPECT_EQ(ModelMap::parse("identity").kind, MapKind::Identity);
  EXPECT_THROW(ModelMap::parse("rotate:1"), UsageError);
}

TEST(ApplyMap, IdentityLeavesCoverUnchanged) {
  const IntervalCover c = generate_cantor(spec(2, 1.0 / 3, 5));
  const IntervalCover m = apply_map(ModelMap::identity(), c);
  ASSERT_EQ(m.intervals.size(), c.intervals.size());
  EXPECT_EQ(m.generation, c.generation);
  for (std::size_t i = 0; i < c.intervals.size(); ++i) {
    EXPECT_EQ(m.intervals[i].left, c.intervals[i].left);
    EXPECT_EQ(m.intervals[i].right, c.intervals[i].right);
  }
}

TEST(ApplyMap, AffineExample) {
  const IntervalCover m = apply_map(ModelMap::affine(2, 1), single(0, 1.0 / 3));
  ASSERT_EQ(m.intervals.size(), 1u);
  EXPECT_NEAR(d(m.intervals[0].left), 1.0, 1e-15);
  EXPECT_NEAR(d(m.intervals[0].right), 5.0 / 3, 1e-15);
}

TEST(ApplyMap, NegativeSlopeReordersIntervals) {
  const IntervalCover c = generate_cantor(spec(2, 1.0 / 3, 4));
  const IntervalCover m = apply_map(ModelMap::affine(-1, 0), c);
  EXPECT_TRUE(m.well_formed());
  EXPECT_EQ(m.intervals.front().left, -1);
}

TEST(ApplyMap, PowerStretchExample) {
  const IntervalCover m =
      apply_map(ModelMap::power_stretch(2), IntervalCover{{{1.0Q / 9, 1.0Q / 3}}, 0});
  EXPECT_LT(fabsq(m.intervals[0].left - 1.0Q / 81), 1e-30Q);
  EXPECT_LT(fabsq(m.intervals[0].right - 1.0Q / 9), 1e-30Q);
}

TEST(ApplyMap, PowerStretchIsOddOnTheNegativeAxis) {
  const IntervalCover m =
      apply_map(ModelMap::power_stretch(2), IntervalCover{{{-1.0Q / 3, -1.0Q / 9}}, 0});
  EXPECT_LT(fabsq(m.intervals[0].left + 1.0Q / 9), 1e-30Q);
  EXPECT_LT(fabsq(m.intervals[0].right + 1.0Q / 81), 1e-30Q);
}

TEST(ApplyMap, StraddlingIntervalNeedsSplit) {
  const IntervalCover c = single(-0.5, 0.5);
  EXPECT_THROW(apply_map(ModelMap::power_stretch(2), c), DomainError);
  const IntervalCover split = split_at_zero(c);
  ASSERT_EQ(split.intervals.size(), 2u);
  const IntervalCover m = apply_map(ModelMap::power_stretch(2), split);
  EXPECT_TRUE(m.well_formed() || m.intervals.size() == 2u);
  EXPECT_NEAR(d(m.intervals.front().left), -0.25, 1e-15);
  EXPECT_NEAR(d(m.intervals.back().right), 0.25, 1e-15);
}

TEST(ApplyMap, CatalogueKeepsCountAndDisjointness) {
  const std::vector<ModelMap> maps{ModelMap::identity(), ModelMap::affine(-2.5, 0.3),
                                   ModelMap::power_stretch(1.5), ModelMap::power_stretch(3)};
  for (const CantorSpec& s : {spec(2, 1.0 / 3, 8, 1.0), spec(3, 0.2, 6), spec(2, 0.25, 8, -2.0)}) {
    const IntervalCover c = split_at_zero(generate_cantor(s));
    for (const ModelMap& m : maps) {
      const IntervalCover out = apply_map(m, c);
      EXPECT_EQ(out.intervals.size(), c.intervals.size()) << m.label();
      EXPECT_TRUE(out.well_formed()) << s.label() << " " << m.label();
    }
  }
}

// -- Box dimension ------------------------------------------------------------------

TEST(BoxDimension, UnitSegment) {
  const DimEstimate e = box_dimension(single(0, 1), 8);
  EXPECT_NEAR(e.value, 1.0, 0.02);
  EXPECT_GE(e.scales_used, 4);
  EXPECT_LT(e.scale_range.first, e.scale_range.second);
}

TEST(BoxDimension, MiddleThirds) {
  const DimEstimate e = box_dimension(generate_cantor(spec(2, 1.0 / 3, 12)));
  EXPECT_NEAR(e.value, std::log(2) / std::log(3), 0.02);
  EXPECT_GE(e.r2, 0.0);
  EXPECT_LE(e.r2, 1.0);
}

TEST(BoxDimension, QuarterRatio) {
  const DimEstimate e = box_dimension(generate_cantor(spec(2, 0.25, 10)));
  EXPECT_NEAR(e.value, 0.5, 0.03);
}

TEST(BoxDimension, DegenerateInputs) {
  EXPECT_THROW(box_dimension(IntervalCover{}), DegenerateInput);
  EXPECT_THROW(box_dimension(IntervalCover{{{0.5Q, 0.5Q}, {0.5Q, 0.5Q}}, 0}), DegenerateInput);
  EXPECT_THROW(box_dimension(single(0, 1), 3), DomainError);
}

struct Calibration {
  double dimension;
  CantorSpec spec;
};

class EstimatorCalibration : public ::testing::TestWithParam<Calibration> {};

TEST_P(EstimatorCalibration, WithinThreeHundredths) {
  const Calibration c = GetParam();
  const double count = std::pow(c.spec.pieces, c.spec.depth);
  ASSERT_GE(count, 1e4);
  ASSERT_LE(count, 1e6);
  ASSERT_NEAR(c.spec.analytic_dimension(), c.dimension, 1e-12);
  const DimEstimate e = box_dimension(generate_cantor(c.spec));
  EXPECT_NEAR(e.value, c.dimension, 0.03);
  EXPECT_GE(e.value, 0.0);
  EXPECT_LE(e.value, 1.2);
}

INSTANTIATE_TEST_SUITE_P(
    Dimensions, EstimatorCalibration,
    ::testing::Values(Calibration{0.2, spec(2, 1.0 / 32, 14)},
                      Calibration{0.5, spec(2, 0.25, 14)},
                      Calibration{std::log(2) / std::log(3), spec(2, 1.0 / 3, 14)},
                      Calibration{0.9, spec(2, std::pow(2.0, -1.0 / 0.9), 14)}));

TEST(BoxDimension, AffineInvariance) {
  const std::vector<ModelMap> maps{ModelMap::affine(2, 1), ModelMap::affine(-3, 0.5),
                                   ModelMap::affine(0.01, -7)};
  for (const CantorSpec& s : {spec(2, 1.0 / 3, 12), spec(3, 0.2, 8), spec(2, 0.25, 10)}) {
    const IntervalCover c = generate_cantor(s);
    const double base = box_dimension(c).value;
    for (const ModelMap& m : maps) {
      EXPECT_NEAR(box_dimension(apply_map(m, c)).value, base, 0.01) << s.label() << " " << m.label();
    }
  }
}

// -- Sandwich checks --------------------------------------------------------------

TEST(Sandwich, IdentityIsInsideEveryMethod) {
  const auto rows = sandwich_check(
      spec(2, 1.0 / 3, 12), ModelMap::identity(),
      {BoundMethod::Astala, BoundMethod::Symmetric, BoundMethod::ComposedLine});
  ASSERT_EQ(rows.size(), 3u);
  for (const SandwichRow& r : rows) {
    EXPECT_TRUE(r.error.empty());
    EXPECT_TRUE(r.inside) << to_string(r.method);
    EXPECT_NEAR(r.estimate.value, r.L_analytic.to_double(), 0.02);
  }
}

TEST(Sandwich, BiLipschitzStretchKeepsTheEstimate) {
  const CantorSpec shifted = spec(2, 1.0 / 3, 12, 1.0, 1.0);
  const double base = box_dimension(generate_cantor(shifted)).value;
  const auto rows = sandwich_check(shifted, ModelMap::power_stretch(1.5),
                                   {BoundMethod::Astala, BoundMethod::ComposedLine});
  for (const SandwichRow& r : rows) {
    EXPECT_TRUE(r.inside) << to_string(r.method);
    EXPECT_NEAR(r.estimate.value, base, 0.02);
  }
}

TEST(Sandwich, SquareStretchAwayFromZero) {
  const auto rows = sandwich_check(spec(2, 0.25, 10, 0.25, 0.75), ModelMap::power_stretch(2),
                                   {BoundMethod::Astala, BoundMethod::ComposedLine});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].inside);
  EXPECT_TRUE(rows[1].inside);
  EXPECT_DOUBLE_EQ(rows[0].K, 2.0);
}

TEST(Sandwich, AstalaSoundnessOverCatalogue) {
  const std::vector<ModelMap> maps{ModelMap::identity(), ModelMap::affine(-2, 3),
                                   ModelMap::power_stretch(1.5), ModelMap::power_stretch(2),
                                   ModelMap::power_stretch(4)};
  for (const CantorSpec& s :
       {spec(2, 1.0 / 3, 12), spec(3, 0.2, 8), spec(2, 0.25, 10, 0.25, 0.75),
        spec(2, 1.0 / 32, 6, 1.0), spec(2, 0.45, 12, -1.0, 2.0)}) {
    for (const ModelMap& m : maps) {
      const auto rows = sandwich_check(s, m, {BoundMethod::Astala});
      ASSERT_EQ(rows.size(), 1u);
      EXPECT_TRUE(rows[0].inside) << s.label() << " " << m.label() << " est "
                                  << rows[0].estimate.value;
    }
  }
}

TEST(Sandwich, TheoremRowsAtFullDimensionAreFlagged) {
  const auto rows = sandwich_check(spec(2, 0.5, 6), ModelMap::identity(),
                                   {BoundMethod::Theorem42, BoundMethod::Astala});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_TRUE(rows[1].error.empty());
}

// -- CSV -----------------------------------------------------------------------------

TEST(FractalCsv, CoverAndSandwich) {
  const std::string cover = cover_csv(generate_cantor(spec(2, 1.0 / 3, 1)));
  std::istringstream in(cover);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "left,right");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);

  const std::string s = sandwich_csv(
      sandwich_check(spec(2, 1.0 / 3, 8), ModelMap::identity(), {BoundMethod::Astala}));
  EXPECT_EQ(s.substr(0, s.find('\n')), "spec,map,K,L_analytic,estimate,r2,method,lower,upper,inside");
  EXPECT_NE(s.find("2:3:8,identity,1.00000000000000000000000000000e+00,"), std::string::npos);
  EXPECT_NE(s.find(",astala,"), std::string::npos);
}

TEST(FractalCsv, CoordinatesKeepQuadPrecision) {
  EXPECT_EQ(format_coord(1.0Q / 3, 30).substr(0, 32), "3.33333333333333333333333333333e");
}

}  // namespace
}  // namespace qcdim
