#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mscf/eval.hpp"

namespace mscf {
namespace {

// Prediction whose center sits `d` px right of a fixed 10x10 truth box.
SequenceResult shifted(const std::vector<double>& offsets) {
  SequenceResult r;
  for (double d : offsets) {
    r.truth.emplace_back(BoundingBox{50, 50, 10, 10});
    r.predicted.push_back({50 + d, 50, 10, 10});
  }
  return r;
}

}  // namespace

TEST(Metrics, CenterErrorIsEuclidean) {
  EXPECT_DOUBLE_EQ(cle({0, 0, 2, 2}, {3, 4, 2, 2}), 5.0);
  EXPECT_DOUBLE_EQ(cle({0, 0, 2, 2}, {0, 0, 4, 4}), std::sqrt(2.0));
}

TEST(Metrics, OverlapOracles) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {1, 0, 2, 2}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {5, 5, 2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 4, 4}, {1, 1, 2, 2}), 0.25);
}

TEST(Metrics, OverlapIsSymmetricAndBounded) {
  std::mt19937 rng(81);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{u(rng), u(rng), 0.1 + u(rng), 0.1 + u(rng)};
    const BoundingBox b{u(rng), u(rng), 0.1 + u(rng), 0.1 + u(rng)};
    const double v = iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_DOUBLE_EQ(v, iou(b, a));
  }
}

TEST(Precision, ThresholdIsInclusive) {
  const CurveData c = precision_curve(shifted(std::vector<double>(10, 25.0)));
  EXPECT_EQ(precision_at(c, 20), 0.0);
  EXPECT_EQ(precision_at(c, 24), 0.0);
  EXPECT_EQ(precision_at(c, 25), 1.0);
}

TEST(Precision, FractionOfFrames) {
  const CurveData c = precision_curve(shifted({0, 10, 30}));
  ASSERT_EQ(c.thresholds.size(), 51u);
  EXPECT_EQ(c.thresholds.front(), 0.0);
  EXPECT_EQ(c.thresholds.back(), 50.0);
  EXPECT_DOUBLE_EQ(precision_at(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(precision_at(c, 0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(precision_at(c, 50), 1.0);
  EXPECT_THROW(precision_at(c, 20.5), std::invalid_argument);
}

TEST(Success, AucOracles) {
  EXPECT_DOUBLE_EQ(success_auc(shifted({0, 0, 0})).auc, 50.0 / 51.0);
  EXPECT_DOUBLE_EQ(success_auc(shifted({100, 100})).auc, 0.0);
  const SuccessSummary half = success_auc(shifted({0, 100}));
  EXPECT_DOUBLE_EQ(half.auc, 25.0 / 51.0);
  ASSERT_EQ(half.curve.thresholds.size(), 51u);
  EXPECT_DOUBLE_EQ(half.curve.thresholds[1], 0.02);
}

TEST(Success, AucMatchesOverlapAverageOracle) {
  // Mean over thresholds of a step count equals the mean of per-frame step sums.
  std::mt19937 rng(82);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  std::vector<double> offsets;
  for (int i = 0; i < 40; ++i) offsets.push_back(u(rng));
  const SequenceResult r = shifted(offsets);
  double expect = 0.0;
  for (std::size_t i = 0; i < r.predicted.size(); ++i) {
    const double o = iou(r.predicted[i], *r.truth[i]);
    int above = 0;
    for (int k = 0; k <= 50; ++k) above += o > k / 50.0;
    expect += above / 51.0;
  }
  EXPECT_NEAR(success_auc(r).auc, expect / r.predicted.size(), 1e-12);
}

TEST(Curves, AreMonotone) {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  std::vector<double> offsets;
  for (int i = 0; i < 100; ++i) offsets.push_back(u(rng));
  const SequenceResult r = shifted(offsets);
  const CurveData p = precision_curve(r);
  const CurveData s = success_auc(r).curve;
  for (std::size_t i = 1; i < p.values.size(); ++i) EXPECT_GE(p.values[i], p.values[i - 1]);
  for (std::size_t i = 1; i < s.values.size(); ++i) EXPECT_LE(s.values[i], s.values[i - 1]);
}

TEST(Curves, AbsentTruthIsExcluded) {
  SequenceResult r = shifted({0, 30});
  r.truth.push_back(std::nullopt);
  r.predicted.push_back({0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(precision_at(precision_curve(r)), 0.5);
  EXPECT_DOUBLE_EQ(success_auc(r).auc, success_auc(shifted({0, 30})).auc);
  EXPECT_EQ(excluded_frames(r), 1u);
  const SequenceMetrics m = summarize("x", r);
  EXPECT_EQ(m.frames, 3u);
  EXPECT_EQ(m.excluded, 1u);
  EXPECT_DOUBLE_EQ(m.mean_cle, 15.0);
}

TEST(Curves, RejectMismatchedInput) {
  SequenceResult r = shifted({0, 1});
  r.truth.pop_back();
  EXPECT_THROW(precision_curve(r), std::invalid_argument);
  EXPECT_THROW(success_auc(SequenceResult{}), std::invalid_argument);
  SequenceResult t = shifted({0, 1});
  t.elapsed_per_frame = {0.1};
  EXPECT_THROW(summarize("t", t), std::invalid_argument);
}

TEST(Speed, FramesPerSecond) {
  SequenceResult r = shifted({0, 0, 0, 0});
  r.elapsed_per_frame = {0.1, 0.2, 0.3, 0.4};
  EXPECT_DOUBLE_EQ(fps(r), 4.0);
  r.elapsed_per_frame.assign(4, 0.0);
  EXPECT_EQ(fps(r), 0.0);
}

TEST(Aggregate, ArithmeticMean) {
  SequenceMetrics a{"a", 1.0, 0.5, 10.0, 2.0, 10, 1};
  SequenceMetrics b{"b", 0.5, 0.25, 30.0, 4.0, 20, 0};
  const SequenceMetrics m = aggregate({a, b});
  EXPECT_EQ(m.name, "mean");
  EXPECT_DOUBLE_EQ(m.precision20, 0.75);
  EXPECT_DOUBLE_EQ(m.auc, 0.375);
  EXPECT_DOUBLE_EQ(m.fps, 20.0);
  EXPECT_DOUBLE_EQ(m.mean_cle, 3.0);
  EXPECT_EQ(m.frames, 30u);
  EXPECT_EQ(m.excluded, 1u);
  EXPECT_EQ(aggregate({}).frames, 0u);
}

TEST(Csv, HeaderAndShortestRoundTripValues) {
  const std::string csv = curve_csv({{0, 0.02}, {1.0 / 3.0, 1}});
  EXPECT_EQ(csv, "threshold,value\n0,0.3333333333333333\n0.02,1\n");
}

}  // namespace mscf
