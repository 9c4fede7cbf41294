#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mscf/eval.hpp"
#include "mscf/harness.hpp"
#include "mscf/spectral.hpp"
#include "mscf/tracker.hpp"

namespace mscf {
namespace {

ResponseMap peak_at(int rows, int cols, int r, int c) {
  RealGrid g(rows, cols);
  g(r, c) = 1.0;
  return ResponseMap::from_grid(std::move(g));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SynthSpec distractor_spec(std::uint64_t seed) {
  SynthSpec s;
  s.texture_seed = seed;
  s.distractor = Distractor{40, 0.0, -22.0, 0.9};
  return s;
}

}  // namespace

TEST(Geometry, PaddedRegionInCells) {
  const MscfConfig cfg;
  const FeatureParams fp{4, 9, true, false, true};
  const SearchGeometry g = plan_geometry({10, 10, 24, 32}, cfg, fp);
  EXPECT_DOUBLE_EQ(g.scale, 1.0);
  EXPECT_EQ(g.grid.rows, 32);
  EXPECT_EQ(g.grid.cols, 24);
  EXPECT_EQ(g.grid.channels, 32);
  EXPECT_EQ(g.patch_rows, 128);
  EXPECT_EQ(g.patch_cols, 96);
  EXPECT_EQ(g.target_cells.rows, 8);
  EXPECT_EQ(g.target_cells.cols, 6);
}

TEST(Geometry, LargeTargetsShrinkToGridCap) {
  const MscfConfig cfg;
  const FeatureParams fp{4, 9, true, false, true};
  const SearchGeometry g = plan_geometry({0, 0, 100, 60}, cfg, fp);
  EXPECT_EQ(g.grid.cols, cfg.max_grid_cells);
  EXPECT_LE(g.grid.rows, cfg.max_grid_cells);
  EXPECT_DOUBLE_EQ(g.scale, 400.0 / (50 * 4));
  EXPECT_THROW(plan_geometry({0, 0, 0, 5}, cfg, fp), std::invalid_argument);
}

TEST(Localize, OriginPeakIsNoMotion) {
  const GridShape grid{20, 20, 1};
  const auto [dx, dy] = localize(peak_at(20, 20, 0, 0), grid, 4, 1.0);
  EXPECT_EQ(dx, 0.0);
  EXPECT_EQ(dy, 0.0);
}

TEST(Localize, LastRowWrapsToMinusOneCell) {
  const GridShape grid{20, 20, 1};
  const auto [dx, dy] = localize(peak_at(20, 20, 19, 0), grid, 4, 1.0);
  EXPECT_EQ(dx, 0.0);
  EXPECT_EQ(dy, -4.0);
}

TEST(Localize, CellsScaleToPixels) {
  const GridShape grid{20, 20, 1};
  auto [dx, dy] = localize(peak_at(20, 20, 3, 2), grid, 4, 1.0);
  EXPECT_EQ(dx, 8.0);
  EXPECT_EQ(dy, 12.0);
  std::tie(dx, dy) = localize(peak_at(20, 20, 3, 2), grid, 4, 2.5);
  EXPECT_EQ(dx, 20.0);
  EXPECT_EQ(dy, 30.0);
}

TEST(Localize, SubpixelRefinesSymmetricPeakToCenter) {
  RealGrid g(16, 16);
  g(4, 6) = 1.0;
  g(4, 7) = 1.0 - 1e-9;
  g(3, 6) = 0.5;
  g(5, 6) = 0.5;
  const auto [dx, dy] = localize(ResponseMap::from_grid(g), {16, 16, 1}, 4, 1.0, true);
  EXPECT_NEAR(dy, 16.0, 1e-9);
  EXPECT_NEAR(dx, 26.0, 1e-3);
}

TEST(Model, BlendIsLinearInterpolation) {
  SpectrumTensor a(2, 2, 1, Complex(1.0, 0.0)), b(2, 2, 1, Complex(0.0, 2.0));
  blend_model(a, b, 0.25);
  for (const auto& v : a.data()) EXPECT_EQ(v, Complex(0.75, 0.5));
  SpectrumTensor c(3, 2, 1);
  EXPECT_THROW(blend_model(a, c, 0.5), std::invalid_argument);
}

TEST(Tracker, InitRejectsBadBoxes) {
  const SyntheticSequence seq = generate_synthetic(SynthSpec{});
  const MscfConfig cfg;
  EXPECT_THROW(init(seq.frames[0], {10, 10, 0, 10}, cfg), std::invalid_argument);
  EXPECT_THROW(init(seq.frames[0], {500, 10, 10, 10}, cfg), std::invalid_argument);
}

TEST(Tracker, OriginLabelPeaksAtOrigin) {
  const SyntheticSequence seq = generate_synthetic(SynthSpec{});
  const TrackerState s = init(seq.frames[0], seq.truth[0], MscfConfig{});
  const RealGrid o = origin_label(s, 0.0);
  const ResponseMap m = ResponseMap::from_grid(o);
  EXPECT_EQ(m.max_row, 0);
  EXPECT_EQ(m.max_col, 0);
  EXPECT_DOUBLE_EQ(m.max_value, 1.0 + MscfConfig{}.pedestal_altitude);  // pedestal lies under the peak
}

TEST(Tracker, StationaryTargetStaysPut) {
  SynthSpec spec;
  spec.velocity_x = spec.velocity_y = 0.0;
  spec.n_frames = 12;
  const SyntheticSequence seq = generate_synthetic(spec);
  TrackerState s = init(seq.frames[0], seq.truth[0], MscfConfig{});
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    const FrameReport r = track(s, seq.frames[i]);
    EXPECT_LT(cle(r.box, seq.truth[i]), 1e-9) << "frame " << i + 1;
  }
}

TEST(Tracker, BoxesStayValidAndSizeIsKept) {
  const SyntheticSequence seq = generate_synthetic(SynthSpec{});
  const TrackRun run = run_tracker("synthetic", seq.frames, seq.truth[0], MscfConfig{});
  ASSERT_EQ(run.reports.size(), seq.frames.size());
  for (const auto& r : run.reports) {
    EXPECT_TRUE(r.box.valid());
    EXPECT_EQ(r.box.w, 24.0);
    EXPECT_EQ(r.box.h, 24.0);
    EXPECT_GE(r.box.cx(), 0.0);
    EXPECT_LE(r.box.cx(), 128.0);
    EXPECT_GE(r.box.cy(), 0.0);
    EXPECT_LE(r.box.cy(), 128.0);
    EXPECT_GE(r.mtf, 0.0);
    EXPECT_TRUE(std::isfinite(r.response_max));
  }
}

TEST(Tracker, TrainsOnEverySecondFrame) {
  SynthSpec spec;
  spec.n_frames = 9;
  const SyntheticSequence seq = generate_synthetic(spec);
  const TrackRun run = run_tracker("synthetic", seq.frames, seq.truth[0], MscfConfig{});
  for (std::size_t i = 0; i < run.reports.size(); ++i) {
    const bool expect = i == 0 || (i + 1) % 2 == 0;
    EXPECT_EQ(run.reports[i].trained, expect) << "frame " << i + 1;
  }
  MscfConfig every;
  every.train_interval = 1;
  for (const auto& r : run_tracker("synthetic", seq.frames, seq.truth[0], every).reports) EXPECT_TRUE(r.trained);
}

TEST(Tracker, PsiStaysInUnitInterval) {
  const SyntheticSequence seq = generate_synthetic(distractor_spec(3));
  TrackerState s = init(seq.frames[0], seq.truth[0], MscfConfig{});
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    track(s, seq.frames[i]);
    EXPECT_GE(s.psi, 0.0);
    EXPECT_LE(s.psi, 1.0);
  }
}

TEST(Tracker, RunsAreDeterministic) {
  const SyntheticSequence seq = generate_synthetic(distractor_spec(2));
  const TrackRun a = run_tracker("s", seq.frames, seq.truth[0], MscfConfig{});
  const TrackRun b = run_tracker("s", seq.frames, seq.truth[0], MscfConfig{});
  EXPECT_EQ(track_json(a, true), track_json(b, true));
}

// Frames 1..3 may still be settling; after that the center stays within 5 px.
TEST(Tracker, SyntheticCenterErrorWithinFivePixelsAfterFrameThree) {
  const SyntheticSequence seq = generate_synthetic(SynthSpec{});
  const TrackRun run = run_tracker("synthetic", seq.frames, seq.truth[0], MscfConfig{});
  for (std::size_t i = 3; i < run.reports.size(); ++i) {
    EXPECT_LE(cle(run.reports[i].box, seq.truth[i]), 5.0) << "frame " << i + 1;
  }
}

TEST(Tracker, DistractorRaisesMutationScore) {
  const SyntheticSequence seq = generate_synthetic(distractor_spec(1));
  const TrackRun run = run_tracker("synthetic", seq.frames, seq.truth[0], MscfConfig{});
  std::vector<double> before, during;
  for (int f = 2; f <= 39; ++f) before.push_back(run.reports[f - 1].mtf);
  for (int f = 40; f <= 60; ++f) during.push_back(run.reports[f - 1].mtf);
  EXPECT_GT(median(during), median(before));
}

TEST(Tracker, DisablingFeedbackKeepsPsiZero) {
  const SyntheticSequence seq = generate_synthetic(distractor_spec(1));
  MscfConfig cfg;
  cfg.mtf_feedback = false;
  TrackerState s = init(seq.frames[0], seq.truth[0], cfg);
  for (std::size_t i = 1; i < 60; ++i) {
    track(s, seq.frames[i]);
    EXPECT_EQ(s.psi, 0.0);
  }
}

}  // namespace mscf
