#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mscf/mutation.hpp"
#include "mutation_oracle.hpp"

using namespace mscf;

using oracle::brute_force_mtf;
using oracle::bump;

TEST(ResponseMap, FirstMaximumWinsTies) {
  RealGrid g(3, 3, 1, 0.0);
  g(1, 2) = 5.0;
  g(2, 0) = 5.0;
  const ResponseMap m = ResponseMap::from_grid(g);
  EXPECT_EQ(m.max_row, 1);
  EXPECT_EQ(m.max_col, 2);
  EXPECT_EQ(m.max_value, 5.0);
  g(0, 0) = std::nan("");
  EXPECT_THROW(ResponseMap::from_grid(g), std::invalid_argument);
}

TEST(SubPeaks, StrictMaximaOnlyWithWrap) {
  RealGrid g(5, 5, 1, 0.0);
  g(0, 0) = 1.0;  // neighbours wrap to row/col 4
  g(2, 2) = 2.0;
  g(2, 3) = 2.0;  // tie: neither is strict
  g(4, 4) = 0.5;  // adjacent to (0,0) through the wrap
  const SubPeakMask m = detect_subpeaks(g);
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(2, 2), 0);
  EXPECT_EQ(m(2, 3), 0);
  EXPECT_EQ(m(4, 4), 0);
  EXPECT_EQ(detect_subpeaks(RealGrid(4, 4, 1, 3.0))(1, 1), 0);
}

TEST(DistanceWeights, FormulaAndExclusion) {
  const DistanceWeights pi = build_pi(9, 8, 1.0, 0.01, 2.0);
  const double cr = 4.0, cc = 3.5;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 8; ++j) {
      const double d = std::hypot(i - cr, j - cc);
      EXPECT_DOUBLE_EQ(pi.weights(i, j), d > 2.0 ? 1.0 / (1.0 + 0.01 * std::exp(d)) : 0.0);
    }
  const DistanceWeights far = build_pi(3001, 1, 1.0, 0.01, 0.0);
  for (double w : far.weights.data()) EXPECT_TRUE(std::isfinite(w));
}

TEST(DMin, HalfDiagonalOrFixed) {
  MscfConfig cfg;
  EXPECT_DOUBLE_EQ(d_min_cells(cfg, {6, 8}), 5.0);
  cfg.d_min_mode = DMinMode::Fixed;
  cfg.d_min = 2.5;
  EXPECT_DOUBLE_EQ(d_min_cells(cfg, {6, 8}), 2.5);
}

TEST(Mtf, MatchesBruteForceOnRandomMaps) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(3, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = dim(rng), cols = dim(rng);
    RealGrid g(rows, cols);
    for (auto& v : g.data()) v = u(rng);
    const double d_min = 3.0 * u(rng);
    const DistanceWeights pi = build_pi(rows, cols, 1.0, 0.01, d_min);
    const MtfResult res = compute_mtf(ResponseMap::from_grid(g), pi);
    EXPECT_LT(std::abs(res.mtf - brute_force_mtf(g, 1.0, 0.01, d_min)), 1e-12) << rows << "x" << cols;
    EXPECT_GE(res.psi, 0.0);
    EXPECT_LE(res.psi, 1.0);
  }
}

TEST(Mtf, UnimodalResponseIsZero) {
  const RealGrid g = bump(15, 15, 3, 11, 1.0, 8.0);
  const MtfResult res = compute_mtf(ResponseMap::from_grid(g), build_pi(15, 15, 1.0, 0.01, 2.0));
  EXPECT_EQ(res.mtf, 0.0);
  EXPECT_EQ(res.psi, 0.0);
}

TEST(Mtf, InjectedSecondaryPeak) {
  RealGrid g = bump(15, 15, 7, 7, 1.0, 8.0);
  g(7 + 3, 7 + 4) = 0.8;  // distance 5 from the centre cell
  const MtfResult res = compute_mtf(ResponseMap::from_grid(g), build_pi(15, 15, 1.0, 0.01, 4.0));
  EXPECT_NEAR(res.mtf, 0.32211, 1e-4);
  EXPECT_NEAR(res.mtf, 0.8 / (1.0 + 0.01 * std::exp(5.0)), 1e-15);
}

TEST(Mtf, InvariantToWherePeakSits) {
  RealGrid g = bump(15, 15, 7, 7, 1.0, 8.0);
  g(10, 11) = 0.8;
  const DistanceWeights pi = build_pi(15, 15, 1.0, 0.01, 4.0);
  const double ref = compute_mtf(ResponseMap::from_grid(g), pi).mtf;
  EXPECT_DOUBLE_EQ(compute_mtf(ResponseMap::from_grid(circular_shift(g, 5, -9)), pi).mtf, ref);
}

TEST(Mtf, NonPositiveMaximumIsDegenerate) {
  const RealGrid g(5, 5, 1, -1.0);
  EXPECT_THROW(compute_mtf(ResponseMap::from_grid(g), build_pi(5, 5, 1.0, 0.01, 1.0)), DegenerateResponse);
}
