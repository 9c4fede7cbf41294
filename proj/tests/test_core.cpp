#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mscf/core.hpp"
#include "test_support.hpp"

using namespace mscf;

TEST(BoundingBox, CenterAndValidity) {
  BoundingBox b{10, 20, 30, 40};
  EXPECT_DOUBLE_EQ(b.cx(), 25.0);
  EXPECT_DOUBLE_EQ(b.cy(), 40.0);
  EXPECT_TRUE(b.valid());
  EXPECT_FALSE((BoundingBox{0, 0, 0, 5}.valid()));
  EXPECT_EQ(BoundingBox::from_center(25, 40, 30, 40), b);
}

TEST(Tensor, LayoutIsChannelMajorRowMajor) {
  FeatureTensor t(2, 3, 2);
  t(1, 2, 1) = 7.0;
  EXPECT_EQ(t.data()[6 + 5], 7.0);
  EXPECT_EQ(t.channel(1)[5], 7.0);
  EXPECT_THROW(FeatureTensor(0, 3, 1), std::invalid_argument);
}

TEST(CropMask, KeepsCenteredWindowOnly) {
  FeatureTensor t(6, 5, 1, 1.0);
  const FeatureTensor c = crop_mask_apply(t, 2, 3);
  int kept = 0;
  for (int r = 0; r < 6; ++r)
    for (int col = 0; col < 5; ++col) {
      const bool inside = r >= 2 && r < 4 && col >= 1 && col < 4;
      EXPECT_EQ(c(r, col), inside ? 1.0 : 0.0) << r << "," << col;
      kept += inside;
    }
  EXPECT_EQ(kept, 6);
}

TEST(CropMask, Idempotent) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureTensor t = oracle::random_real({9, 7, 3}, rng);
    const FeatureTensor once = crop_mask_apply(t, 4, 3);
    EXPECT_EQ(crop_mask_apply(once, 4, 3), once);
  }
}

TEST(CropMask, FullWindowIsIdentityAndOversizeThrows) {
  std::mt19937 rng(4);
  const FeatureTensor t = oracle::random_real({5, 5, 2}, rng);
  EXPECT_EQ(crop_mask_apply(t, 5, 5), t);
  EXPECT_THROW(crop_mask_apply(t, 6, 2), std::invalid_argument);
}

TEST(CircularShift, MovesEntriesWithWrap) {
  RealGrid m(3, 4);
  m(0, 0) = 1.0;
  const RealGrid s = circular_shift(m, -1, 5);
  EXPECT_EQ(s(2, 1), 1.0);
  EXPECT_EQ(circular_shift(s, 1, -5), m);
}

TEST(TensorIo, RoundTripIsExact) {
  std::mt19937 rng(5);
  const FeatureTensor t = oracle::random_real({4, 6, 3}, rng);
  std::stringstream ss;
  write_tensor(ss, t);
  EXPECT_EQ(read_tensor(ss), t);
}

TEST(TensorIo, RejectsBadMagic) {
  std::stringstream ss("NOTATENSOR");
  EXPECT_THROW(read_tensor(ss), std::exception);
}

TEST(Config, DefaultsValidateAndRangesAreChecked) {
  MscfConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.admm_iters, 3);
  EXPECT_DOUBLE_EQ(cfg.lambda2, 840.0);
  cfg.beta = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.theta = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.use_hog = cfg.use_cn = cfg.use_gray = false;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
