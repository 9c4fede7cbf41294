#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "mscf/core.hpp"
#include "mscf/image.hpp"

namespace mscf {

/// RGB -> 10 color-name probabilities, indexed by 5-bit quantized RGB.
///
/// File layout: 32768 rows of 10 little-endian float32 values, no header.
/// Row index = (r >> 3) + 32 * (g >> 3) + 1024 * (b >> 3).
class CnTable {
 public:
  static constexpr int kRows = 32768;
  static constexpr int kNames = 10;
  using Row = std::array<float, kNames>;

  /// Throws std::invalid_argument unless every row lies in [0,1] and sums to 1 within 1e-3.
  explicit CnTable(std::vector<Row> rows);

  static CnTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  static int index(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return (r >> 3) + 32 * (g >> 3) + 1024 * (b >> 3); }
  const Row& lookup(std::uint8_t r, std::uint8_t g, std::uint8_t b) const { return rows_[index(r, g, b)]; }
  const Row& row(int i) const { return rows_.at(i); }

 private:
  std::vector<Row> rows_;
};

struct FeatureParams {
  int cell_size = 4;
  int hog_orientations = 9;
  bool use_hog = true;
  bool use_cn = true;
  bool use_gray = true;
};

/// Number of channels extract_features produces.
int feature_channels(const FeatureParams& params);

/// Samples the (padding*w) x (padding*h) region centered on the box into an
/// out_rows x out_cols patch. Pixels outside the frame replicate the nearest edge.
Image extract_patch(const Image& img, const BoundingBox& box, double padding, int out_rows, int out_cols);

/// Same sampler, with the region given directly by center and size in pixels.
Image sample_region(const Image& img, double cx, double cy, double region_w, double region_h, int out_rows,
                    int out_cols);

/// Cell-level features: 31 HOG channels (18 signed, 9 unsigned, 4 texture),
/// 10 color-name channels, 1 mean-subtracted gray channel; each group optional,
/// concatenated in that order.
FeatureTensor extract_features(const Image& patch, const FeatureParams& params, const CnTable* cn);

/// Outer product of 1-D Hann windows (zero at both ends).
RealGrid hann_window(int rows, int cols);

/// Multiplies every channel of `t` by `window` in place.
void apply_window(FeatureTensor& t, const RealGrid& window);

}  // namespace mscf
