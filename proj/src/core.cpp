#include "mscf/core.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

namespace mscf {

void MscfConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(lambda1 >= 0 && lambda2 >= 0 && phi >= 0, "regularizers must be >= 0");
  require(mu0 > 0 && mu0 <= mu_max, "need 0 < mu0 <= mu_max");
  require(beta > 1, "beta must be > 1");
  require(admm_iters >= 1, "admm_iters must be >= 1");
  require(learning_rate > 0 && learning_rate <= 1, "learning_rate must be in (0, 1]");
  require(theta >= 0 && theta <= 1, "theta must be in [0, 1]");
  require(nu > 0 && delta > 0, "nu and delta must be > 0");
  require(pedestal_ratio > 0, "pedestal_ratio must be > 0");
  require(pedestal_altitude >= 0, "pedestal_altitude must be >= 0");
  require(train_interval >= 1, "train_interval must be >= 1");
  require(cell_size >= 1, "cell_size must be >= 1");
  require(search_padding >= 1, "search_padding must be >= 1");
  require(output_sigma_factor > 0, "output_sigma_factor must be > 0");
  require(d_min >= 0, "d_min must be >= 0");
  require(max_grid_cells >= 4, "max_grid_cells must be >= 4");
  require(use_hog || use_cn || use_gray, "at least one feature type must be enabled");
}

FeatureTensor crop_mask_apply(const FeatureTensor& t, int target_rows, int target_cols) {
  if (target_rows < 0 || target_cols < 0 || target_rows > t.rows() || target_cols > t.cols()) {
    throw std::invalid_argument("crop window exceeds tensor dimensions");
  }
  const int r0 = crop_start(t.rows(), target_rows);
  const int c0 = crop_start(t.cols(), target_cols);
  FeatureTensor out(t.shape());
  for (int ch = 0; ch < t.channels(); ++ch) {
    for (int r = r0; r < r0 + target_rows; ++r) {
      for (int c = c0; c < c0 + target_cols; ++c) out(r, c, ch) = t(r, c, ch);
    }
  }
  return out;
}

namespace {

constexpr char kTensorMagic[] = "MSCFT1\n";

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw std::runtime_error("truncated tensor stream");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_tensor(std::ostream& os, const FeatureTensor& t) {
  os.write(kTensorMagic, sizeof(kTensorMagic) - 1);
  put_le<std::int32_t>(os, t.rows());
  put_le<std::int32_t>(os, t.cols());
  put_le<std::int32_t>(os, t.channels());
  for (double v : t.data()) put_le<double>(os, v);
}

FeatureTensor read_tensor(std::istream& is) {
  char magic[sizeof(kTensorMagic) - 1];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kTensorMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a tensor stream");
  }
  const auto rows = get_le<std::int32_t>(is);
  const auto cols = get_le<std::int32_t>(is);
  const auto channels = get_le<std::int32_t>(is);
  FeatureTensor t(rows, cols, channels);
  for (double& v : t.data()) v = get_le<double>(is);
  return t;
}

}  // namespace mscf
