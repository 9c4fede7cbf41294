#include "mscf/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace mscf {

CnTable::CnTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.size() != static_cast<std::size_t>(kRows)) {
    throw std::invalid_argument("color-name table must have 32768 rows");
  }
  for (const auto& row : rows_) {
    double sum = 0.0;
    for (float v : row) {
      if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("color-name probabilities must lie in [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-3) throw std::invalid_argument("color-name row does not sum to 1");
  }
}

CnTable CnTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open color-name table '" + path.string() + "'");
  std::vector<Row> rows(kRows);
  for (auto& row : rows) {
    for (float& v : row) {
      unsigned char buf[4];
      if (!in.read(reinterpret_cast<char*>(buf), 4)) {
        throw std::runtime_error("color-name table '" + path.string() + "' is truncated");
      }
      if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + 4);
      std::memcpy(&v, buf, 4);
    }
  }
  return CnTable(std::move(rows));
}

void CnTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write color-name table '" + path.string() + "'");
  for (const auto& row : rows_) {
    for (float v : row) {
      unsigned char buf[4];
      std::memcpy(buf, &v, 4);
      if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + 4);
      out.write(reinterpret_cast<const char*>(buf), 4);
    }
  }
}

int feature_channels(const FeatureParams& p) {
  return (p.use_hog ? 3 * p.hog_orientations + 4 : 0) + (p.use_cn ? CnTable::kNames : 0) + (p.use_gray ? 1 : 0);
}

Image sample_region(const Image& img, double cx, double cy, double region_w, double region_h, int out_rows,
                    int out_cols) {
  if (out_rows < 1 || out_cols < 1) throw std::invalid_argument("patch dimensions must be >= 1");
  if (!(region_w > 0) || !(region_h > 0)) throw std::invalid_argument("degenerate sampling region");
  Image out(out_cols, out_rows);
  const double left = cx - region_w / 2.0;
  const double top = cy - region_h / 2.0;
  const double sx = region_w / out_cols;
  const double sy = region_h / out_rows;
  const int max_x = img.width() - 1;
  const int max_y = img.height() - 1;
  for (int i = 0; i < out_rows; ++i) {
    const double src_y = top + (i + 0.5) * sy - 0.5;
    const double fy0 = std::floor(src_y);
    const double wy = src_y - fy0;
    const int y0 = std::clamp(static_cast<int>(fy0), 0, max_y);
    const int y1 = std::clamp(static_cast<int>(fy0) + 1, 0, max_y);
    for (int j = 0; j < out_cols; ++j) {
      const double src_x = left + (j + 0.5) * sx - 0.5;
      const double fx0 = std::floor(src_x);
      const double wx = src_x - fx0;
      const int x0 = std::clamp(static_cast<int>(fx0), 0, max_x);
      const int x1 = std::clamp(static_cast<int>(fx0) + 1, 0, max_x);
      const std::uint8_t* p00 = img.pixel(x0, y0);
      const std::uint8_t* p01 = img.pixel(x1, y0);
      const std::uint8_t* p10 = img.pixel(x0, y1);
      const std::uint8_t* p11 = img.pixel(x1, y1);
      std::uint8_t* dst = out.pixel(j, i);
      for (int k = 0; k < 3; ++k) {
        const double top_v = (1.0 - wx) * p00[k] + wx * p01[k];
        const double bot_v = (1.0 - wx) * p10[k] + wx * p11[k];
        const double v = (1.0 - wy) * top_v + wy * bot_v;
        dst[k] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

Image extract_patch(const Image& img, const BoundingBox& box, double padding, int out_rows, int out_cols) {
  if (!box.valid() || !(padding > 0)) throw std::invalid_argument("degenerate box");
  return sample_region(img, box.cx(), box.cy(), padding * box.w, padding * box.h, out_rows, out_cols);
}

namespace {

// Felzenszwalb-style HOG over a cell grid.
void hog_channels(const Image& patch, int cell, int orientations, FeatureTensor& out, int first_channel) {
  const int width = patch.width();
  const int height = patch.height();
  const int cells_r = height / cell;
  const int cells_c = width / cell;
  const int bins = 2 * orientations;
  std::vector<double> hist(static_cast<std::size_t>(cells_r) * cells_c * bins, 0.0);

  const double bin_width = 2.0 * std::numbers::pi / bins;
  for (int y = 0; y < height; ++y) {
    const int yu = std::max(y - 1, 0);
    const int yd = std::min(y + 1, height - 1);
    for (int x = 0; x < width; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, width - 1);
      double best_dx = 0.0;
      double best_dy = 0.0;
      double best_mag2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double dx = (patch.pixel(xr, y)[k] - patch.pixel(xl, y)[k]) / 255.0;
        const double dy = (patch.pixel(x, yd)[k] - patch.pixel(x, yu)[k]) / 255.0;
        const double m2 = dx * dx + dy * dy;
        if (m2 > best_mag2) {
          best_mag2 = m2;
          best_dx = dx;
          best_dy = dy;
        }
      }
      if (best_mag2 == 0.0) continue;
      double angle = std::atan2(best_dy, best_dx);
      if (angle < 0) angle += 2.0 * std::numbers::pi;
      const int bin = static_cast<int>(std::floor(angle / bin_width + 0.5)) % bins;
      const std::size_t cidx = static_cast<std::size_t>(y / cell) * cells_c + x / cell;
      hist[cidx * bins + bin] += std::sqrt(best_mag2);
    }
  }

  std::vector<double> energy(static_cast<std::size_t>(cells_r) * cells_c, 0.0);
  for (std::size_t c = 0; c < energy.size(); ++c) {
    const double* h = &hist[c * bins];
    for (int o = 0; o < orientations; ++o) {
      const double u = h[o] + h[o + orientations];
      energy[c] += u * u;
    }
  }
  auto e_at = [&](int r, int c) {
    r = std::clamp(r, 0, cells_r - 1);
    c = std::clamp(c, 0, cells_c - 1);
    return energy[static_cast<std::size_t>(r) * cells_c + c];
  };

  constexpr double kEps = 1e-4;
  constexpr double kTruncate = 0.2;
  constexpr double kTextureScale = 0.2357;
  for (int r = 0; r < cells_r; ++r) {
    for (int c = 0; c < cells_c; ++c) {
      // Four 2x2 blocks containing this cell.
      std::array<double, 4> norm{};
      int k = 0;
      for (int dr : {0, -1}) {
        for (int dc : {0, -1}) {
          const double s = e_at(r + dr, c + dc) + e_at(r + dr + 1, c + dc) + e_at(r + dr, c + dc + 1) +
                           e_at(r + dr + 1, c + dc + 1);
          norm[k++] = 1.0 / std::sqrt(s + kEps);
        }
      }
      const double* h = &hist[(static_cast<std::size_t>(r) * cells_c + c) * bins];
      std::array<double, 4> texture{};
      for (int o = 0; o < bins; ++o) {
        double v = 0.0;
        for (int b = 0; b < 4; ++b) {
          const double t = std::min(h[o] * norm[b], kTruncate);
          v += t;
          texture[b] += t;
        }
        out(r, c, first_channel + o) = 0.5 * v;
      }
      for (int o = 0; o < orientations; ++o) {
        double v = 0.0;
        for (int b = 0; b < 4; ++b) v += std::min((h[o] + h[o + orientations]) * norm[b], kTruncate);
        out(r, c, first_channel + bins + o) = 0.5 * v;
      }
      for (int b = 0; b < 4; ++b) out(r, c, first_channel + bins + orientations + b) = kTextureScale * texture[b];
    }
  }
}

void cn_channels(const Image& patch, int cell, const CnTable& cn, FeatureTensor& out, int first_channel) {
  const double inv_area = 1.0 / (cell * cell);
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      std::array<double, CnTable::kNames> acc{};
      for (int y = r * cell; y < (r + 1) * cell; ++y) {
        for (int x = c * cell; x < (c + 1) * cell; ++x) {
          const std::uint8_t* p = patch.pixel(x, y);
          const auto& row = cn.lookup(p[0], p[1], p[2]);
          for (int k = 0; k < CnTable::kNames; ++k) acc[k] += row[k];
        }
      }
      for (int k = 0; k < CnTable::kNames; ++k) out(r, c, first_channel + k) = acc[k] * inv_area;
    }
  }
}

void gray_channel(const Image& patch, int cell, FeatureTensor& out, int channel) {
  const double inv_area = 1.0 / (cell * cell);
  double mean = 0.0;
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      double acc = 0.0;
      for (int y = r * cell; y < (r + 1) * cell; ++y) {
        for (int x = c * cell; x < (c + 1) * cell; ++x) {
          const std::uint8_t* p = patch.pixel(x, y);
          acc += (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
        }
      }
      out(r, c, channel) = acc * inv_area;
      mean += out(r, c, channel);
    }
  }
  mean /= static_cast<double>(out.shape().plane());
  for (auto& v : out.channel(channel)) v -= mean;
}

}  // namespace

FeatureTensor extract_features(const Image& patch, const FeatureParams& params, const CnTable* cn) {
  if (params.cell_size < 1 || params.hog_orientations < 1) throw std::invalid_argument("invalid feature parameters");
  if (patch.width() % params.cell_size != 0 || patch.height() % params.cell_size != 0) {
    throw std::invalid_argument("patch dimensions must be divisible by the cell size");
  }
  if (params.use_cn && cn == nullptr) throw ConfigError("color-name features requested without a table");
  const int channels = feature_channels(params);
  if (channels == 0) throw ConfigError("no feature type enabled");

  FeatureTensor out(patch.height() / params.cell_size, patch.width() / params.cell_size, channels);
  int next = 0;
  if (params.use_hog) {
    hog_channels(patch, params.cell_size, params.hog_orientations, out, next);
    next += 3 * params.hog_orientations + 4;
  }
  if (params.use_cn) {
    cn_channels(patch, params.cell_size, *cn, out, next);
    next += CnTable::kNames;
  }
  if (params.use_gray) gray_channel(patch, params.cell_size, out, next);
  return out;
}

RealGrid hann_window(int rows, int cols) {
  auto hann = [](int n) {
    std::vector<double> w(n, 1.0);
    if (n == 1) return w;
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
    return w;
  };
  const auto wr = hann(rows);
  const auto wc = hann(cols);
  RealGrid out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out(r, c) = wr[r] * wc[c];
  }
  return out;
}

void apply_window(FeatureTensor& t, const RealGrid& window) {
  if (!t.shape().same_plane(window.shape())) throw std::invalid_argument("window shape mismatch");
  const auto w = window.channel(0);
  for (int ch = 0; ch < t.channels(); ++ch) {
    auto plane = t.channel(ch);
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] *= w[i];
  }
}

}  // namespace mscf
