#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mscf {

using Complex = std::complex<double>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DegenerateResponse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundingBox {
  double x = 0.0;  // left edge
  double y = 0.0;  // top edge
  double w = 1.0;
  double h = 1.0;

  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - w / 2.0, cy - h / 2.0, w, h};
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct GridShape {
  int rows = 1;
  int cols = 1;
  int channels = 1;

  std::size_t plane() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  std::size_t size() const { return plane() * static_cast<std::size_t>(channels); }
  bool same_plane(const GridShape& o) const { return rows == o.rows && cols == o.cols; }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Target extent measured in feature cells.
struct CellExtent {
  int rows = 1;
  int cols = 1;
};

/// Multi-channel grid stored channel-major, each channel row-major.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(GridShape shape, T fill = T{}) : shape_(shape), data_(checked(shape).size(), fill) {}
  Tensor(int rows, int cols, int channels = 1, T fill = T{})
      : Tensor(GridShape{rows, cols, channels}, fill) {}

  const GridShape& shape() const { return shape_; }
  int rows() const { return shape_.rows; }
  int cols() const { return shape_.cols; }
  int channels() const { return shape_.channels; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int r, int c, int ch = 0) { return data_[index(r, c, ch)]; }
  const T& operator()(int r, int c, int ch = 0) const { return data_[index(r, c, ch)]; }

  std::span<T> channel(int ch) {
    return {data_.data() + static_cast<std::size_t>(ch) * shape_.plane(), shape_.plane()};
  }
  std::span<const T> channel(int ch) const {
    return {data_.data() + static_cast<std::size_t>(ch) * shape_.plane(), shape_.plane()};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  static const GridShape& checked(const GridShape& s) {
    if (s.rows < 1 || s.cols < 1 || s.channels < 1) {
      throw std::invalid_argument("grid dimensions must be >= 1");
    }
    return s;
  }
  std::size_t index(int r, int c, int ch) const {
    return (static_cast<std::size_t>(ch) * shape_.rows + r) * shape_.cols + c;
  }

  GridShape shape_{};
  std::vector<T> data_;
};

using FeatureTensor = Tensor<double>;
using SpectrumTensor = Tensor<Complex>;
using RealGrid = Tensor<double>;      // single channel
using ComplexGrid = Tensor<Complex>;  // single channel

enum class DMinMode { HalfDiagonal, Fixed };

struct MscfConfig {
  double lambda1 = 20.0;
  double lambda2 = 840.0;
  double phi = 1.0;
  double mu0 = 0.1;
  double mu_max = 10000.0;
  double beta = 10.0;
  int admm_iters = 3;
  double theta = 0.044;
  double nu = 1.0;
  double delta = 0.01;
  double pedestal_ratio = 2.5;
  double pedestal_altitude = 0.1;
  double learning_rate = 0.0158;
  int train_interval = 2;
  int cell_size = 4;
  double search_padding = 4.0;
  double output_sigma_factor = 1.0 / 16.0;
  DMinMode d_min_mode = DMinMode::HalfDiagonal;
  double d_min = 0.0;  // used when d_min_mode == Fixed, in cells
  int max_grid_cells = 50;
  bool use_hog = true;
  bool use_cn = true;
  bool use_gray = true;
  std::string cn_table;  // empty: no table, tracker falls back to HOG + gray
  bool mtf_feedback = true;  // false forces psi = 0 (ablation)
  bool subpixel = false;

  /// Throws ConfigError when a value is out of its admissible range.
  void validate() const;
  friend bool operator==(const MscfConfig&, const MscfConfig&) = default;
};

/// Zeroes everything outside the centered target_rows x target_cols window (P^T P).
/// Even leftovers put the extra row/column after the window (top-left bias).
FeatureTensor crop_mask_apply(const FeatureTensor& t, int target_rows, int target_cols);

/// First row/column of the centered window of size `window` in a dimension of size `n`.
inline int crop_start(int n, int window) { return (n - window) / 2; }

/// output(i, j) = m((i - dr) mod rows, (j - dc) mod cols), per channel.
template <typename T>
Tensor<T> circular_shift(const Tensor<T>& m, int dr, int dc) {
  Tensor<T> out(m.shape());
  const int rows = m.rows();
  const int cols = m.cols();
  const int sr = ((dr % rows) + rows) % rows;
  const int sc = ((dc % cols) + cols) % cols;
  for (int ch = 0; ch < m.channels(); ++ch) {
    for (int r = 0; r < rows; ++r) {
      const int dst_r = (r + sr) % rows;
      for (int c = 0; c < cols; ++c) {
        out(dst_r, (c + sc) % cols, ch) = m(r, c, ch);
      }
    }
  }
  return out;
}

/// Binary tensor format: "MSCFT1\n", int32 rows/cols/channels, float64 data, little-endian.
void write_tensor(std::ostream& os, const FeatureTensor& t);
FeatureTensor read_tensor(std::istream& is);

}  // namespace mscf
