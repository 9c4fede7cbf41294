#include "mscf/label.hpp"

#include <algorithm>
#include <cmath>

namespace mscf {

GaussianLabel gaussian_label(int rows, int cols, CellExtent target, double sigma_factor) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("label dimensions must be >= 1");
  if (target.rows < 1 || target.cols < 1 || !(sigma_factor > 0)) {
    throw std::invalid_argument("gaussian_label: target extent and sigma factor must be positive");
  }
  GaussianLabel out{RealGrid(rows, cols), sigma_factor * std::sqrt(static_cast<double>(target.rows) * target.cols)};
  const int cr = label_center(rows);
  const int cc = label_center(cols);
  const double denom = 2.0 * out.sigma * out.sigma;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double dr = r - cr;
      const double dc = c - cc;
      out.values(r, c) = std::exp(-(dr * dr + dc * dc) / denom);
    }
  }
  return out;
}

CruciformLabel cruciform_label(int rows, int cols, CellExtent target, double ratio, double base_altitude) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("label dimensions must be >= 1");
  if (!(ratio > 0)) throw std::invalid_argument("cruciform_label: ratio must be > 0");
  CruciformLabel out;
  out.values = RealGrid(rows, cols);
  out.altitude = base_altitude;
  out.arm_len_cols = std::clamp(static_cast<int>(std::lround(ratio * target.cols)), 0, cols);
  out.arm_len_rows = std::clamp(static_cast<int>(std::lround(ratio * target.rows)), 0, rows);
  out.bar_height_cells = std::clamp(target.rows, 0, rows);
  out.bar_width_cells = std::clamp(target.cols, 0, cols);

  auto fill = [&](int r0, int nr, int c0, int nc) {
    for (int r = r0; r < r0 + nr; ++r) {
      for (int c = c0; c < c0 + nc; ++c) out.values(r, c) = base_altitude;
    }
  };
  fill(bar_start(rows, out.bar_height_cells), out.bar_height_cells, bar_start(cols, out.arm_len_cols),
       out.arm_len_cols);
  fill(bar_start(rows, out.arm_len_rows), out.arm_len_rows, bar_start(cols, out.bar_width_cells),
       out.bar_width_cells);
  return out;
}

IdealLabel ideal_label(const GaussianLabel& y1, const CruciformLabel& y2, double theta, double psi) {
  if (!y1.values.shape().same_plane(y2.values.shape())) throw std::invalid_argument("ideal_label: shape mismatch");
  if (!(psi >= 0.0 && psi <= 1.0)) throw std::invalid_argument("ideal_label: psi must lie in [0,1]");
  if (!(theta >= 0.0) || theta * psi > 1.0) throw std::invalid_argument("ideal_label: theta * psi must lie in [0,1]");
  const double scale = 1.0 - theta * psi;
  IdealLabel out{y1.values, theta, psi};
  auto dst = out.values.channel(0);
  const auto ped = y2.values.channel(0);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * ped[i];
  return out;
}

}  // namespace mscf
