#include "mscf/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mscf {

ResponseMap ResponseMap::from_grid(RealGrid values) {
  ResponseMap out;
  out.max_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c) {
      const double v = values(r, c);
      if (!std::isfinite(v)) throw std::invalid_argument("response map has non-finite values");
      if (v > out.max_value) {
        out.max_value = v;
        out.max_row = r;
        out.max_col = c;
      }
    }
  }
  out.values = std::move(values);
  return out;
}

SubPeakMask detect_subpeaks(const RealGrid& r) {
  const int rows = r.rows();
  const int cols = r.cols();
  SubPeakMask mask(rows, cols, 1, 0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = r(i, j);
      bool strict = true;
      for (int di = -1; di <= 1 && strict; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = (i + di + rows) % rows;
          const int nj = (j + dj + cols) % cols;
          if (ni == i && nj == j) continue;
          if (!(v > r(ni, nj))) {
            strict = false;
            break;
          }
        }
      }
      mask(i, j) = strict ? 1 : 0;
    }
  }
  return mask;
}

DistanceWeights build_pi(int rows, int cols, double nu, double delta, double d_min) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("build_pi: dimensions must be >= 1");
  DistanceWeights out{RealGrid(rows, cols), nu, delta, d_min};
  const double cr = (rows - 1) / 2.0;
  const double cc = (cols - 1) / 2.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double d = std::hypot(i - cr, j - cc);
      if (d <= d_min) continue;
      const double w = nu / (1.0 + delta * std::exp(std::min(d, 700.0)));
      out.weights(i, j) = w < 1e-300 ? 0.0 : w;
    }
  }
  return out;
}

MtfResult compute_mtf(const ResponseMap& r, const DistanceWeights& pi) {
  if (!r.values.shape().same_plane(pi.weights.shape())) throw std::invalid_argument("compute_mtf: shape mismatch");
  if (!(r.max_value > 0.0)) throw DegenerateResponse("response maximum is not positive");
  const int rows = r.values.rows();
  const int cols = r.values.cols();
  const RealGrid centered =
      circular_shift(r.values, peak_center(rows) - r.max_row, peak_center(cols) - r.max_col);
  const SubPeakMask psi_mask = detect_subpeaks(centered);

  MtfResult out{RealGrid(rows, cols), 0.0, 0.0};
  double best = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double m = psi_mask(i, j) ? centered(i, j) / r.max_value * pi.weights(i, j) : 0.0;
      out.threat_map(i, j) = m;
      best = std::max(best, m);
    }
  }
  out.mtf = best;
  out.psi = std::clamp(best, 0.0, 1.0);
  return out;
}

double d_min_cells(const MscfConfig& cfg, CellExtent target) {
  if (cfg.d_min_mode == DMinMode::Fixed) return cfg.d_min;
  return 0.5 * std::hypot(static_cast<double>(target.rows), static_cast<double>(target.cols));
}

}  // namespace mscf
