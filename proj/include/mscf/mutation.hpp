#pragma once

#include "mscf/core.hpp"

namespace mscf {

struct ResponseMap {
  RealGrid values;
  double max_value = 0.0;
  int max_row = 0;
  int max_col = 0;

  /// Locates the global maximum (first in row-major order on ties).
  /// Throws std::invalid_argument if any value is non-finite.
  static ResponseMap from_grid(RealGrid values);
};

/// Binary sub-peak indicator; 1 marks a strict 8-neighbour maximum (wrap-around).
using SubPeakMask = Tensor<unsigned char>;

struct DistanceWeights {
  RealGrid weights;
  double nu = 1.0;
  double delta = 0.01;
  double d_min = 0.0;
};

struct MtfResult {
  RealGrid threat_map;
  double mtf = 0.0;
  double psi = 0.0;
};

SubPeakMask detect_subpeaks(const RealGrid& r);

/// weights(i,j) = nu / (1 + delta * exp(d)) for d > d_min, else 0, with d the
/// Euclidean distance in cells to ((rows-1)/2, (cols-1)/2).
DistanceWeights build_pi(int rows, int cols, double nu, double delta, double d_min);

/// Centers the main peak, then M = (R . Psi / R_max) . Pi; mtf = max(M).
/// Throws DegenerateResponse when R_max <= 0.
MtfResult compute_mtf(const ResponseMap& r, const DistanceWeights& pi);

/// Cell the main peak is moved to before weighting.
inline int peak_center(int n) { return n / 2; }

/// Center-exclusion radius for the configured rule.
double d_min_cells(const MscfConfig& cfg, CellExtent target);

}  // namespace mscf
