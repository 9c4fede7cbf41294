#pragma once

#include "mscf/core.hpp"

namespace mscf {

// All labels are centered on cell (rows/2, cols/2); the tracker shifts that
// cell to the origin before transforming.

struct GaussianLabel {
  RealGrid values;
  double sigma = 1.0;  // cells
};

struct CruciformLabel {
  RealGrid values;
  int bar_width_cells = 0;   // thickness of the vertical bar
  int bar_height_cells = 0;  // thickness of the horizontal bar
  int arm_len_rows = 0;      // length of the vertical bar
  int arm_len_cols = 0;      // length of the horizontal bar
  double altitude = 0.0;
};

struct IdealLabel {
  RealGrid values;
  double theta = 0.0;
  double psi_used = 0.0;
};

inline int label_center(int n) { return n / 2; }

/// First index of a bar of length `len` centered on label_center(n).
inline int bar_start(int n, int len) { return label_center(n) - len / 2; }

GaussianLabel gaussian_label(int rows, int cols, CellExtent target, double sigma_factor);

/// Cross-shaped plateau: a target-thick horizontal bar ratio*cols_t long and a
/// target-thick vertical bar ratio*rows_t long, both clipped to the grid.
CruciformLabel cruciform_label(int rows, int cols, CellExtent target, double ratio, double base_altitude);

/// Omega = y1 + (1 - theta * psi) * y2. Throws std::invalid_argument unless
/// psi in [0,1] and theta * psi <= 1.
IdealLabel ideal_label(const GaussianLabel& y1, const CruciformLabel& y2, double theta, double psi);

}  // namespace mscf
