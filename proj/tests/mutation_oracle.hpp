#pragma once

#include <algorithm>
#include <cmath>

#include "mscf/core.hpp"

namespace mscf::oracle {

// Direct evaluation of the threat map: recentre the main peak, keep strict
// 8-neighbour maxima other than the main peak, weight by distance.
inline double brute_force_mtf(const RealGrid& r, double nu, double delta, double d_min) {
  const int rows = r.rows(), cols = r.cols();
  int pr = 0, pc = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (r(i, j) > r(pr, pc)) pr = i, pc = j;
  const double rmax = r(pr, pc);
  auto at = [&](int i, int j) {  // value of the recentred map at (i, j)
    const int si = ((i - rows / 2 + pr) % rows + rows) % rows;
    const int sj = ((j - cols / 2 + pc) % cols + cols) % cols;
    return r(si, sj);
  };
  double best = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      bool peak = true;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if ((di || dj) && !(at(i, j) > at(i + di, j + dj))) peak = false;
      if (!peak) continue;
      const double d = std::sqrt(std::pow(i - (rows - 1) / 2.0, 2) + std::pow(j - (cols - 1) / 2.0, 2));
      const double w = d > d_min ? nu / (1.0 + delta * std::exp(d)) : 0.0;
      best = std::max(best, at(i, j) / rmax * w);
    }
  return best;
}

inline RealGrid bump(int rows, int cols, int cr, int cc, double height, double width) {
  RealGrid g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = height * std::exp(-((i - cr) * (i - cr) + (j - cc) * (j - cc)) / width);
  return g;
}

}  // namespace mscf::oracle
