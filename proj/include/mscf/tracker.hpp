#pragma once

#include <memory>
#include <utility>

#include "mscf/core.hpp"
#include "mscf/features.hpp"
#include "mscf/image.hpp"
#include "mscf/label.hpp"
#include "mscf/mutation.hpp"

namespace mscf {

struct FrameReport {
  BoundingBox box;
  double response_max = 0.0;
  double mtf = 0.0;
  bool trained = false;
  bool degenerate = false;  // response unusable; previous box and psi kept
  double elapsed = 0.0;     // seconds
};

/// Search-region geometry, fixed for the whole sequence.
struct SearchGeometry {
  int patch_rows = 0;  // pixels of the resampled patch
  int patch_cols = 0;
  double scale = 1.0;  // source pixels per patch pixel
  GridShape grid;      // feature grid
  CellExtent target_cells;
};

/// Chooses the patch/grid size for a target: padding * size, shrunk uniformly
/// so the feature grid is at most max_grid_cells per side.
SearchGeometry plan_geometry(const BoundingBox& box, const MscfConfig& cfg, const FeatureParams& fp);

struct TrackerState {
  MscfConfig cfg;
  BoundingBox box;
  SpectrumTensor model_hat;  // interpolated feature spectrum
  SpectrumTensor g_hat;      // filter, unitary spectrum
  ComplexGrid r_hat;
  ComplexGrid r_prev_hat;
  double psi = 0.0;
  int frame_index = 0;  // frames consumed so far, including the first
  GridShape grid;
  CellExtent target_cells;

  SearchGeometry geometry;
  FeatureParams features;
  std::shared_ptr<const CnTable> cn;
  RealGrid window;
  DistanceWeights pi;
  GaussianLabel y1;
  CruciformLabel y2;
};

/// Builds the model from the first frame. Pass a color-name table to enable the
/// CN channels; without one the tracker runs on HOG + gray.
TrackerState init(const Image& frame, const BoundingBox& box, const MscfConfig& cfg,
                  std::shared_ptr<const CnTable> cn = nullptr);

/// Processes the next frame: localize, score mutations, and retrain on schedule.
FrameReport track(TrackerState& state, const Image& frame);

/// Argmax of the response as a displacement in pixels (dx, dy); indices past
/// the half grid wrap to negative shifts.
std::pair<double, double> localize(const ResponseMap& r, const GridShape& grid, int cell_size, double patch_scale,
                                   bool subpixel = false);

/// Windowed features of the search region centered at (cx, cy).
FeatureTensor sample_features(const TrackerState& state, const Image& frame, double cx, double cy);

/// model <- (1 - lr) model + lr x
void blend_model(SpectrumTensor& model, const SpectrumTensor& x, double lr);

/// Omega for `psi`, with the label center moved to the origin.
RealGrid origin_label(const TrackerState& state, double psi);

}  // namespace mscf
