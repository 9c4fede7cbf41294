#include "mscf/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <cmath>
#include <iostream>

#include "mscf/solver.hpp"
#include "mscf/spectral.hpp"

namespace mscf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int unwrap(int idx, int n) { return idx > (n - 1) / 2 ? idx - n : idx; }

// Vertex offset of the parabola through three samples, in [-0.5, 0.5].
double parabolic_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (!(denom < 0.0)) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

BoundingBox clamp_center(const BoundingBox& b, const Image& frame) {
  const double cx = std::clamp(b.cx(), 1.0, std::max(1.0, frame.width() - 1.0));
  const double cy = std::clamp(b.cy(), 1.0, std::max(1.0, frame.height() - 1.0));
  return BoundingBox::from_center(cx, cy, b.w, b.h);
}

void retrain(TrackerState& s, bool first) {
  const SpectrumTensor omega_hat = dft2(origin_label(s, s.psi));
  TrainInputs in{s.model_hat, omega_hat, first ? omega_hat : s.r_prev_hat, s.psi, s.cfg, s.target_cells,
                 std::nullopt, std::nullopt};
  if (!first) {
    in.g_init = s.g_hat;
    in.r_init = s.r_hat;
  }
  TrainResult out = train(in);
  s.g_hat = std::move(out.g_hat);
  s.r_hat = std::move(out.r_hat);
}

}  // namespace

SearchGeometry plan_geometry(const BoundingBox& box, const MscfConfig& cfg, const FeatureParams& fp) {
  if (!box.valid()) throw std::invalid_argument("degenerate box");
  const double cell = fp.cell_size;
  const double region_w = cfg.search_padding * box.w;
  const double region_h = cfg.search_padding * box.h;
  const double max_px = cfg.max_grid_cells * cell;
  SearchGeometry g;
  g.scale = std::max(1.0, std::max(region_w, region_h) / max_px);
  const auto cells = [&](double px) {
    return std::clamp(static_cast<int>(std::lround(px / (g.scale * cell))), 1, cfg.max_grid_cells);
  };
  g.grid = GridShape{cells(region_h), cells(region_w), feature_channels(fp)};
  g.patch_rows = g.grid.rows * fp.cell_size;
  g.patch_cols = g.grid.cols * fp.cell_size;
  g.target_cells = CellExtent{std::clamp(static_cast<int>(std::lround(box.h / (g.scale * cell))), 1, g.grid.rows),
                              std::clamp(static_cast<int>(std::lround(box.w / (g.scale * cell))), 1, g.grid.cols)};
  return g;
}

FeatureTensor sample_features(const TrackerState& s, const Image& frame, double cx, double cy) {
  const auto& g = s.geometry;
  const Image patch =
      sample_region(frame, cx, cy, g.patch_cols * g.scale, g.patch_rows * g.scale, g.patch_rows, g.patch_cols);
  FeatureTensor x = extract_features(patch, s.features, s.cn.get());
  apply_window(x, s.window);
  return x;
}

void blend_model(SpectrumTensor& model, const SpectrumTensor& x, double lr) {
  if (!(model.shape() == x.shape())) throw std::invalid_argument("blend_model: shape mismatch");
  for (std::size_t i = 0; i < model.size(); ++i) model.data()[i] = (1.0 - lr) * model.data()[i] + lr * x.data()[i];
}

RealGrid origin_label(const TrackerState& s, double psi) {
  const IdealLabel omega = ideal_label(s.y1, s.y2, s.cfg.theta, psi);
  return circular_shift(omega.values, -label_center(s.grid.rows), -label_center(s.grid.cols));
}

std::pair<double, double> localize(const ResponseMap& r, const GridShape& grid, int cell_size, double patch_scale,
                                   bool subpixel) {
  double dr = unwrap(r.max_row, grid.rows);
  double dc = unwrap(r.max_col, grid.cols);
  if (subpixel) {
    const auto& v = r.values;
    const int up = (r.max_row + grid.rows - 1) % grid.rows;
    const int down = (r.max_row + 1) % grid.rows;
    const int left = (r.max_col + grid.cols - 1) % grid.cols;
    const int right = (r.max_col + 1) % grid.cols;
    if (grid.rows >= 3) dr += parabolic_offset(v(up, r.max_col), r.max_value, v(down, r.max_col));
    if (grid.cols >= 3) dc += parabolic_offset(v(r.max_row, left), r.max_value, v(r.max_row, right));
  }
  const double px = cell_size * patch_scale;
  return {dc * px, dr * px};
}

TrackerState init(const Image& frame, const BoundingBox& box, const MscfConfig& cfg,
                  std::shared_ptr<const CnTable> cn) {
  cfg.validate();
  if (!box.valid()) throw std::invalid_argument("degenerate box");
  if (box.cx() < 0 || box.cy() < 0 || box.cx() > frame.width() || box.cy() > frame.height()) {
    throw std::invalid_argument("box center lies outside the frame");
  }
  TrackerState s;
  s.cfg = cfg;
  s.features = FeatureParams{cfg.cell_size, 9, cfg.use_hog, cfg.use_cn && cn != nullptr, cfg.use_gray};
  if (cfg.use_cn && !cn) {
    std::cerr << "warning: no color-name table available; tracking with HOG and gray features\n";
  }
  if (feature_channels(s.features) == 0) throw ConfigError("no usable feature type enabled");
  s.cn = std::move(cn);
  s.geometry = plan_geometry(box, cfg, s.features);
  s.grid = s.geometry.grid;
  s.target_cells = s.geometry.target_cells;
  s.window = hann_window(s.grid.rows, s.grid.cols);
  s.pi = build_pi(s.grid.rows, s.grid.cols, cfg.nu, cfg.delta, d_min_cells(cfg, s.target_cells));
  s.y1 = gaussian_label(s.grid.rows, s.grid.cols, s.target_cells, cfg.output_sigma_factor);
  s.y2 = cruciform_label(s.grid.rows, s.grid.cols, s.target_cells, cfg.pedestal_ratio, cfg.pedestal_altitude);
  s.box = box;
  s.psi = 0.0;

  s.model_hat = dft2(sample_features(s, frame, box.cx(), box.cy()));
  retrain(s, true);
  s.r_prev_hat = s.r_hat;
  s.frame_index = 1;
  return s;
}

FrameReport track(TrackerState& s, const Image& frame) {
  const auto start = Clock::now();
  if (s.frame_index < 1) throw std::logic_error("tracker used before init");
  ++s.frame_index;
  FrameReport report;

  const SpectrumTensor z_hat = dft2(sample_features(s, frame, s.box.cx(), s.box.cy()));
  RealGrid response = correlate(z_hat, s.g_hat);
  std::optional<ResponseMap> r;
  try {
    r = ResponseMap::from_grid(std::move(response));
  } catch (const std::invalid_argument&) {
    r.reset();
  }

  if (r && r->max_value > 0.0) {
    report.response_max = r->max_value;
    const auto [dx, dy] = localize(*r, s.grid, s.cfg.cell_size, s.geometry.scale, s.cfg.subpixel);
    s.box = clamp_center(BoundingBox{s.box.x + dx, s.box.y + dy, s.box.w, s.box.h}, frame);
    const MtfResult mtf = compute_mtf(*r, s.pi);
    report.mtf = mtf.mtf;
    s.psi = s.cfg.mtf_feedback ? mtf.psi : 0.0;
  } else {
    report.degenerate = true;
    if (r) report.response_max = r->max_value;
  }

  if (s.frame_index % s.cfg.train_interval == 0) {
    const SpectrumTensor x_hat = dft2(sample_features(s, frame, s.box.cx(), s.box.cy()));
    blend_model(s.model_hat, x_hat, s.cfg.learning_rate);
    s.r_prev_hat = s.r_hat;
    retrain(s, false);
    report.trained = true;
  }

  report.box = s.box;
  report.elapsed = seconds_since(start);
  return report;
}

}  // namespace mscf
