#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mscf/core.hpp"

namespace mscf {

/// One sequence run. A missing truth entry marks a frame without a visible
/// target; such frames are excluded from every metric.
struct SequenceResult {
  std::vector<BoundingBox> predicted;
  std::vector<std::optional<BoundingBox>> truth;
  std::vector<double> elapsed_per_frame;

  /// Throws std::invalid_argument on length mismatch or empty input.
  void validate() const;
};

struct CurveData {
  std::vector<double> thresholds;
  std::vector<double> values;
};

double cle(const BoundingBox& a, const BoundingBox& b);
double iou(const BoundingBox& a, const BoundingBox& b);

/// Thresholds 0..50 px (step 1); value = fraction of scored frames with CLE <= t.
CurveData precision_curve(const SequenceResult& res);
/// Value of the precision curve at 20 px.
double precision_at(const CurveData& curve, double threshold = 20.0);

struct SuccessSummary {
  CurveData curve;
  double auc = 0.0;
};

/// Thresholds 0..1 (step 0.02, 51 points); value = fraction with IoU > t; auc = mean value.
SuccessSummary success_auc(const SequenceResult& res);

/// frames / total elapsed; 0 when no time was recorded.
double fps(const SequenceResult& res);

/// Number of frames skipped because the truth is absent.
std::size_t excluded_frames(const SequenceResult& res);

struct SequenceMetrics {
  std::string name;
  double precision20 = 0.0;
  double auc = 0.0;
  double fps = 0.0;
  double mean_cle = 0.0;
  std::size_t frames = 0;
  std::size_t excluded = 0;
};

SequenceMetrics summarize(const std::string& name, const SequenceResult& res);

/// Arithmetic mean of per-sequence precision20, auc, fps and mean_cle.
SequenceMetrics aggregate(const std::vector<SequenceMetrics>& runs);

/// "threshold,value" lines.
std::string curve_csv(const CurveData& curve);

}  // namespace mscf
