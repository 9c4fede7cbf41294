#include "mscf/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace mscf {
namespace {

constexpr int kPrecisionMax = 50;
constexpr int kSuccessSteps = 50;

template <typename F>
std::vector<double> scored(const SequenceResult& res, F metric) {
  res.validate();
  std::vector<double> out;
  out.reserve(res.predicted.size());
  for (std::size_t i = 0; i < res.predicted.size(); ++i) {
    if (res.truth[i]) out.push_back(metric(res.predicted[i], *res.truth[i]));
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void SequenceResult::validate() const {
  if (predicted.empty()) throw std::invalid_argument("sequence result is empty");
  if (truth.size() != predicted.size()) throw std::invalid_argument("prediction and truth lengths differ");
  if (!elapsed_per_frame.empty() && elapsed_per_frame.size() != predicted.size()) {
    throw std::invalid_argument("timing and prediction lengths differ");
  }
}

double cle(const BoundingBox& a, const BoundingBox& b) { return std::hypot(a.cx() - b.cx(), a.cy() - b.cy()); }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

CurveData precision_curve(const SequenceResult& res) {
  const auto errors = scored(res, [](const BoundingBox& p, const BoundingBox& t) { return cle(p, t); });
  CurveData curve;
  for (int t = 0; t <= kPrecisionMax; ++t) {
    const auto hits = std::count_if(errors.begin(), errors.end(), [t](double e) { return e <= t; });
    curve.thresholds.push_back(t);
    curve.values.push_back(errors.empty() ? 0.0 : static_cast<double>(hits) / errors.size());
  }
  return curve;
}

double precision_at(const CurveData& curve, double threshold) {
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    if (curve.thresholds[i] == threshold) return curve.values[i];
  }
  throw std::invalid_argument("threshold not on the curve grid");
}

SuccessSummary success_auc(const SequenceResult& res) {
  const auto overlaps = scored(res, [](const BoundingBox& p, const BoundingBox& t) { return iou(p, t); });
  SuccessSummary out;
  double total = 0.0;
  for (int k = 0; k <= kSuccessSteps; ++k) {
    const double t = k / static_cast<double>(kSuccessSteps);
    const auto hits = std::count_if(overlaps.begin(), overlaps.end(), [t](double o) { return o > t; });
    const double v = overlaps.empty() ? 0.0 : static_cast<double>(hits) / overlaps.size();
    out.curve.thresholds.push_back(t);
    out.curve.values.push_back(v);
    total += v;
  }
  out.auc = total / (kSuccessSteps + 1);
  return out;
}

double fps(const SequenceResult& res) {
  double total = 0.0;
  for (double e : res.elapsed_per_frame) total += e;
  return total > 0.0 ? static_cast<double>(res.elapsed_per_frame.size()) / total : 0.0;
}

std::size_t excluded_frames(const SequenceResult& res) {
  return static_cast<std::size_t>(std::count(res.truth.begin(), res.truth.end(), std::nullopt));
}

SequenceMetrics summarize(const std::string& name, const SequenceResult& res) {
  SequenceMetrics m;
  m.name = name;
  m.precision20 = precision_at(precision_curve(res));
  m.auc = success_auc(res).auc;
  m.fps = fps(res);
  const auto errors = scored(res, [](const BoundingBox& p, const BoundingBox& t) { return cle(p, t); });
  double sum = 0.0;
  for (double e : errors) sum += e;
  m.mean_cle = errors.empty() ? 0.0 : sum / errors.size();
  m.frames = res.predicted.size();
  m.excluded = excluded_frames(res);
  return m;
}

SequenceMetrics aggregate(const std::vector<SequenceMetrics>& runs) {
  SequenceMetrics m;
  m.name = "mean";
  if (runs.empty()) return m;
  for (const auto& r : runs) {
    m.precision20 += r.precision20;
    m.auc += r.auc;
    m.fps += r.fps;
    m.mean_cle += r.mean_cle;
    m.frames += r.frames;
    m.excluded += r.excluded;
  }
  const double n = static_cast<double>(runs.size());
  m.precision20 /= n;
  m.auc /= n;
  m.fps /= n;
  m.mean_cle /= n;
  return m;
}

std::string curve_csv(const CurveData& curve) {
  std::string out = "threshold,value\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    out += fmt(curve.thresholds[i]) + "," + fmt(curve.values[i]) + "\n";
  }
  return out;
}

}  // namespace mscf
