#include "mscf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace mscf {
namespace {

// FFTW's planner is not reentrant; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct TransformPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double scale = 1.0;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

TransformPlan::TransformPlan(int rows, int cols) : rows_(rows), cols_(cols), impl_(std::make_shared<Impl>()) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("transform size must be >= 1");
  std::vector<Complex> scratch(static_cast<std::size_t>(rows) * cols);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  impl_->fwd = fftw_plan_dft_2d(rows, cols, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
  impl_->inv = fftw_plan_dft_2d(rows, cols, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (!impl_->fwd || !impl_->inv) throw std::runtime_error("FFTW planning failed");
  impl_->scale = 1.0 / std::sqrt(static_cast<double>(rows) * cols);
}

void TransformPlan::forward(std::span<Complex> plane) const {
  fftw_execute_dft(impl_->fwd, as_fftw(plane.data()), as_fftw(plane.data()));
  for (auto& v : plane) v *= impl_->scale;
}

void TransformPlan::inverse(std::span<Complex> plane) const {
  fftw_execute_dft(impl_->inv, as_fftw(plane.data()), as_fftw(plane.data()));
  for (auto& v : plane) v *= impl_->scale;
}

std::shared_ptr<const TransformPlan> TransformPlan::get(int rows, int cols) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const TransformPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{rows, cols}];
  if (!slot) slot = std::make_shared<const TransformPlan>(rows, cols);
  return slot;
}

SpectrumTensor dft2(const FeatureTensor& t) {
  SpectrumTensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t.data()[i])) throw std::invalid_argument("dft2: non-finite input");
    out.data()[i] = t.data()[i];
  }
  const auto plan = TransformPlan::get(t.rows(), t.cols());
  for (int ch = 0; ch < t.channels(); ++ch) plan->forward(out.channel(ch));
  return out;
}

SpectrumTensor dft2(const SpectrumTensor& t) {
  SpectrumTensor out = t;
  for (const auto& v : out.data()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("dft2: non-finite input");
  }
  const auto plan = TransformPlan::get(t.rows(), t.cols());
  for (int ch = 0; ch < t.channels(); ++ch) plan->forward(out.channel(ch));
  return out;
}

SpectrumTensor idft2_complex(const SpectrumTensor& s) {
  SpectrumTensor out = s;
  const auto plan = TransformPlan::get(s.rows(), s.cols());
  for (int ch = 0; ch < s.channels(); ++ch) plan->inverse(out.channel(ch));
  return out;
}

FeatureTensor idft2(const SpectrumTensor& s, double* imag_residue) {
  const SpectrumTensor full = idft2_complex(s);
  FeatureTensor out(s.shape());
  double residue = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    out.data()[i] = full.data()[i].real();
    residue = std::max(residue, std::abs(full.data()[i].imag()));
  }
  if (imag_residue) *imag_residue = residue;
  return out;
}

RealGrid correlate(const SpectrumTensor& z_hat, const SpectrumTensor& g_hat) {
  if (!(z_hat.shape() == g_hat.shape())) throw std::invalid_argument("correlate: shape mismatch");
  SpectrumTensor acc(z_hat.rows(), z_hat.cols(), 1);
  auto sum = acc.channel(0);
  for (int ch = 0; ch < z_hat.channels(); ++ch) {
    const auto z = z_hat.channel(ch);
    const auto g = g_hat.channel(ch);
    for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += z[n] * g[n];
  }
  const double root_t = std::sqrt(static_cast<double>(z_hat.shape().plane()));
  for (auto& v : sum) v *= root_t;
  return idft2(acc);
}

double energy(const FeatureTensor& t) {
  double e = 0.0;
  for (double v : t.data()) e += v * v;
  return e;
}

double energy(const SpectrumTensor& t) {
  double e = 0.0;
  for (const auto& v : t.data()) e += std::norm(v);
  return e;
}

}  // namespace mscf
