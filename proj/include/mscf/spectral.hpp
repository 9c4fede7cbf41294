#pragma once

#include <memory>

#include "mscf/core.hpp"

namespace mscf {

/// Unitary 2-D DFT for one grid size. Immutable once built and safe to share
/// between threads; execution goes through FFTW's new-array interface.
class TransformPlan {
 public:
  TransformPlan(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// In-place unitary transforms of one rows*cols plane.
  void forward(std::span<Complex> plane) const;
  void inverse(std::span<Complex> plane) const;

  /// Plan from a process-wide cache keyed by size.
  static std::shared_ptr<const TransformPlan> get(int rows, int cols);

 private:
  struct Impl;
  int rows_;
  int cols_;
  std::shared_ptr<Impl> impl_;
};

/// Per-channel unitary DFT. Throws std::invalid_argument on non-finite input.
SpectrumTensor dft2(const FeatureTensor& t);
SpectrumTensor dft2(const SpectrumTensor& t);

/// Inverse of dft2, real part. When `imag_residue` is non-null it receives the
/// largest |imaginary part| seen.
FeatureTensor idft2(const SpectrumTensor& s, double* imag_residue = nullptr);
SpectrumTensor idft2_complex(const SpectrumTensor& s);

/// Multi-channel circular response R(tau) = sum_d sum_n z_d(n) g_d(tau - n),
/// evaluated spectrally as sqrt(T) * F^-1 sum_d z_hat_d * g_hat_d for unitary inputs.
RealGrid correlate(const SpectrumTensor& z_hat, const SpectrumTensor& g_hat);

/// Squared Frobenius norm.
double energy(const FeatureTensor& t);
double energy(const SpectrumTensor& t);

}  // namespace mscf
