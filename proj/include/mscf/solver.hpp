#pragma once

#include <optional>

#include "mscf/core.hpp"

namespace mscf {

// Joint filter/label training by three-block ADMM.
//
// Inside the solver every spectrum lives in the constraint frame
// g_hat = sqrt(T) * F * P^T h, i.e. x_hat, r_hat, omega_hat are sqrt(T) times
// their unitary DFTs. train() converts at the boundary, so callers only ever
// see unitary spectra. The modeled response of a filter is sum_d x_hat_d * g_hat_d
// (no conjugate), matching correlate().

struct AdmmState {
  SpectrumTensor g_hat;
  FeatureTensor h;  // zero outside the centered target support
  SpectrumTensor zeta_hat;
  ComplexGrid r_hat;
  double mu = 0.0;
  int iter = 0;
};

/// Fixed data of one training call, constraint frame.
struct AdmmProblem {
  SpectrumTensor x_hat;
  ComplexGrid omega_hat;
  ComplexGrid r_prev_hat;
  double psi = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double phi = 0.0;
  CellExtent target_cells;
};

/// Unitary spectra, as produced by dft2.
struct TrainInputs {
  SpectrumTensor x_hat;
  ComplexGrid omega_hat;
  ComplexGrid r_prev_hat;
  double psi = 0.0;
  MscfConfig cfg;
  CellExtent target_cells;
  std::optional<SpectrumTensor> g_init;  // previous filter; zero when absent
  std::optional<ComplexGrid> r_init;     // previous label; omega_hat when absent
};

struct TrainResult {
  SpectrumTensor g_hat;  // unitary spectrum of the filter
  ComplexGrid r_hat;     // unitary spectrum of the learned label
};

/// h = (lambda1/T + mu)^-1 (mu g + zeta) restricted to the target support, with
/// g, zeta the spatial signals behind g_hat, zeta_hat (sqrt(T) removed).
FeatureTensor solve_h(const SpectrumTensor& g_hat, const SpectrumTensor& zeta_hat, double mu, double lambda1,
                      CellExtent target_cells);

/// sqrt(T) * F * P^T h per channel.
SpectrumTensor filter_spectrum(const FeatureTensor& h);

/// Per-pixel Sherman-Morrison solution of
///   min (1/2T)|r_hat - x_hat^T g|^2 + (mu/2)|g - h_hat + zeta_hat/mu|^2.
SpectrumTensor solve_g(const SpectrumTensor& x_hat, const ComplexGrid& r_hat, const FeatureTensor& h,
                       const SpectrumTensor& zeta_hat, double mu);

/// sum_d x_hat_d * g_hat_d
ComplexGrid modeled_response(const SpectrumTensor& x_hat, const SpectrumTensor& g_hat);

/// Closed-form label update, weights (1 + psi^2) lambda2 and (1 - psi^2) phi.
ComplexGrid solve_r(const SpectrumTensor& x_hat, const SpectrumTensor& g_hat, const ComplexGrid& omega_hat,
                    const ComplexGrid& r_prev_hat, double psi, double lambda2, double phi);

/// mu' = min(mu_max, beta mu); zeta_hat += mu' (g_new - h_hat_new); stores g_new, h_new.
AdmmState update_multiplier(AdmmState state, const SpectrumTensor& g_new, const FeatureTensor& h_new, double beta,
                            double mu_max);

class AdmmSolver {
 public:
  AdmmSolver(AdmmProblem problem, AdmmState initial, double beta, double mu_max);

  /// Scales unitary inputs into the constraint frame and builds the initial state.
  static AdmmSolver from_inputs(const TrainInputs& in);

  /// One round: h, g, r, then multiplier and penalty update.
  void iterate();

  const AdmmState& state() const { return state_; }
  const AdmmProblem& problem() const { return problem_; }

  /// Augmented Lagrangian at the current state.
  double lagrangian() const;
  /// |g_hat - sqrt(T) F P^T h|
  double constraint_residual() const;

 private:
  AdmmProblem problem_;
  AdmmState state_;
  double beta_;
  double mu_max_;
};

/// Augmented Lagrangian of `problem` at `state`, constraint frame.
double augmented_lagrangian(const AdmmProblem& problem, const AdmmState& state);

TrainResult train(const TrainInputs& in);

}  // namespace mscf
