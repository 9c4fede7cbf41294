#include "mscf/solver.hpp"

#include <cmath>

#include "mscf/spectral.hpp"

namespace mscf {
namespace {

double root_t(const GridShape& s) { return std::sqrt(static_cast<double>(s.plane())); }

template <typename T>
Tensor<T> scaled(Tensor<T> t, double s) {
  for (auto& v : t.data()) v *= s;
  return t;
}

void require_plane(const GridShape& a, const GridShape& b, const char* what) {
  if (!a.same_plane(b)) throw std::invalid_argument(std::string(what) + ": grid shape mismatch");
}

}  // namespace

FeatureTensor solve_h(const SpectrumTensor& g_hat, const SpectrumTensor& zeta_hat, double mu, double lambda1,
                      CellExtent target_cells) {
  if (!(g_hat.shape() == zeta_hat.shape())) throw std::invalid_argument("solve_h: shape mismatch");
  if (!(mu > 0)) throw std::invalid_argument("solve_h: mu must be > 0");
  const double t = static_cast<double>(g_hat.shape().plane());
  const double inv_rt = 1.0 / std::sqrt(t);
  const FeatureTensor g = idft2(g_hat);
  const FeatureTensor zeta = idft2(zeta_hat);
  FeatureTensor h(g.shape());
  const double gain = 1.0 / (lambda1 / t + mu);
  for (std::size_t i = 0; i < h.size(); ++i) h.data()[i] = gain * (mu * g.data()[i] + zeta.data()[i]) * inv_rt;
  return crop_mask_apply(h, target_cells.rows, target_cells.cols);
}

SpectrumTensor filter_spectrum(const FeatureTensor& h) { return scaled(dft2(h), root_t(h.shape())); }

SpectrumTensor solve_g(const SpectrumTensor& x_hat, const ComplexGrid& r_hat, const FeatureTensor& h,
                       const SpectrumTensor& zeta_hat, double mu) {
  if (!(x_hat.shape() == h.shape()) || !(x_hat.shape() == zeta_hat.shape())) {
    throw std::invalid_argument("solve_g: shape mismatch");
  }
  require_plane(x_hat.shape(), r_hat.shape(), "solve_g");
  if (!(mu > 0)) throw std::invalid_argument("solve_g: mu must be > 0");

  const SpectrumTensor h_hat = filter_spectrum(h);
  const int channels = x_hat.channels();
  const std::size_t plane = x_hat.shape().plane();
  const double t = static_cast<double>(plane);
  const double mu_t = mu * t;
  SpectrumTensor g_hat(x_hat.shape());

  for (std::size_t n = 0; n < plane; ++n) {
    // s_x = x^T conj(x), s_zeta = x^T zeta, s_h = x^T h_hat
    double s_x = 0.0;
    Complex s_zeta{};
    Complex s_h{};
    for (int d = 0; d < channels; ++d) {
      const Complex x = x_hat.channel(d)[n];
      s_x += std::norm(x);
      s_zeta += x * zeta_hat.channel(d)[n];
      s_h += x * h_hat.channel(d)[n];
    }
    const Complex r = r_hat.channel(0)[n];
    const double b = s_x + mu_t;
    const Complex correction = (r * s_x - t * s_zeta + mu_t * s_h) / (mu_t * b);
    for (int d = 0; d < channels; ++d) {
      const Complex xc = std::conj(x_hat.channel(d)[n]);
      const Complex rho = xc * r + mu_t * h_hat.channel(d)[n] - t * zeta_hat.channel(d)[n];
      g_hat.channel(d)[n] = rho / mu_t - xc * correction;
    }
  }
  return g_hat;
}

ComplexGrid modeled_response(const SpectrumTensor& x_hat, const SpectrumTensor& g_hat) {
  if (!(x_hat.shape() == g_hat.shape())) throw std::invalid_argument("modeled_response: shape mismatch");
  ComplexGrid out(x_hat.rows(), x_hat.cols());
  auto acc = out.channel(0);
  for (int d = 0; d < x_hat.channels(); ++d) {
    const auto x = x_hat.channel(d);
    const auto g = g_hat.channel(d);
    for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += x[n] * g[n];
  }
  return out;
}

ComplexGrid solve_r(const SpectrumTensor& x_hat, const SpectrumTensor& g_hat, const ComplexGrid& omega_hat,
                    const ComplexGrid& r_prev_hat, double psi, double lambda2, double phi) {
  if (!(psi >= 0.0 && psi <= 1.0)) throw std::invalid_argument("solve_r: psi must lie in [0,1]");
  require_plane(x_hat.shape(), omega_hat.shape(), "solve_r");
  require_plane(x_hat.shape(), r_prev_hat.shape(), "solve_r");
  const double w_ideal = lambda2 * (1.0 + psi * psi);
  const double w_prev = phi * (1.0 - psi * psi);
  const double denom = 1.0 + w_ideal + w_prev;
  ComplexGrid r = modeled_response(x_hat, g_hat);
  auto dst = r.channel(0);
  const auto omega = omega_hat.channel(0);
  const auto prev = r_prev_hat.channel(0);
  for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = (dst[n] + w_ideal * omega[n] + w_prev * prev[n]) / denom;
  return r;
}

AdmmState update_multiplier(AdmmState state, const SpectrumTensor& g_new, const FeatureTensor& h_new, double beta,
                            double mu_max) {
  const SpectrumTensor h_hat = filter_spectrum(h_new);
  const double mu_next = std::min(mu_max, beta * state.mu);
  for (std::size_t i = 0; i < state.zeta_hat.size(); ++i) {
    state.zeta_hat.data()[i] += mu_next * (g_new.data()[i] - h_hat.data()[i]);
  }
  state.g_hat = g_new;
  state.h = h_new;
  state.mu = mu_next;
  ++state.iter;
  return state;
}

AdmmSolver::AdmmSolver(AdmmProblem problem, AdmmState initial, double beta, double mu_max)
    : problem_(std::move(problem)), state_(std::move(initial)), beta_(beta), mu_max_(mu_max) {
  const GridShape& s = problem_.x_hat.shape();
  if (!(state_.g_hat.shape() == s) || !(state_.zeta_hat.shape() == s) || !(state_.h.shape() == s)) {
    throw std::invalid_argument("AdmmSolver: state shape does not match features");
  }
  require_plane(s, problem_.omega_hat.shape(), "AdmmSolver");
  require_plane(s, problem_.r_prev_hat.shape(), "AdmmSolver");
  require_plane(s, state_.r_hat.shape(), "AdmmSolver");
  if (problem_.target_cells.rows > s.rows || problem_.target_cells.cols > s.cols) {
    throw std::invalid_argument("AdmmSolver: target support exceeds grid");
  }
}

AdmmSolver AdmmSolver::from_inputs(const TrainInputs& in) {
  in.cfg.validate();
  const GridShape& s = in.x_hat.shape();
  const double rt = root_t(s);
  AdmmProblem problem{scaled(in.x_hat, rt),
                      scaled(in.omega_hat, rt),
                      scaled(in.r_prev_hat, rt),
                      in.psi,
                      in.cfg.lambda1,
                      in.cfg.lambda2,
                      in.cfg.phi,
                      in.target_cells};
  AdmmState state;
  state.g_hat = in.g_init ? scaled(*in.g_init, rt) : SpectrumTensor(s);
  state.zeta_hat = SpectrumTensor(s);
  state.r_hat = in.r_init ? scaled(*in.r_init, rt) : problem.omega_hat;
  state.mu = in.cfg.mu0;
  state.iter = 0;
  state.h = crop_mask_apply(scaled(idft2(state.g_hat), 1.0 / rt), in.target_cells.rows, in.target_cells.cols);
  return AdmmSolver(std::move(problem), std::move(state), in.cfg.beta, in.cfg.mu_max);
}

void AdmmSolver::iterate() {
  const auto& p = problem_;
  FeatureTensor h = solve_h(state_.g_hat, state_.zeta_hat, state_.mu, p.lambda1, p.target_cells);
  SpectrumTensor g = solve_g(p.x_hat, state_.r_hat, h, state_.zeta_hat, state_.mu);
  state_.r_hat = solve_r(p.x_hat, g, p.omega_hat, p.r_prev_hat, p.psi, p.lambda2, p.phi);
  state_ = update_multiplier(std::move(state_), g, h, beta_, mu_max_);
}

double AdmmSolver::lagrangian() const { return augmented_lagrangian(problem_, state_); }

double AdmmSolver::constraint_residual() const {
  const SpectrumTensor h_hat = filter_spectrum(state_.h);
  double e = 0.0;
  for (std::size_t i = 0; i < h_hat.size(); ++i) e += std::norm(state_.g_hat.data()[i] - h_hat.data()[i]);
  return std::sqrt(e);
}

double augmented_lagrangian(const AdmmProblem& p, const AdmmState& s) {
  const double t = static_cast<double>(p.x_hat.shape().plane());
  const double w_ideal = p.lambda2 * (1.0 + p.psi * p.psi);
  const double w_prev = p.phi * (1.0 - p.psi * p.psi);
  const ComplexGrid model = modeled_response(p.x_hat, s.g_hat);
  double data = 0.0;
  double ideal = 0.0;
  double prev = 0.0;
  for (std::size_t n = 0; n < model.size(); ++n) {
    const Complex r = s.r_hat.data()[n];
    data += std::norm(r - model.data()[n]);
    ideal += std::norm(p.omega_hat.data()[n] - r);
    prev += std::norm(r - p.r_prev_hat.data()[n]);
  }
  const SpectrumTensor h_hat = filter_spectrum(s.h);
  double augmented = 0.0;
  for (std::size_t i = 0; i < h_hat.size(); ++i) {
    augmented += std::norm(s.g_hat.data()[i] - h_hat.data()[i] + s.zeta_hat.data()[i] / s.mu);
  }
  return data / (2.0 * t) + 0.5 * p.lambda1 * energy(s.h) + w_ideal / (2.0 * t) * ideal + w_prev / (2.0 * t) * prev +
         0.5 * s.mu * augmented;
}

TrainResult train(const TrainInputs& in) {
  AdmmSolver solver = AdmmSolver::from_inputs(in);
  for (int i = 0; i < in.cfg.admm_iters; ++i) solver.iterate();
  const double inv_rt = 1.0 / root_t(in.x_hat.shape());
  return {scaled(solver.state().g_hat, inv_rt), scaled(solver.state().r_hat, inv_rt)};
}

}  // namespace mscf
