#include "svmch/predictor.hpp"

namespace svmch {

RealField extrapolate(const RealField& phi_n, const RealField& phi_nm1) {
  require_same_grid(phi_n.grid(), phi_nm1.grid(), "extrapolate");
  auto out = RealField::uninitialized(phi_n.grid_ptr());
  const auto a = phi_n.values();
  const auto b = phi_nm1.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < a.size(); ++k) dst[k] = 0.5 * (3.0 * a[k] - b[k]);
  return out;
}

PredictorOutput predict(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1, double tau) {
  return predict(model, phi_n, fft_forward(phi_n), phi_nm1, cn_symbols(model, tau));
}

PredictorOutput predict(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                        const RealField& phi_nm1, const CrankNicolsonSymbols& cn, std::optional<double> energy_n) {
  const double tau = cn.tau;
  const auto& m = model.M_symbol();
  const auto& l = model.L_symbol();
  const SpectralField force_bar_hat = fft_forward(model.bulk_force(extrapolate(phi_n, phi_nm1)));

  // (1 + tau/2 ML) phi_tilde = phi^n - tau/2 M f'(phi_bar)
  auto tilde_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < tilde_hat.size(); ++k) {
    tilde_hat[k] = (phi_n_hat[k] - 0.5 * tau * m[k] * force_bar_hat[k]) * cn.implicit_inverse[k];
  }
  RealField phi_tilde = fft_inverse(tilde_hat);

  // f' is re-evaluated at phi_tilde here, not at phi_bar.
  SpectralField force_tilde_hat = fft_forward(model.bulk_force(phi_tilde));
  auto mu_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < mu_hat.size(); ++k) mu_hat[k] = l[k] * tilde_hat[k] + force_tilde_hat[k];

  const double diss = model.dissipation_rate(mu_hat);
  const double e_n = energy_n ? *energy_n : model.free_energy(phi_n, phi_n_hat);
  return PredictorOutput{std::move(phi_tilde),       std::move(tilde_hat), std::move(mu_hat),
                         std::move(force_tilde_hat), e_n - tau * diss,     diss,
                         e_n};
}

}  // namespace svmch
