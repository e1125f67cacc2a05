#include "svmch/sav_cn.hpp"

#include <cmath>

#include "svmch/errors.hpp"
#include "svmch/predictor.hpp"

namespace svmch {

SavState sav_init(const GradFlowModel& model, RealField phi, double c0) {
  const double e1 = model.bulk_energy(phi);
  if (!(e1 + c0 > 0.0)) throw ConfigError("SAV: E1 + C0 must be positive");
  const double r = std::sqrt(e1 + c0);
  return SavState{std::move(phi), r, c0};
}

double sav_modified_energy(const GradFlowModel& model, const SavState& state) {
  return model.gradient_energy(fft_forward(state.phi)) + state.r * state.r - state.c0;
}

SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const RealField& phi_nm1, double tau) {
  return sav_step(model, state, phi_nm1, cn_symbols(model, tau));
}

SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const RealField& phi_nm1,
                       const CrankNicolsonSymbols& cn) {
  return sav_step(model, state, fft_forward(state.phi), phi_nm1, cn);
}

SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const SpectralField& phi_n_hat,
                       const RealField& phi_nm1, const CrankNicolsonSymbols& cn) {
  const double tau = cn.tau;
  const RealField& phi_n = state.phi;
  const RealField phi_bar = extrapolate(phi_n, phi_nm1);
  const double e1_bar = model.bulk_energy(phi_bar);
  if (!(e1_bar + state.c0 > 0.0)) throw StepFailure(StepFailureKind::NonFinite, "SAV: E1 + C0 <= 0");

  RealField b = model.bulk_force(phi_bar);
  b *= 1.0 / std::sqrt(e1_bar + state.c0);

  const SpectralField b_hat = fft_forward(b);
  const SpectralField mb_hat = apply_symbol(b_hat, model.M_symbol());
  const double b_phi_n = inner_product(b, phi_n);

  // s1 = A^{-1}[(1 - tau/2 ML) phi^n - tau r^n Mb + tau/4 (b, phi^n) Mb],  s2 = A^{-1} Mb
  const double mb_coeff = -tau * state.r + 0.25 * tau * b_phi_n;
  auto s1_hat = SpectralField::uninitialized(model.grid_ptr());
  auto s2_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < s1_hat.size(); ++k) {
    s1_hat[k] = (cn.explicit_part[k] * phi_n_hat[k] + mb_coeff * mb_hat[k]) * cn.implicit_inverse[k];
    s2_hat[k] = mb_hat[k] * cn.implicit_inverse[k];
  }
  RealField s1 = fft_inverse(s1_hat);
  const RealField s2 = fft_inverse(s2_hat);

  // (b, s2)_h >= 0, so the denominator is >= 1.
  const double b_phi_next = inner_product(b, s1) / (1.0 + 0.25 * tau * inner_product(b, s2));
  s1.axpy(-0.25 * tau * b_phi_next, s2);
  RealField& phi_next = s1;
  SpectralField& phi_next_hat = s1_hat;
  for (std::size_t k = 0; k < s1_hat.size(); ++k) s1_hat[k] -= 0.25 * tau * b_phi_next * s2_hat[k];
  if (!phi_next.all_finite()) throw StepFailure(StepFailureKind::NonFinite, "SAV update produced NaN/Inf");

  const double r_next = state.r + 0.5 * (b_phi_next - b_phi_n);

  // mu_sav = L phi^{n+1/2} + b (r^{n+1} + r^n) / 2
  const auto& l = model.L_symbol();
  const double r_mid = 0.5 * (r_next + state.r);
  auto mu_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < mu_hat.size(); ++k) {
    mu_hat[k] = 0.5 * l[k] * (phi_next_hat[k] + phi_n_hat[k]) + r_mid * b_hat[k];
  }

  SavStepResult out{SavState{std::move(phi_next), r_next, state.c0}, std::move(phi_next_hat)};
  out.modified_energy = model.gradient_energy(out.phi_next_hat) + r_next * r_next - state.c0;
  out.dissipation = model.dissipation_rate(mu_hat);
  return out;
}

}  // namespace svmch
