#include "svmch/svm_integrator.hpp"

#include <algorithm>
#include <cmath>

#include "svmch/errors.hpp"
#include "svmch/ficn.hpp"

namespace svmch {

const char* to_string(SvmVariant v) { return v == SvmVariant::SvmI ? "svm1" : "svm2"; }

namespace {

SpectralField direction_hat(const GradFlowModel& model, SvmVariant variant, const SpectralField& force_hat,
                            const SpectralField& mu_hat) {
  if (variant == SvmVariant::SvmI) return apply_symbol(force_hat, model.M_symbol());
  SpectralField g = apply_symbol(mu_hat, model.M_symbol());
  g *= -1.0;
  return g;
}

}  // namespace

RealField supplementary_direction(const GradFlowModel& model, SvmVariant variant, const RealField& phi) {
  const SpectralField phi_k = fft_forward(phi);
  const SpectralField force_hat = fft_forward(model.bulk_force(phi));
  SpectralField mu_hat = apply_symbol(phi_k, model.L_symbol());
  for (std::size_t k = 0; k < mu_hat.size(); ++k) mu_hat[k] += force_hat[k];
  return fft_inverse(direction_hat(model, variant, force_hat, mu_hat));
}

CorrectorFields corrector_fields(const GradFlowModel& model, const RealField& phi_n, const PredictorOutput& pred,
                                 SvmVariant variant, double tau) {
  return corrector_fields(model, fft_forward(phi_n), pred, variant, cn_symbols(model, tau));
}

CorrectorFields corrector_fields(const GradFlowModel& model, const SpectralField& phi_n_hat,
                                 const PredictorOutput& pred, SvmVariant variant, const CrankNicolsonSymbols& cn) {
  const double tau = cn.tau;
  const auto& m = model.M_symbol();
  const SpectralField& force_hat = pred.force_tilde_hat;

  auto hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < hat.size(); ++k) {
    hat[k] = (cn.explicit_part[k] * phi_n_hat[k] - tau * m[k] * force_hat[k]) * cn.implicit_inverse[k];
  }
  // w = A^{-1} g with g = M f'(phi_tilde) or -M mu*.
  const SpectralField& g_src = variant == SvmVariant::SvmI ? force_hat : pred.mu_star_hat;
  const double g_sign = variant == SvmVariant::SvmI ? 1.0 : -1.0;
  auto w_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < w_hat.size(); ++k) w_hat[k] = (g_sign * m[k] * cn.implicit_inverse[k]) * g_src[k];
  RealField phi_hat = fft_inverse(hat);
  RealField w = fft_inverse(w_hat);
  return CorrectorFields{std::move(phi_hat), std::move(w), std::move(hat), std::move(w_hat)};
}

QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const RealField& w, double f_tilde) {
  require_same_grid(phi_hat.grid(), w.grid(), "energy_poly");
  return energy_poly(model, phi_hat, fft_forward(phi_hat), w, fft_forward(w), f_tilde);
}

namespace {

// c1..c4 from nodal sums; c0 is filled by the caller. With an anchor phi_n,
// also returns h^2 sum (phi_hat - phi_n) q(phi_hat, phi_n), the bulk part of
// F[phi_hat] - F[phi_n] without cancellation.
QuarticPoly poly_tail(const GradFlowModel& model, const RealField& phi_hat, const SpectralField& phi_hat_k,
                      const RealField& w, const SpectralField& w_k, const RealField* phi_n, double* bulk_diff) {
  require_same_grid(phi_hat.grid(), w.grid(), "energy_poly");
  const double h2 = model.grid().h() * model.grid().h();
  const auto p = phi_hat.values();
  const auto v = w.values();
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double w1 = v[k];
    const double w2 = w1 * w1;
    s1 += GradFlowModel::f_prime(p[k]) * w1;
    s2 += GradFlowModel::f_second(p[k]) * w2;
    s3 += p[k] * w2 * w1;
    s4 += w2 * w2;
  }
  if (phi_n != nullptr) {
    const auto a = phi_n->values();
    double s0 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s0 += (p[k] - a[k]) * secant_quotient(p[k], a[k]);
    *bulk_diff = h2 * s0;
  }

  QuarticPoly poly;
  // (L phi_hat, w) + (f'(phi_hat), w)
  poly.c[1] = weighted_inner_product(phi_hat_k, w_k, model.L_symbol()) + h2 * s1;
  poly.c[2] = model.gradient_energy(w_k) + 0.5 * h2 * s2;
  poly.c[3] = h2 * s3;
  poly.c[4] = 0.25 * h2 * s4;
  return poly;
}

}  // namespace

QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const SpectralField& phi_hat_k,
                        const RealField& w, const SpectralField& w_k, double f_tilde) {
  QuarticPoly poly = poly_tail(model, phi_hat, phi_hat_k, w, w_k, nullptr, nullptr);
  poly.c[0] = model.free_energy(phi_hat, phi_hat_k) - f_tilde;
  return poly;
}

QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const SpectralField& phi_hat_k,
                        const RealField& w, const SpectralField& w_k, const RealField& phi_n,
                        const SpectralField& phi_n_hat, double drop) {
  double bulk_diff = 0.0;
  QuarticPoly poly = poly_tail(model, phi_hat, phi_hat_k, w, w_k, &phi_n, &bulk_diff);
  // 1/2 (L phi_hat, phi_hat) - 1/2 (L phi_n, phi_n) = 1/2 (L (phi_hat - phi_n), phi_hat + phi_n)
  double grad_diff = 0.0;
  const auto& l = model.L_symbol();
  for (std::size_t k = 0; k < l.size(); ++k) {
    const std::complex<double> d = phi_hat_k[k] - phi_n_hat[k];
    const std::complex<double> s = phi_hat_k[k] + phi_n_hat[k];
    grad_diff += l[k] * (d.real() * s.real() + d.imag() * s.imag());
  }
  poly.c[0] = bulk_diff + 0.5 * grad_diff + drop;
  return poly;
}

SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1,
                       SvmVariant variant, double tau, const SvmOptions& options) {
  return svm_step(model, phi_n, phi_nm1, variant, cn_symbols(model, tau), options);
}

SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1,
                       SvmVariant variant, const CrankNicolsonSymbols& cn, const SvmOptions& options) {
  return svm_step(model, phi_n, fft_forward(phi_n), phi_nm1, variant, cn, options);
}

SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                       const RealField& phi_nm1, SvmVariant variant, const CrankNicolsonSymbols& cn,
                       const SvmOptions& options, std::optional<double> energy_n) {
  const PredictorOutput pred = predict(model, phi_n, phi_n_hat, phi_nm1, cn, energy_n);
  CorrectorFields fields = corrector_fields(model, phi_n_hat, pred, variant, cn);
  const QuarticPoly poly = energy_poly(model, fields.phi_hat, fields.phi_hat_k, fields.w, fields.w_k, phi_n, phi_n_hat,
                                       cn.tau * pred.diss);

  const double tol = options.newton_tol * std::max(1.0, std::abs(pred.f_tilde));
  const BetaSolution sol = solve_beta(poly, tol, options.max_newton_iters, options.beta_limit);

  SvmStepResult out{std::move(fields.phi_hat), std::move(fields.phi_hat_k)};
  out.phi_next.axpy(sol.beta, fields.w);
  for (std::size_t k = 0; k < out.phi_next_hat.size(); ++k) out.phi_next_hat[k] += sol.beta * fields.w_k[k];
  if (!out.phi_next.all_finite()) throw StepFailure(StepFailureKind::NonFinite, "SVM update produced NaN/Inf");

  out.beta = sol.beta;
  out.alpha = sol.beta / cn.tau;
  out.newton_iters = sol.iters;
  out.energy_next = model.free_energy(out.phi_next, out.phi_next_hat);
  out.energy_target = pred.f_tilde;
  out.energy_residual = out.energy_next - pred.f_tilde;
  out.dissipation = pred.diss;
  return out;
}

}  // namespace svmch
