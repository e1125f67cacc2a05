#include "svmch/ficn.hpp"

#include <cmath>
#include <sstream>

#include "svmch/errors.hpp"

namespace svmch {

namespace {

RealField secant_field(const GradFlowModel& model, const RealField& a, const RealField& b) {
  auto q = RealField::uninitialized(a.grid_ptr());
  const auto av = a.values();
  const auto bv = b.values();
  auto qv = q.values();
  for (std::size_t k = 0; k < qv.size(); ++k) qv[k] = secant_quotient(av[k], bv[k]);
  return model.filtered(std::move(q));
}

double max_abs_diff(const RealField& u, const RealField& v) {
  double m = 0.0;
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    // Written so a NaN difference propagates instead of being skipped.
    if (!(d <= m)) m = d;
  }
  return m;
}

}  // namespace

FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, double tau, const FicnOptions& options) {
  return ficn_step(model, phi_n, cn_symbols(model, tau), options);
}

FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, const CrankNicolsonSymbols& cn,
                         const FicnOptions& options) {
  return ficn_step(model, phi_n, fft_forward(phi_n), cn, options);
}

FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                         const CrankNicolsonSymbols& cn, const FicnOptions& options) {
  const double tau = cn.tau;
  const auto& m = model.M_symbol();

  // A^{-1}(1 - tau/2 ML) phi^n does not change across sweeps.
  auto base_hat = SpectralField::uninitialized(model.grid_ptr());
  for (std::size_t k = 0; k < base_hat.size(); ++k) {
    base_hat[k] = cn.explicit_part[k] * phi_n_hat[k] * cn.implicit_inverse[k];
  }

  RealField current = phi_n;
  SpectralField current_hat = phi_n_hat;
  int iters = 0;
  bool converged = false;
  double update = 0.0;
  while (iters < options.max_iters) {
    ++iters;
    const SpectralField q_hat = fft_forward(secant_field(model, current, phi_n));
    SpectralField next_hat = base_hat;
    for (std::size_t k = 0; k < next_hat.size(); ++k) {
      next_hat[k] -= tau * m[k] * cn.implicit_inverse[k] * q_hat[k];
    }
    RealField next = fft_inverse(next_hat);
    update = max_abs_diff(next, current);
    current = std::move(next);
    current_hat = std::move(next_hat);
    if (!std::isfinite(update)) break;
    if (update <= options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "no convergence in " << iters << " sweeps (last update " << update << ")";
    throw StepFailure(StepFailureKind::PicardDiverged, msg.str());
  }

  const auto& l = model.L_symbol();
  SpectralField mu_hat = fft_forward(secant_field(model, current, phi_n));
  for (std::size_t k = 0; k < mu_hat.size(); ++k) mu_hat[k] += 0.5 * l[k] * (current_hat[k] + phi_n_hat[k]);

  FicnStepResult out{std::move(current), std::move(current_hat), iters};
  out.energy_next = model.free_energy(out.phi_next, out.phi_next_hat);
  out.dissipation = model.dissipation_rate(mu_hat);
  return out;
}

}  // namespace svmch
