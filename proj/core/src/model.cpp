#include "svmch/model.hpp"

#include <cmath>

#include "svmch/errors.hpp"

namespace svmch {

void ChParams::validate() const {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw ConfigError("lambda must be positive");
}

GradFlowModel::GradFlowModel(ChParams params, GridPtr grid, Options options)
    : params_(params), grid_(std::move(grid)), options_(options) {
  params_.validate();
  const Symbol& k2 = grid_->k2();
  l_symbol_.resize(k2.size());
  m_symbol_.resize(k2.size());
  ml_symbol_.resize(k2.size());
  const double eps2 = params_.epsilon * params_.epsilon;
  for (std::size_t k = 0; k < k2.size(); ++k) {
    l_symbol_[k] = eps2 * k2[k];
    m_symbol_[k] = params_.lambda * k2[k];
    ml_symbol_[k] = m_symbol_[k] * l_symbol_[k];
  }
}

RealField GradFlowModel::filtered(RealField field) const {
  if (!options_.dealias) return field;
  return apply_symbol(field, grid_->two_thirds_mask());
}

RealField GradFlowModel::bulk_force(const RealField& phi) const {
  auto out = RealField::uninitialized(phi.grid_ptr());
  const auto in = phi.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < in.size(); ++k) dst[k] = f_prime(in[k]);
  return filtered(std::move(out));
}

double GradFlowModel::bulk_energy(const RealField& phi) const {
  double s = 0.0;
  for (double v : phi.values()) s += f_bulk(v);
  const double h = grid_->h();
  return h * h * s;
}

double GradFlowModel::gradient_energy(const SpectralField& phi_hat) const {
  return 0.5 * weighted_norm2(phi_hat, l_symbol_);
}

double GradFlowModel::free_energy(const RealField& phi) const { return free_energy(phi, fft_forward(phi)); }

double GradFlowModel::free_energy(const RealField& phi, const SpectralField& phi_hat) const {
  return gradient_energy(phi_hat) + bulk_energy(phi);
}

RealField GradFlowModel::mu(const RealField& phi) const { return mu(phi, fft_forward(phi)); }

RealField GradFlowModel::mu(const RealField& phi, const SpectralField& phi_hat) const {
  RealField out = fft_inverse(apply_symbol(phi_hat, l_symbol_));
  out += bulk_force(phi);
  return out;
}

double GradFlowModel::dissipation_rate(const RealField& mu) const { return dissipation_rate(fft_forward(mu)); }

double GradFlowModel::dissipation_rate(const SpectralField& mu_hat) const {
  return weighted_norm2(mu_hat, m_symbol_);
}

CrankNicolsonSymbols cn_symbols(const GradFlowModel& model, double tau) {
  if (!(std::isfinite(tau) && tau > 0.0)) throw ConfigError("time step must be positive");
  CrankNicolsonSymbols s;
  s.tau = tau;
  const Symbol& ml = model.ML_symbol();
  s.implicit_inverse.resize(ml.size());
  s.explicit_part.resize(ml.size());
  for (std::size_t k = 0; k < ml.size(); ++k) {
    const double a = 0.5 * tau * ml[k];
    s.implicit_inverse[k] = 1.0 / (1.0 + a);
    s.explicit_part[k] = 1.0 - a;
  }
  return s;
}

}  // namespace svmch
