#pragma once

// First SVM stage. A half step of IMEX backward Euler gives phi_tilde at
// t^{n+1/2}; the chemical potential there samples the dissipation rate, and
// the target energy for the corrector is F[phi^n] - tau (mu*, M mu*).

#include <optional>

#include "svmch/model.hpp"
#include "svmch/spectral.hpp"

namespace svmch {

struct PredictorOutput {
  RealField phi_tilde;
  SpectralField phi_tilde_hat;
  /// Transform of mu* = L phi_tilde + f'(phi_tilde).
  SpectralField mu_star_hat;
  /// Transform of f'(phi_tilde); the corrector reuses it.
  SpectralField force_tilde_hat;
  /// Target energy F~^{n+1} = energy_n - tau * diss.
  double f_tilde = 0.0;
  /// (mu*, M mu*)_h >= 0.
  double diss = 0.0;
  /// F[phi^n], computed on the way.
  double energy_n = 0.0;

  /// Nodal mu*.
  RealField mu_star() const { return fft_inverse(mu_star_hat); }
};

/// (3 phi^n - phi^{n-1}) / 2.
RealField extrapolate(const RealField& phi_n, const RealField& phi_nm1);

PredictorOutput predict(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1, double tau);
/// Same, with phi_n_hat = fft_forward(phi_n) and the symbols for tau
/// supplied. energy_n, if given, must be F[phi_n].
PredictorOutput predict(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                        const RealField& phi_nm1, const CrankNicolsonSymbols& cn,
                        std::optional<double> energy_n = std::nullopt);

}  // namespace svmch
