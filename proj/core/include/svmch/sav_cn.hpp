#pragma once

// Scalar auxiliary variable scheme with Crank-Nicolson in time. The bulk
// energy E1 = (f(phi), 1)_h is carried as r^2 - C0 with r ~ sqrt(E1 + C0),
// which makes each step linear and dissipates the modified energy
//   E_sav = 1/2 (phi, L phi)_h + r^2 - C0.

#include "svmch/model.hpp"
#include "svmch/spectral.hpp"

namespace svmch {

struct SavState {
  RealField phi;
  double r = 0.0;
  double c0 = 1.0;
};

/// r = sqrt(E1[phi] + c0). Throws ConfigError if E1 + c0 <= 0.
SavState sav_init(const GradFlowModel& model, RealField phi, double c0 = 1.0);

double sav_modified_energy(const GradFlowModel& model, const SavState& state);

struct SavStepResult {
  SavState next;
  SpectralField phi_next_hat;
  /// E_sav of the new state.
  double modified_energy = 0.0;
  /// (mu_sav, M mu_sav)_h at the half step.
  double dissipation = 0.0;
};

/// One step from state (phi^n, r^n) with phi^{n-1} for the extrapolation
/// (3 phi^n - phi^{n-1}) / 2 used in the nonlinear coefficient.
SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const RealField& phi_nm1, double tau);
SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const RealField& phi_nm1,
                       const CrankNicolsonSymbols& cn);
/// phi_n_hat must equal fft_forward(state.phi).
SavStepResult sav_step(const GradFlowModel& model, const SavState& state, const SpectralField& phi_n_hat,
                       const RealField& phi_nm1, const CrankNicolsonSymbols& cn);

}  // namespace svmch
