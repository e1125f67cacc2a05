#pragma once

// Fully implicit Crank-Nicolson with the secant nonlinearity
//   q(a, b) = (f(a) - f(b)) / (a - b) = (a + b)(a^2 + b^2 - 2) / 4,
// which makes the discrete chain rule exact and so dissipates F[phi]
// itself. The nonlinear step is solved by Picard iteration; each sweep is
// one diagonal solve in Fourier space.

#include "svmch/model.hpp"
#include "svmch/spectral.hpp"

namespace svmch {

/// Closed form of the secant quotient; no 0/0 at a == b.
inline double secant_quotient(double a, double b) noexcept { return 0.25 * (a + b) * (a * a + b * b - 2.0); }

struct FicnOptions {
  /// Max-norm update tolerance.
  double tol = 1e-12;
  int max_iters = 500;
};

struct FicnStepResult {
  RealField phi_next;
  SpectralField phi_next_hat;
  int iters = 0;
  double energy_next = 0.0;
  /// (mu, M mu)_h with mu = L phi^{n+1/2} + q(phi^{n+1}, phi^n).
  double dissipation = 0.0;
};

/// Throws StepFailure(PicardDiverged) if the iteration does not settle
/// within max_iters.
FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, double tau, const FicnOptions& options = {});
FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, const CrankNicolsonSymbols& cn,
                         const FicnOptions& options = {});
/// phi_n_hat must equal fft_forward(phi_n).
FicnStepResult ficn_step(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                         const CrankNicolsonSymbols& cn, const FicnOptions& options = {});

}  // namespace svmch
