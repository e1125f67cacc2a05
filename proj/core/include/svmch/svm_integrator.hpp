#pragma once

// Supplementary-variable corrector. With phi_tilde, mu* and the target
// energy F~ from the predictor, one Crank-Nicolson step of
//   d(phi)/dt = -M (L phi + f'(phi)) + alpha g[phi]
// splits into phi^{n+1} = phi_hat + beta w, where beta = tau alpha is fixed
// by the scalar constraint F[phi_hat + beta w] = F~. For the quartic double
// well that constraint is a quartic polynomial in beta.

#include <array>
#include <limits>
#include <optional>

#include "svmch/model.hpp"
#include "svmch/predictor.hpp"
#include "svmch/spectral.hpp"

namespace svmch {

enum class SvmVariant {
  /// g = M f'(phi): modified chemical potential L phi + (1 - alpha) f'(phi).
  SvmI,
  /// g = -M (L phi + f'(phi)): modified mobility (1 + alpha) M.
  SvmII,
};

const char* to_string(SvmVariant v);

/// g[phi] for the chosen variant.
RealField supplementary_direction(const GradFlowModel& model, SvmVariant variant, const RealField& phi);

struct CorrectorFields {
  RealField phi_hat;
  RealField w;
  SpectralField phi_hat_k;
  SpectralField w_k;
};

/// phi_hat = A^{-1}((1 - tau/2 ML) phi^n - tau M f'(phi_tilde)),
/// w = A^{-1} g[phi_tilde], with A = 1 + tau/2 ML.
CorrectorFields corrector_fields(const GradFlowModel& model, const RealField& phi_n, const PredictorOutput& pred,
                                 SvmVariant variant, double tau);
CorrectorFields corrector_fields(const GradFlowModel& model, const SpectralField& phi_n_hat,
                                 const PredictorOutput& pred, SvmVariant variant, const CrankNicolsonSymbols& cn);

/// u(beta) = c[0] + c[1] beta + ... + c[4] beta^4.
struct QuarticPoly {
  std::array<double, 5> c{};

  double operator()(double beta) const noexcept {
    return (((c[4] * beta + c[3]) * beta + c[2]) * beta + c[1]) * beta + c[0];
  }
  double derivative(double beta) const noexcept {
    return ((4.0 * c[4] * beta + 3.0 * c[3]) * beta + 2.0 * c[2]) * beta + c[1];
  }
};

/// Exact expansion of F[phi_hat + beta w] - f_tilde in beta.
QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const RealField& w, double f_tilde);
/// Same, with the transforms of phi_hat and w already known.
QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const SpectralField& phi_hat_k,
                        const RealField& w, const SpectralField& w_k, double f_tilde);
/// Same polynomial for the target F[phi_n] - drop. Here c0 is summed as
/// (phi_hat - phi_n, q(phi_hat, phi_n))_h + 1/2 (L(phi_hat - phi_n), phi_hat + phi_n)_h + drop,
/// which keeps its relative accuracy when phi_hat is close to phi_n, instead
/// of subtracting two O(1) energies.
QuarticPoly energy_poly(const GradFlowModel& model, const RealField& phi_hat, const SpectralField& phi_hat_k,
                        const RealField& w, const SpectralField& w_k, const RealField& phi_n,
                        const SpectralField& phi_n_hat, double drop);

struct BetaSolution {
  double beta = 0.0;
  /// Newton iterations taken from beta = 0.
  int iters = 0;
};

/// Newton's method on u(beta) from beta = 0, stopping once
/// |u| <= tol * max(1, |c0|). The converged Newton iterate is then checked
/// against every real root of smaller magnitude (found by bracketing between
/// critical points) and the root nearest zero is returned.
///
/// Throws StepFailure(SingularConstraint) when |c1| < 1e-14 and the
/// constraint is not already met at beta = 0, and StepFailure(RootDiverged)
/// when no root is found or the selected root exceeds beta_limit.
BetaSolution solve_beta(const QuarticPoly& poly, double tol, int max_iters,
                        double beta_limit = std::numeric_limits<double>::infinity());

/// All real roots of the polynomial with coefficients c (ascending powers)
/// inside [lo, hi], sorted ascending. Roots of even multiplicity are
/// reported when |u| <= touch_tol at a critical point.
std::vector<double> real_roots_in(std::span<const double> c, double lo, double hi, double touch_tol = 0.0);

struct SvmOptions {
  /// Newton stopping tolerance, scaled by max(1, |F~|).
  double newton_tol = 1e-13;
  int max_newton_iters = 50;
  /// Larger |beta| is treated as leaving the small-tau regime.
  double beta_limit = 0.5;
};

struct SvmStepResult {
  RealField phi_next;
  SpectralField phi_next_hat;
  double beta = 0.0;
  /// beta / tau.
  double alpha = 0.0;
  int newton_iters = 0;
  /// F[phi^{n+1}] - F~^{n+1}, evaluated directly.
  double energy_residual = 0.0;
  double energy_next = 0.0;
  double energy_target = 0.0;
  double dissipation = 0.0;
};

SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1,
                       SvmVariant variant, double tau, const SvmOptions& options = {});
SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const RealField& phi_nm1,
                       SvmVariant variant, const CrankNicolsonSymbols& cn, const SvmOptions& options = {});
/// phi_n_hat must equal fft_forward(phi_n); energy_n, if given, F[phi_n].
SvmStepResult svm_step(const GradFlowModel& model, const RealField& phi_n, const SpectralField& phi_n_hat,
                       const RealField& phi_nm1, SvmVariant variant, const CrankNicolsonSymbols& cn,
                       const SvmOptions& options = {}, std::optional<double> energy_n = std::nullopt);

}  // namespace svmch
