#pragma once

// Cahn-Hilliard gradient flow on the periodic unit square:
//   d(phi)/dt = -M (L phi + f'(phi)),  F = 1/2 (phi, L phi) + (f(phi), 1),
// with L = -eps^2 Lap, M = -lambda Lap and f(phi) = (phi^2 - 1)^2 / 4.
// L and M are diagonal in Fourier space with symbols eps^2 |k|^2 and
// lambda |k|^2.

#include "svmch/spectral.hpp"

namespace svmch {

struct ChParams {
  double epsilon = 1e-2;
  double lambda = 1e-3;

  /// Throws ConfigError unless both are positive and finite.
  void validate() const;
};

class GradFlowModel {
 public:
  struct Options {
    /// Zero the 2/3-rule modes of every nodal nonlinearity before it enters
    /// a spectral operator.
    bool dealias = false;
  };

  GradFlowModel(ChParams params, GridPtr grid) : GradFlowModel(params, std::move(grid), Options{}) {}
  GradFlowModel(ChParams params, GridPtr grid, Options options);

  const ChParams& params() const noexcept { return params_; }
  const Grid2D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Options& options() const noexcept { return options_; }

  const Symbol& L_symbol() const noexcept { return l_symbol_; }
  const Symbol& M_symbol() const noexcept { return m_symbol_; }
  /// M_symbol * L_symbol.
  const Symbol& ML_symbol() const noexcept { return ml_symbol_; }

  static double f_bulk(double phi) noexcept {
    const double s = phi * phi - 1.0;
    return 0.25 * s * s;
  }
  static double f_prime(double phi) noexcept { return phi * phi * phi - phi; }
  static double f_second(double phi) noexcept { return 3.0 * phi * phi - 1.0; }

  /// Nodewise f'(phi), dealiased if enabled.
  RealField bulk_force(const RealField& phi) const;
  /// Applies the dealiasing filter if enabled, otherwise returns the input.
  RealField filtered(RealField field) const;

  /// (f(phi), 1)_h.
  double bulk_energy(const RealField& phi) const;
  /// 1/2 (phi, L phi)_h evaluated spectrally.
  double gradient_energy(const SpectralField& phi_hat) const;

  double free_energy(const RealField& phi) const;
  /// Same as free_energy(phi) when phi_hat = fft_forward(phi); saves a transform.
  double free_energy(const RealField& phi, const SpectralField& phi_hat) const;

  /// Chemical potential L phi + f'(phi).
  RealField mu(const RealField& phi) const;
  RealField mu(const RealField& phi, const SpectralField& phi_hat) const;

  /// (mu, M mu)_h = lambda sum_k |k|^2 |mu_hat_k|^2.
  double dissipation_rate(const RealField& mu) const;
  double dissipation_rate(const SpectralField& mu_hat) const;

 private:
  ChParams params_;
  GridPtr grid_;
  Options options_;
  Symbol l_symbol_;
  Symbol m_symbol_;
  Symbol ml_symbol_;
};

/// Diagonal pieces of a Crank-Nicolson step for the linear part:
/// implicit_inverse = 1 / (1 + tau/2 ML), explicit_part = 1 - tau/2 ML.
struct CrankNicolsonSymbols {
  double tau = 0.0;
  Symbol implicit_inverse;
  Symbol explicit_part;
};

/// Throws ConfigError unless tau is positive and finite.
CrankNicolsonSymbols cn_symbols(const GradFlowModel& model, double tau);

}  // namespace svmch
