#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "svmch/spectral.hpp"

namespace svmch {

/// One row of run.csv.
struct StepRecord {
  std::int64_t step = 0;
  double t = 0.0;
  /// F[phi^n].
  double energy = 0.0;
  /// svm*: F~^n. savcn: modified energy E_sav. ficn: F[phi^{n-1}] - tau * dissipation.
  double energy_target = 0.0;
  double mass = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int solver_iters = 0;
  double dissipation = 0.0;
  std::int64_t wall_ns = 0;
};

struct Snapshot {
  std::int64_t step = 0;
  double t = 0.0;
  RealField phi;
};

/// Ordered step records of one trajectory plus any saved fields.
struct RunSeries {
  /// key = value lines sufficient to reproduce the run.
  std::string config_echo;
  std::vector<StepRecord> records;
  std::vector<Snapshot> snapshots;
};

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Discrete L2 (sqrt(h^2 sum d^2)) and max-norm of u - v.
ErrorNorms error_norms(const RealField& u, const RealField& v);

/// Least-squares slope of log(error) against log(tau) for a sequence of
/// runs whose step shrinks by `ratio` each entry. Throws ConfigError on
/// fewer than two errors or a non-positive one.
double order_fit(std::span<const double> errors, double ratio = 2.0);

enum class RefinementMode {
  /// error_k = || u_k - u_{k+1} ||, coarse minus the next finer run.
  AdjacentPairs,
  /// error_k = || u_k - u_last || against the finest run.
  FinestReference,
};

/// Errors for solutions ordered from coarsest to finest step.
std::vector<ErrorNorms> refinement_errors(std::span<const RealField> solutions,
                                          RefinementMode mode = RefinementMode::AdjacentPairs);

}  // namespace svmch
