#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "svmch/config.hpp"
#include "svmch/diagnostics.hpp"
#include "svmch/ficn.hpp"
#include "svmch/model.hpp"
#include "svmch/sav_cn.hpp"
#include "svmch/svm_integrator.hpp"

namespace svmch {

/// One trajectory of the configured scheme. Holds (phi^n, phi^{n-1}) and,
/// for SAV-CN, the auxiliary scalar. The first step uses phi^{-1} = phi^0.
class Simulation {
 public:
  explicit Simulation(const SchemeConfig& config);
  Simulation(const SchemeConfig& config, RealField initial);

  /// Record for the current state (step 0 right after construction).
  const StepRecord& current_record() const noexcept { return record_; }

  /// Advances one step and returns its record. Throws StepFailure; the
  /// state is left at the last accepted step.
  const StepRecord& advance();

  const RealField& phi() const noexcept { return phi_; }
  std::int64_t step() const noexcept { return record_.step; }
  double time() const noexcept { return record_.t; }
  const GradFlowModel& model() const noexcept { return model_; }
  const SchemeConfig& config() const noexcept { return config_; }

 private:
  SchemeConfig config_;
  GradFlowModel model_;
  CrankNicolsonSymbols cn_;
  RealField phi_;
  SpectralField phi_hat_;
  RealField phi_prev_;
  double sav_r_ = 0.0;
  StepRecord record_;
};

struct RunFailure {
  std::int64_t step = 0;
  std::string message;
};

struct RunOutcome {
  RunSeries series;
  RealField final_phi;
  std::optional<RunFailure> failure;
};

/// Steps from t = 0 to t_end, collecting records and requested snapshots.
/// A StepFailure ends the run early and is reported in `failure`.
RunOutcome run(const SchemeConfig& config);
RunOutcome run(const SchemeConfig& config, RealField initial);

/// Writes run.csv, config.txt, final.svmf/.pgm and snapshot files into dir
/// (created if missing), plus failure.txt when the run stopped early.
/// Throws IoError.
void write_run_outputs(const std::filesystem::path& dir, const RunOutcome& outcome);

}  // namespace svmch
