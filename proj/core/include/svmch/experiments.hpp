#pragma once

// Drivers for the three studies: temporal refinement, cost comparison and
// coarsening robustness. Each returns an in-memory report; write_* dumps
// it as CSV (and per-run outputs) into a directory.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "svmch/config.hpp"
#include "svmch/diagnostics.hpp"
#include "svmch/runner.hpp"

namespace svmch {

enum class Profile { Desk, Paper };

Profile parse_profile(std::string_view name);
const char* to_string(Profile p);

/// Worker count for independent runs: SVM_THREADS if set and positive,
/// otherwise the hardware concurrency, capped by `jobs`.
unsigned harness_threads(std::size_t jobs);

/// Calls fn(i) for i in [0, count) on up to harness_threads(count) threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// Refinement -----------------------------------------------------------------

struct RefineOptions {
  std::vector<Scheme> schemes{Scheme::Svm1, Scheme::Svm2};
  std::size_t n = 128;
  double tau0 = 1.25e-2;
  /// tau_k = tau0 / 2^(k-1), k = 1..levels.
  int levels = 7;
  double t_end = 1.0;
  double epsilon = 1e-2;
  double lambda = 1e-3;
  std::string init = "taylor";
  RefinementMode mode = RefinementMode::AdjacentPairs;
};

struct RefineSeries {
  Scheme scheme = Scheme::Svm1;
  std::vector<double> taus;
  std::vector<ErrorNorms> errors;
  double slope_l2 = 0.0;
  double slope_linf = 0.0;
  std::vector<RunOutcome> runs;
};

struct RefineReport {
  std::vector<RefineSeries> series;
};

RefineReport run_refine(const RefineOptions& options);
void write_refine_report(const std::filesystem::path& dir, const RefineReport& report);

// CPU time -------------------------------------------------------------------

struct CpuOptions {
  std::vector<Scheme> schemes{Scheme::Svm1, Scheme::Svm2, Scheme::SavCn, Scheme::Ficn};
  std::vector<std::size_t> sizes{128, 256};
  double tau = 1e-2;
  double t_end = 1.0;
  double epsilon = 1e-2;
  double lambda = 1e-3;
  std::string init = "taylor";
};

struct CpuRow {
  Scheme scheme = Scheme::Svm1;
  std::size_t n = 0;
  double wall_seconds = 0.0;
  std::int64_t steps = 0;
  double mean_solver_iters = 0.0;
  bool completed = false;
};

struct CpuReport {
  std::vector<CpuRow> rows;
  /// Wall time of the first row matching (scheme, n), or -1.
  double wall(Scheme scheme, std::size_t n) const;
};

/// Runs sequentially so timings do not compete for cores.
CpuReport run_cpu(const CpuOptions& options);
void write_cpu_report(const std::filesystem::path& dir, const CpuReport& report);

// Coarsening -----------------------------------------------------------------

struct LadderEntry {
  Scheme scheme = Scheme::Svm2;
  double tau = 0.0;
};

struct CoarsenOptions {
  std::size_t n = 128;
  double epsilon = 1e-2;
  double lambda = 1.0;
  double t_end = 0.02;
  Scheme reference_scheme = Scheme::Svm2;
  double reference_tau = 2.5e-6;
  std::vector<LadderEntry> ladder;
  /// Relative L2 deviation accepted as "matches the reference".
  double threshold = 5e-2;
  /// Times (in addition to t_end) at which fields are kept.
  std::vector<double> snapshot_times;

  static CoarsenOptions for_profile(Profile profile);
};

struct CoarsenRow {
  LadderEntry entry;
  /// ||phi - phi_ref||_2 / ||phi_ref||_2 at t_end; +inf if the run failed.
  double rel_l2 = 0.0;
  ErrorNorms abs{};
  bool completed = false;
  bool matches = false;
  RunOutcome outcome;
};

struct CoarsenReport {
  CoarsenOptions options;
  RunOutcome reference;
  std::vector<CoarsenRow> rows;

  const CoarsenRow* find(Scheme scheme, double tau) const;
};

CoarsenReport run_coarsen(const CoarsenOptions& options);
void write_coarsen_report(const std::filesystem::path& dir, const CoarsenReport& report);

}  // namespace svmch
