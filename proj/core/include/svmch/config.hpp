#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svmch/model.hpp"

namespace svmch {

enum class Scheme { Svm1, Svm2, SavCn, Ficn };

const char* to_string(Scheme s);
/// Accepts svm1, svm2, savcn, ficn.
Scheme parse_scheme(std::string_view name);

/// Everything needed to reproduce one trajectory.
struct SchemeConfig {
  Scheme scheme = Scheme::Svm2;
  std::size_t n = 128;
  double tau = 1.25e-2;
  double t_end = 1.0;
  double epsilon = 1e-2;
  double lambda = 1e-3;
  /// taylor, coarsening or file:<path>.
  std::string init = "taylor";
  double c0 = 1.0;
  double newton_tol = 1e-13;
  int max_newton_iters = 50;
  double beta_limit = 0.5;
  double picard_tol = 1e-12;
  int max_picard_iters = 500;
  bool dealias = false;
  std::vector<double> snapshot_times;
  std::string out_dir;
  std::uint64_t seed = 0;

  ChParams params() const { return ChParams{epsilon, lambda}; }

  /// Number of steps to reach t_end; t_end is rounded up to a whole step.
  std::int64_t step_count() const;

  /// Throws ConfigError on invalid values.
  void validate() const;

  /// Applies one `key = value` setting. Keys match the long CLI flags
  /// (scheme, n, tau, t-end, epsilon, lambda, init, c0, newton-tol,
  /// max-newton-iters, beta-limit, picard-tol, max-picard-iters, dealias,
  /// snapshot-at, out, seed); underscores are accepted for dashes.
  void set(std::string_view key, std::string_view value);

  /// key = value lines that parse back to an identical config.
  std::string to_text() const;
};

/// Parses `key = value` lines; `#` starts a comment. Settings apply on top
/// of `base`.
SchemeConfig parse_config_text(std::string_view text, SchemeConfig base = {});
SchemeConfig load_config_file(const std::string& path, SchemeConfig base = {});

}  // namespace svmch
