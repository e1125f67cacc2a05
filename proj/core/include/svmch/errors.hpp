#pragma once

#include <stdexcept>
#include <string>

namespace svmch {

/// Invalid user input: bad grid size, unknown scheme, malformed config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing an output/input file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepFailureKind {
  SingularConstraint,  // d/dbeta of the energy constraint vanishes away from equilibrium
  RootDiverged,        // no admissible root for beta (tau too large)
  PicardDiverged,      // FICN fixed-point map did not converge
  NonFinite,           // a field picked up NaN/Inf
};

const char* to_string(StepFailureKind kind);

/// A single time step could not be completed. The trajectory up to the
/// previous step is still valid.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(StepFailureKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  StepFailureKind kind() const noexcept { return kind_; }

 private:
  StepFailureKind kind_;
};

}  // namespace svmch
