#include "svmch/diagnostics.hpp"

#include <cmath>

#include "svmch/errors.hpp"

namespace svmch {

ErrorNorms error_norms(const RealField& u, const RealField& v) {
  require_same_grid(u.grid(), v.grid(), "error_norms");
  const auto a = u.values();
  const auto b = v.values();
  double sum = 0.0;
  double linf = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
    linf = std::max(linf, std::abs(d));
  }
  const double h = u.grid().h();
  return ErrorNorms{std::sqrt(h * h * sum), linf};
}

double order_fit(std::span<const double> errors, double ratio) {
  if (errors.size() < 2) throw ConfigError("order_fit: need at least two errors");
  if (!(ratio > 1.0)) throw ConfigError("order_fit: refinement ratio must exceed 1");
  const double n = static_cast<double>(errors.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) {
      throw ConfigError("order_fit: errors must be positive and finite");
    }
    // log(tau_k) = log(tau_0) - k log(ratio); the offset drops out of the slope.
    const double x = -static_cast<double>(k) * std::log(ratio);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<ErrorNorms> refinement_errors(std::span<const RealField> solutions, RefinementMode mode) {
  std::vector<ErrorNorms> out;
  if (solutions.size() < 2) return out;
  for (std::size_t k = 0; k + 1 < solutions.size(); ++k) {
    const RealField& ref = mode == RefinementMode::AdjacentPairs ? solutions[k + 1] : solutions.back();
    out.push_back(error_norms(solutions[k], ref));
  }
  return out;
}

}  // namespace svmch
