#include "svmch/initial.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "svmch/errors.hpp"
#include "svmch/io.hpp"

namespace svmch {

namespace {
constexpr double kPi = std::numbers::pi;
}

RealField taylor_field(GridPtr grid) {
  return RealField::from_function(std::move(grid), [](double x, double y) {
    return 0.25 * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
  });
}

RealField coarsening_field(GridPtr grid) {
  return RealField::from_function(std::move(grid), [](double x, double y) {
    const double a = std::cos(6.0 * kPi * x) * std::cos(8.0 * kPi * y);
    const double b = std::cos(8.0 * kPi * x) * std::cos(6.0 * kPi * y);
    const double c = std::cos(2.0 * kPi * x - 10.0 * kPi * y) * std::cos(4.0 * kPi * x - 2.0 * kPi * y);
    return 0.05 * (a + b * b + c);
  });
}

RealField init_field(std::string_view kind, GridPtr grid) {
  if (kind == "taylor") return taylor_field(std::move(grid));
  if (kind == "coarsening") return coarsening_field(std::move(grid));
  if (kind.rfind("file:", 0) == 0) {
    const std::string path(kind.substr(5));
    std::optional<RealField> f;
    try {
      f.emplace(read_snapshot_raw(path, grid));
    } catch (const IoError& e) {
      throw ConfigError("initial field '" + path + "': " + e.what());
    }
    if (!f->all_finite()) throw ConfigError("initial field '" + path + "' contains NaN/Inf");
    return std::move(*f);
  }
  throw ConfigError("unknown init kind '" + std::string(kind) + "'");
}

}  // namespace svmch
