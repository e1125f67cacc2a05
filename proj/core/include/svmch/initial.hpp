#pragma once

#include <string_view>

#include "svmch/spectral.hpp"

namespace svmch {

/// 0.25 sin(2 pi x) cos(2 pi y).
RealField taylor_field(GridPtr grid);

/// Multi-mode cosine data that coarsens quickly:
/// 0.05 (cos 6pi x cos 8pi y + (cos 8pi x cos 6pi y)^2 + cos(2pi x - 10pi y) cos(4pi x - 2pi y)).
RealField coarsening_field(GridPtr grid);

/// kind is "taylor", "coarsening" or "file:<path>" (raw SVMF snapshot of
/// matching size). Throws ConfigError for anything else, IoError if the
/// file cannot be read.
RealField init_field(std::string_view kind, GridPtr grid);

}  // namespace svmch
