#pragma once

// On-disk formats.
//
// run.csv: header
//   step,t,energy,energy_target,mass,alpha,beta,solver_iters,dissipation,wall_ns
// then one row per record, reals printed with 17 significant digits.
//
// Raw snapshot (.svmf): 16-byte header = "SVMF", u32 n, u32 reserved (0),
// then 4 zero padding bytes so the payload is 8-byte aligned; followed by
// n*n little-endian float64 values in row-major order.
//
// Graymap snapshot (.pgm): binary P5, maxval 255, phi mapped linearly from
// [-1.2, 1.2] onto [0, 255] and clamped.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "svmch/diagnostics.hpp"
#include "svmch/spectral.hpp"

namespace svmch {

inline constexpr const char* kRunCsvHeader =
    "step,t,energy,energy_target,mass,alpha,beta,solver_iters,dissipation,wall_ns";

std::string format_csv_row(const StepRecord& r);
/// Throws IoError on malformed rows.
StepRecord parse_csv_row(const std::string& line);

void write_run_csv(const std::filesystem::path& path, std::span<const StepRecord> records);
std::vector<StepRecord> read_run_csv(const std::filesystem::path& path);

std::vector<unsigned char> encode_snapshot_raw(const RealField& phi);
RealField decode_snapshot_raw(std::span<const unsigned char> bytes, GridPtr grid);
void write_snapshot_raw(const std::filesystem::path& path, const RealField& phi);
/// Grid size in the header must match `grid`.
RealField read_snapshot_raw(const std::filesystem::path& path, const GridPtr& grid);
/// Reads a snapshot and builds a grid of the size in its header.
RealField read_snapshot_raw(const std::filesystem::path& path);

/// Gray level for one value.
unsigned char graymap_level(double phi) noexcept;
void write_snapshot_pgm(const std::filesystem::path& path, const RealField& phi);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace svmch
