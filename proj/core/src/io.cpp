#include "svmch/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "svmch/errors.hpp"

namespace svmch {

namespace {

constexpr char kMagic[4] = {'S', 'V', 'M', 'F'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32_le(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_f64_le(std::vector<unsigned char>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xFFu));
}

double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_csv_row(const StepRecord& r) {
  std::string s;
  s.reserve(200);
  s += std::to_string(r.step);
  for (double x : {r.t, r.energy, r.energy_target, r.mass, r.alpha, r.beta}) {
    s += ',';
    s += fmt17(x);
  }
  s += ',';
  s += std::to_string(r.solver_iters);
  s += ',';
  s += fmt17(r.dissipation);
  s += ',';
  s += std::to_string(r.wall_ns);
  return s;
}

StepRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (cells.size() != 10) throw IoError("run.csv row has " + std::to_string(cells.size()) + " fields: " + line);
  try {
    StepRecord r;
    r.step = std::stoll(cells[0]);
    r.t = std::stod(cells[1]);
    r.energy = std::stod(cells[2]);
    r.energy_target = std::stod(cells[3]);
    r.mass = std::stod(cells[4]);
    r.alpha = std::stod(cells[5]);
    r.beta = std::stod(cells[6]);
    r.solver_iters = std::stoi(cells[7]);
    r.dissipation = std::stod(cells[8]);
    r.wall_ns = std::stoll(cells[9]);
    return r;
  } catch (const std::exception&) {
    throw IoError("malformed run.csv row: " + line);
  }
}

void write_run_csv(const std::filesystem::path& path, std::span<const StepRecord> records) {
  std::string text = kRunCsvHeader;
  text += '\n';
  for (const auto& r : records) {
    text += format_csv_row(r);
    text += '\n';
  }
  write_bytes(path, text.data(), text.size());
}

std::vector<StepRecord> read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader) throw IoError("'" + path.string() + "' has no run.csv header");
  std::vector<StepRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_csv_row(line));
  }
  return out;
}

std::vector<unsigned char> encode_snapshot_raw(const RealField& phi) {
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 8 * phi.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32_le(out, static_cast<std::uint32_t>(phi.grid().n()));
  put_u32_le(out, 0);
  put_u32_le(out, 0);
  for (double v : phi.values()) put_f64_le(out, v);
  return out;
}

RealField decode_snapshot_raw(std::span<const unsigned char> bytes, GridPtr grid) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError("not an SVMF snapshot");
  }
  const std::uint32_t n = get_u32_le(bytes.data() + 4);
  if (!grid) grid = Grid2D::create(n);
  if (n != grid->n()) {
    throw ConfigError("snapshot grid " + std::to_string(n) + " does not match n = " + std::to_string(grid->n()));
  }
  const std::size_t count = static_cast<std::size_t>(n) * n;
  if (bytes.size() != kHeaderBytes + 8 * count) throw IoError("SVMF snapshot has wrong payload size");
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = get_f64_le(bytes.data() + kHeaderBytes + 8 * k);
  return RealField(std::move(grid), std::move(values));
}

void write_snapshot_raw(const std::filesystem::path& path, const RealField& phi) {
  const auto bytes = encode_snapshot_raw(phi);
  write_bytes(path, bytes.data(), bytes.size());
}

RealField read_snapshot_raw(const std::filesystem::path& path, const GridPtr& grid) {
  return decode_snapshot_raw(read_bytes(path), grid);
}

RealField read_snapshot_raw(const std::filesystem::path& path) { return decode_snapshot_raw(read_bytes(path), nullptr); }

unsigned char graymap_level(double phi) noexcept {
  if (!(phi == phi)) return 0;
  const double s = std::clamp((phi + 1.2) / 2.4, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(s * 255.0));
}

void write_snapshot_pgm(const std::filesystem::path& path, const RealField& phi) {
  const std::size_t n = phi.grid().n();
  std::string header = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  std::vector<unsigned char> data(header.begin(), header.end());
  data.reserve(header.size() + n * n);
  // Top image row is the largest y; columns run along x.
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = n - 1 - r;
    for (std::size_t i = 0; i < n; ++i) data.push_back(graymap_level(phi.at(i, j)));
  }
  write_bytes(path, data.data(), data.size());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, text.data(), text.size());
}

}  // namespace svmch
