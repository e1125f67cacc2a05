#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "svmch/config.hpp"
#include "svmch/errors.hpp"
#include "svmch/initial.hpp"
#include "svmch/io.hpp"

using namespace svmch;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("svmch_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, Defaults) {
  const SchemeConfig c;
  EXPECT_EQ(c.scheme, Scheme::Svm2);
  EXPECT_EQ(c.n, 128u);
  EXPECT_DOUBLE_EQ(c.tau, 1.25e-2);
  EXPECT_EQ(c.step_count(), 80);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParseText) {
  const SchemeConfig c = parse_config_text(
      "# comment\n"
      "scheme = savcn\n"
      "n = 64   # trailing\n"
      "t_end = 0.5\n"
      "\n"
      "snapshot-at = 0.1, 0.25\n"
      "dealias = true\n");
  EXPECT_EQ(c.scheme, Scheme::SavCn);
  EXPECT_EQ(c.n, 64u);
  EXPECT_DOUBLE_EQ(c.t_end, 0.5);
  ASSERT_EQ(c.snapshot_times.size(), 2u);
  EXPECT_DOUBLE_EQ(c.snapshot_times[1], 0.25);
  EXPECT_TRUE(c.dealias);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_text("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("tau = abc\n"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_scheme("rk4"), ConfigError);
  SchemeConfig c;
  c.n = 100;
  EXPECT_THROW(c.validate(), ConfigError);
  c.n = 2048;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SchemeConfig{};
  c.t_end = c.tau / 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SchemeConfig{};
  c.init = "gaussian";
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/svmch.cfg"), ConfigError);
}

TEST(Config, TextRoundTrip) {
  SchemeConfig c;
  c.scheme = Scheme::Ficn;
  c.tau = 1.0 / 3.0;
  c.t_end = 1.0;
  c.snapshot_times = {0.1, 0.7};
  c.picard_tol = 3e-13;
  const SchemeConfig back = parse_config_text(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.tau, c.tau);
}

TEST(InitialData, Values) {
  auto g = Grid2D::create(32);
  const RealField t = init_field("taylor", g);
  const RealField c = init_field("coarsening", g);
  EXPECT_EQ(t.at(0, 0), 0.0);
  EXPECT_NEAR(c.at(0, 0), 0.15, 1e-15);
  EXPECT_NEAR(mean(t), 0.0, 1e-13);
  // x = 1/4, y = 0 gives 0.25 sin(pi/2) cos(0).
  EXPECT_NEAR(t.at(8, 0), 0.25, 1e-15);
  EXPECT_THROW(init_field("gaussian", g), ConfigError);
}

TEST(InitialData, FromFile) {
  auto g = Grid2D::create(16);
  const fs::path dir = scratch_dir("init");
  const RealField c = coarsening_field(g);
  write_snapshot_raw(dir / "c.svmf", c);
  const RealField back = init_field("file:" + (dir / "c.svmf").string(), g);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(back[k], c[k]);
  EXPECT_THROW(init_field("file:" + (dir / "c.svmf").string(), Grid2D::create(32)), ConfigError);
  EXPECT_THROW(init_field("file:" + (dir / "missing.svmf").string(), g), ConfigError);
}

TEST(RunCsv, HeaderAndRoundTrip) {
  EXPECT_STREQ(kRunCsvHeader, "step,t,energy,energy_target,mass,alpha,beta,solver_iters,dissipation,wall_ns");
  StepRecord r;
  r.step = 12;
  r.t = 0.1 + 0.2;
  r.energy = 1.0 / 3.0;
  r.energy_target = -2e-300;
  r.mass = 1e-17;
  r.alpha = -0.5;
  r.beta = 7e-9;
  r.solver_iters = 3;
  r.dissipation = 2.5;
  r.wall_ns = 123456789;
  const StepRecord b = parse_csv_row(format_csv_row(r));
  EXPECT_EQ(b.step, r.step);
  EXPECT_EQ(b.t, r.t);
  EXPECT_EQ(b.energy, r.energy);
  EXPECT_EQ(b.energy_target, r.energy_target);
  EXPECT_EQ(b.beta, r.beta);
  EXPECT_EQ(b.solver_iters, r.solver_iters);
  EXPECT_EQ(b.wall_ns, r.wall_ns);

  const fs::path dir = scratch_dir("csv");
  const std::vector<StepRecord> rows{r, b};
  write_run_csv(dir / "run.csv", rows);
  std::ifstream in(dir / "run.csv");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, kRunCsvHeader);
  const auto back = read_run_csv(dir / "run.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].energy, r.energy);
}

TEST(RawSnapshot, LayoutAndRoundTrip) {
  auto g = Grid2D::create(8);
  const RealField t = taylor_field(g);
  const auto bytes = encode_snapshot_raw(t);
  ASSERT_EQ(bytes.size(), 16u + 8u * 64u);
  EXPECT_EQ(std::memcmp(bytes.data(), "SVMF", 4), 0);
  EXPECT_EQ(bytes[4], 8);
  for (int i = 5; i < 16; ++i) EXPECT_EQ(bytes[i], 0) << i;
  double v1 = 0.0;
  std::memcpy(&v1, bytes.data() + 16 + 8 * 1, 8);
  EXPECT_EQ(v1, t[1]);

  const RealField back = decode_snapshot_raw(bytes, nullptr);
  EXPECT_EQ(back.grid().n(), 8u);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(back[k], t[k]);

  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_snapshot_raw(bad, nullptr), IoError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(decode_snapshot_raw(bad, nullptr), IoError);
  EXPECT_THROW(read_snapshot_raw("/nonexistent/x.svmf"), IoError);
}

TEST(Graymap, LevelsAndFile) {
  EXPECT_EQ(graymap_level(-1.2), 0);
  EXPECT_EQ(graymap_level(-5.0), 0);
  EXPECT_EQ(graymap_level(1.2), 255);
  EXPECT_EQ(graymap_level(9.0), 255);
  EXPECT_NEAR(graymap_level(0.0), 127.5, 0.5);

  auto g = Grid2D::create(8);
  const fs::path dir = scratch_dir("pgm");
  write_snapshot_pgm(dir / "t.pgm", RealField(g, 1.2));
  std::ifstream in(dir / "t.pgm", std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 8);
  EXPECT_EQ(h, 8);
  EXPECT_EQ(maxval, 255);
  in.get();
  std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ASSERT_EQ(payload.size(), 64u);
  for (char ch : payload) EXPECT_EQ(static_cast<unsigned char>(ch), 255);
}
