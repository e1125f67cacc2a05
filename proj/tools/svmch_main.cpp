// svmch: run one Cahn-Hilliard trajectory or one of the comparison studies.
//
//   svmch run --scheme svm2 --n 128 --tau 1.25e-2 --t-end 1 --out out/run1
//   svmch run --config out/run1/config.txt --tau 6.25e-3
//   svmch experiment refine --out out/refine
//   svmch experiment coarsen --profile paper --out out/coarsen
//
// Exit status: 0 success, 1 bad configuration, 2 a time step failed,
// 3 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "svmch/config.hpp"
#include "svmch/errors.hpp"
#include "svmch/experiments.hpp"
#include "svmch/runner.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitStepFailure = 2;
constexpr int kExitIo = 3;

// Options bound as strings and routed through SchemeConfig::set, so flags
// and config files share one parser. Flags given on the command line
// override the file.
const char* const kRunKeys[] = {"scheme",     "n",          "tau",           "t-end",           "epsilon",
                                "lambda",     "init",       "c0",            "newton-tol",      "max-newton-iters",
                                "beta-limit", "picard-tol", "max-picard-iters", "dealias",      "snapshot-at",
                                "out",        "seed"};

int run_command(const std::string& config_path, const std::map<std::string, std::string>& given) {
  svmch::SchemeConfig cfg;
  if (!config_path.empty()) cfg = svmch::load_config_file(config_path);
  for (const auto& [key, value] : given) cfg.set(key, value);
  cfg.validate();

  const svmch::RunOutcome outcome = svmch::run(cfg);
  const std::string out_dir = cfg.out_dir.empty() ? "svmch_out" : cfg.out_dir;
  svmch::write_run_outputs(out_dir, outcome);

  const auto& last = outcome.series.records.back();
  std::printf("%s: %lld steps to t = %.6g, energy %.12g, mass %.3e\n", svmch::to_string(cfg.scheme),
              static_cast<long long>(last.step), last.t, last.energy, last.mass);
  if (outcome.failure) {
    std::fprintf(stderr, "step %lld failed: %s\n", static_cast<long long>(outcome.failure->step),
                 outcome.failure->message.c_str());
    return kExitStepFailure;
  }
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::string profile = "desk";
  std::string out = "svmch_experiment";
  int n = 0;
  int levels = 0;
  double t_end = 0.0;
};

int experiment_command(const ExperimentArgs& a) {
  const svmch::Profile profile = svmch::parse_profile(a.profile);
  if (a.name == "refine") {
    svmch::RefineOptions opts;
    opts.n = profile == svmch::Profile::Paper ? 256 : 128;
    opts.levels = profile == svmch::Profile::Paper ? 7 : 6;
    if (a.n > 0) opts.n = static_cast<std::size_t>(a.n);
    if (a.levels > 0) opts.levels = a.levels;
    if (a.t_end > 0.0) opts.t_end = a.t_end;
    const auto report = svmch::run_refine(opts);
    svmch::write_refine_report(a.out, report);
    for (const auto& s : report.series) {
      std::printf("%-5s slope L2 %.3f  Linf %.3f\n", svmch::to_string(s.scheme), s.slope_l2, s.slope_linf);
    }
    return 0;
  }
  if (a.name == "cpu") {
    svmch::CpuOptions opts;
    if (a.n > 0) opts.sizes = {static_cast<std::size_t>(a.n)};
    if (a.t_end > 0.0) opts.t_end = a.t_end;
    const auto report = svmch::run_cpu(opts);
    svmch::write_cpu_report(a.out, report);
    for (const auto& r : report.rows) {
      std::printf("%-5s n=%-4zu %9.3f s  %lld steps  %.2f iters/step%s\n", svmch::to_string(r.scheme), r.n,
                  r.wall_seconds, static_cast<long long>(r.steps), r.mean_solver_iters,
                  r.completed ? "" : "  (failed)");
    }
    return 0;
  }
  if (a.name == "coarsen") {
    auto opts = svmch::CoarsenOptions::for_profile(profile);
    if (a.n > 0) opts.n = static_cast<std::size_t>(a.n);
    if (a.t_end > 0.0) opts.t_end = a.t_end;
    const auto report = svmch::run_coarsen(opts);
    svmch::write_coarsen_report(a.out, report);
    for (const auto& r : report.rows) {
      std::printf("%-5s tau=%-10.4g rel L2 %.3e  %s\n", svmch::to_string(r.entry.scheme), r.entry.tau, r.rel_l2,
                  !r.completed ? "failed" : r.matches ? "matches reference" : "deviates");
    }
    return 0;
  }
  throw svmch::ConfigError("unknown experiment '" + a.name + "' (expected refine, cpu or coarsen)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-dissipation-rate preserving Cahn-Hilliard solver"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Step one scheme from t = 0 to t_end");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key = value config file; flags override it")->check(CLI::ExistingFile);
  std::map<std::string, std::string> run_values;
  for (const char* key : kRunKeys) {
    run_cmd->add_option(std::string("--") + key, run_values[key]);
  }
  run_cmd->get_option("--scheme")->description("svm1 | svm2 | savcn | ficn");
  run_cmd->get_option("--init")->description("taylor | coarsening | file:<path.svmf>");
  run_cmd->get_option("--snapshot-at")->description("comma-separated snapshot times");
  run_cmd->get_option("--out")->description("output directory");

  auto* exp_cmd = app.add_subcommand("experiment", "Run a comparison study");
  ExperimentArgs exp;
  exp_cmd->add_option("name", exp.name, "refine | cpu | coarsen")->required();
  exp_cmd->add_option("--profile", exp.profile, "desk | paper");
  exp_cmd->add_option("--out", exp.out, "output directory");
  exp_cmd->add_option("--n", exp.n, "override grid size");
  exp_cmd->add_option("--levels", exp.levels, "refine: number of step sizes");
  exp_cmd->add_option("--t-end", exp.t_end, "override final time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version arrive here with status 0.
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      std::map<std::string, std::string> given;
      for (const char* key : kRunKeys) {
        if (run_cmd->count(std::string("--") + key) > 0) given[key] = run_values[key];
      }
      return run_command(config_path, given);
    }
    return experiment_command(exp);
  } catch (const svmch::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const svmch::StepFailure& e) {
    std::cerr << "step failure: " << e.what() << '\n';
    return kExitStepFailure;
  } catch (const svmch::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}
