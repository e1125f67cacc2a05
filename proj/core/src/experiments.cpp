#include "svmch/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "svmch/errors.hpp"
#include "svmch/io.hpp"

namespace svmch {

namespace {

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string tau_tag(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", tau);
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

Profile parse_profile(std::string_view name) {
  if (name == "desk") return Profile::Desk;
  if (name == "paper") return Profile::Paper;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected desk or paper)");
}

const char* to_string(Profile p) { return p == Profile::Desk ? "desk" : "paper"; }

unsigned harness_threads(std::size_t jobs) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SVM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) threads = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, jobs)));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = harness_threads(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Refinement -----------------------------------------------------------------

RefineReport run_refine(const RefineOptions& options) {
  if (options.levels < 2) throw ConfigError("refine needs at least two levels");
  const std::size_t levels = static_cast<std::size_t>(options.levels);
  const std::size_t jobs = options.schemes.size() * levels;
  auto tau_at = [&](std::size_t k) { return options.tau0 / std::ldexp(1.0, static_cast<int>(k)); };

  std::vector<std::optional<RunOutcome>> slots(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    SchemeConfig cfg;
    cfg.scheme = options.schemes[job / levels];
    cfg.n = options.n;
    cfg.tau = tau_at(job % levels);
    cfg.t_end = options.t_end;
    cfg.epsilon = options.epsilon;
    cfg.lambda = options.lambda;
    cfg.init = options.init;
    slots[job] = run(cfg);
  });

  RefineReport report;
  for (std::size_t si = 0; si < options.schemes.size(); ++si) {
    RefineSeries series;
    series.scheme = options.schemes[si];
    std::vector<RealField> finals;
    for (std::size_t k = 0; k < levels; ++k) {
      RunOutcome& r = *slots[si * levels + k];
      if (r.failure) {
        throw StepFailure(StepFailureKind::RootDiverged,
                          std::string("refinement run failed: ") + r.failure->message);
      }
      series.taus.push_back(tau_at(k));
      finals.push_back(r.final_phi);
      series.runs.push_back(std::move(r));
    }
    series.errors = refinement_errors(finals, options.mode);
    std::vector<double> l2, linf;
    for (const auto& e : series.errors) {
      l2.push_back(e.l2);
      linf.push_back(e.linf);
    }
    series.slope_l2 = order_fit(l2);
    series.slope_linf = order_fit(linf);
    report.series.push_back(std::move(series));
  }
  return report;
}

void write_refine_report(const std::filesystem::path& dir, const RefineReport& report) {
  ensure_dir(dir);
  std::ostringstream errors, slopes;
  errors << "scheme,k,tau,l2,linf\n";
  slopes << "scheme,slope_l2,slope_linf\n";
  for (const auto& s : report.series) {
    for (std::size_t k = 0; k < s.errors.size(); ++k) {
      errors << to_string(s.scheme) << ',' << k + 1 << ',' << fmt17(s.taus[k]) << ',' << fmt17(s.errors[k].l2) << ','
             << fmt17(s.errors[k].linf) << '\n';
    }
    slopes << to_string(s.scheme) << ',' << fmt17(s.slope_l2) << ',' << fmt17(s.slope_linf) << '\n';
    for (std::size_t k = 0; k < s.runs.size(); ++k) {
      write_run_outputs(dir / (std::string(to_string(s.scheme)) + "_tau" + tau_tag(s.taus[k])), s.runs[k]);
    }
  }
  write_text_file(dir / "refine_errors.csv", errors.str());
  write_text_file(dir / "refine_slopes.csv", slopes.str());
}

// CPU time -------------------------------------------------------------------

double CpuReport::wall(Scheme scheme, std::size_t n) const {
  for (const auto& r : rows) {
    if (r.scheme == scheme && r.n == n) return r.wall_seconds;
  }
  return -1.0;
}

CpuReport run_cpu(const CpuOptions& options) {
  CpuReport report;
  for (std::size_t n : options.sizes) {
    for (Scheme s : options.schemes) {
      SchemeConfig cfg;
      cfg.scheme = s;
      cfg.n = n;
      cfg.tau = options.tau;
      cfg.t_end = options.t_end;
      cfg.epsilon = options.epsilon;
      cfg.lambda = options.lambda;
      cfg.init = options.init;
      cfg.validate();

      // Initial data and plans are built outside the timed region.
      Simulation sim(cfg);
      const std::int64_t steps = cfg.step_count();
      CpuRow row{s, n};
      double iters = 0.0;
      const auto start = std::chrono::steady_clock::now();
      try {
        while (sim.step() < steps) iters += sim.advance().solver_iters;
        row.completed = true;
      } catch (const StepFailure&) {
        row.completed = false;
      }
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.steps = sim.step();
      row.mean_solver_iters = row.steps > 0 ? iters / static_cast<double>(row.steps) : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_cpu_report(const std::filesystem::path& dir, const CpuReport& report) {
  ensure_dir(dir);
  std::ostringstream os;
  os << "scheme,n,wall_seconds,steps,mean_solver_iters,completed\n";
  for (const auto& r : report.rows) {
    os << to_string(r.scheme) << ',' << r.n << ',' << fmt17(r.wall_seconds) << ',' << r.steps << ','
       << fmt17(r.mean_solver_iters) << ',' << (r.completed ? 1 : 0) << '\n';
  }
  write_text_file(dir / "cpu_times.csv", os.str());
}

// Coarsening -----------------------------------------------------------------

CoarsenOptions CoarsenOptions::for_profile(Profile profile) {
  CoarsenOptions o;
  if (profile == Profile::Desk) {
    o.t_end = 0.02;
    o.reference_tau = 2.5e-6;
    o.ladder = {{Scheme::Svm2, 2e-4},  {Scheme::Svm2, 1e-4},  {Scheme::Svm1, 5e-5},
                {Scheme::Svm1, 4e-5},  {Scheme::SavCn, 4e-5}, {Scheme::SavCn, 1e-5}};
    o.snapshot_times = {0.002, 0.01};
  } else {
    o.t_end = 0.1;
    o.reference_tau = 1e-6;
    o.ladder = {{Scheme::Svm2, 2e-4},       {Scheme::Svm2, 1.5625e-4}, {Scheme::Svm1, 5e-5},
                {Scheme::Svm1, 4e-5},       {Scheme::SavCn, 3.125e-6}, {Scheme::SavCn, 1.5625e-6}};
    o.snapshot_times = {0.01, 0.05};
  }
  return o;
}

const CoarsenRow* CoarsenReport::find(Scheme scheme, double tau) const {
  for (const auto& r : rows) {
    if (r.entry.scheme == scheme && std::abs(r.entry.tau - tau) <= 1e-12 * tau) return &r;
  }
  return nullptr;
}

CoarsenReport run_coarsen(const CoarsenOptions& options) {
  auto make_config = [&](Scheme s, double tau) {
    SchemeConfig cfg;
    cfg.scheme = s;
    cfg.n = options.n;
    cfg.tau = tau;
    cfg.t_end = options.t_end;
    cfg.epsilon = options.epsilon;
    cfg.lambda = options.lambda;
    cfg.init = "coarsening";
    cfg.snapshot_times = options.snapshot_times;
    return cfg;
  };

  // Slot 0 is the reference; the rest follow the ladder.
  std::vector<std::optional<RunOutcome>> slots(options.ladder.size() + 1);
  parallel_for(slots.size(), [&](std::size_t job) {
    slots[job] = job == 0 ? run(make_config(options.reference_scheme, options.reference_tau))
                          : run(make_config(options.ladder[job - 1].scheme, options.ladder[job - 1].tau));
  });
  if (slots[0]->failure) {
    throw StepFailure(StepFailureKind::RootDiverged, "reference run failed: " + slots[0]->failure->message);
  }

  CoarsenReport report{options, std::move(*slots[0]), {}};
  const RealField& ref = report.reference.final_phi;
  const double ref_norm = std::sqrt(inner_product(ref, ref));
  for (std::size_t i = 0; i < options.ladder.size(); ++i) {
    CoarsenRow row{options.ladder[i], 0.0, {}, false, false, std::move(*slots[i + 1])};
    row.completed = !row.outcome.failure;
    if (row.completed) {
      row.abs = error_norms(row.outcome.final_phi, ref);
      row.rel_l2 = row.abs.l2 / ref_norm;
    } else {
      const double inf = std::numeric_limits<double>::infinity();
      row.abs = {inf, inf};
      row.rel_l2 = inf;
    }
    row.matches = row.completed && row.rel_l2 < options.threshold;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_coarsen_report(const std::filesystem::path& dir, const CoarsenReport& report) {
  ensure_dir(dir);
  std::ostringstream os;
  os << "scheme,tau,completed,rel_l2,l2,linf,matches_reference\n";
  for (const auto& r : report.rows) {
    os << to_string(r.entry.scheme) << ',' << fmt17(r.entry.tau) << ',' << (r.completed ? 1 : 0) << ','
       << fmt17(r.rel_l2) << ',' << fmt17(r.abs.l2) << ',' << fmt17(r.abs.linf) << ',' << (r.matches ? 1 : 0) << '\n';
  }
  write_text_file(dir / "coarsen_summary.csv", os.str());
  write_run_outputs(dir / "reference", report.reference);
  for (const auto& r : report.rows) {
    write_run_outputs(dir / (std::string(to_string(r.entry.scheme)) + "_tau" + tau_tag(r.entry.tau)), r.outcome);
  }
}

}  // namespace svmch
