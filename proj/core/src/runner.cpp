#include "svmch/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "svmch/errors.hpp"
#include "svmch/initial.hpp"
#include "svmch/io.hpp"

namespace svmch {

namespace {

GradFlowModel make_model(const SchemeConfig& config) {
  config.validate();
  return GradFlowModel(config.params(), Grid2D::create(config.n), GradFlowModel::Options{config.dealias});
}

}  // namespace

Simulation::Simulation(const SchemeConfig& config)
    : Simulation(config, init_field(config.init, Grid2D::create(config.n))) {}

Simulation::Simulation(const SchemeConfig& config, RealField initial)
    : config_(config),
      model_(make_model(config)),
      cn_(cn_symbols(model_, config.tau)),
      phi_(std::move(initial)),
      phi_hat_(model_.grid_ptr()),
      phi_prev_(phi_) {
  if (phi_.grid().n() != config_.n) throw ConfigError("initial field size does not match n");
  // Operate on the model's grid so every field shares one set of plans.
  phi_ = RealField(model_.grid_ptr(), std::span<const double>(phi_.values()));
  phi_prev_ = phi_;
  phi_hat_ = fft_forward(phi_);

  record_.step = 0;
  record_.t = 0.0;
  record_.energy = model_.free_energy(phi_, phi_hat_);
  record_.mass = mean(phi_);
  record_.energy_target = record_.energy;
  if (config_.scheme == Scheme::SavCn) {
    SavState s = sav_init(model_, phi_, config_.c0);
    sav_r_ = s.r;
    record_.energy_target = sav_modified_energy(model_, s);
  }
}

const StepRecord& Simulation::advance() {
  const auto start = std::chrono::steady_clock::now();
  StepRecord next;
  next.step = record_.step + 1;
  next.t = static_cast<double>(next.step) * config_.tau;

  RealField phi_next(model_.grid_ptr());
  SpectralField phi_next_hat(model_.grid_ptr());
  switch (config_.scheme) {
    case Scheme::Svm1:
    case Scheme::Svm2: {
      const SvmVariant variant = config_.scheme == Scheme::Svm1 ? SvmVariant::SvmI : SvmVariant::SvmII;
      const SvmOptions opts{config_.newton_tol, config_.max_newton_iters, config_.beta_limit};
      SvmStepResult r = svm_step(model_, phi_, phi_hat_, phi_prev_, variant, cn_, opts, record_.energy);
      phi_next = std::move(r.phi_next);
      phi_next_hat = std::move(r.phi_next_hat);
      next.energy = r.energy_next;
      next.energy_target = r.energy_target;
      next.alpha = r.alpha;
      next.beta = r.beta;
      next.solver_iters = r.newton_iters;
      next.dissipation = r.dissipation;
      break;
    }
    case Scheme::SavCn: {
      SavStepResult r = sav_step(model_, SavState{phi_, sav_r_, config_.c0}, phi_hat_, phi_prev_, cn_);
      sav_r_ = r.next.r;
      phi_next = std::move(r.next.phi);
      phi_next_hat = std::move(r.phi_next_hat);
      next.energy = model_.free_energy(phi_next, phi_next_hat);
      next.energy_target = r.modified_energy;
      next.dissipation = r.dissipation;
      break;
    }
    case Scheme::Ficn: {
      FicnStepResult r = ficn_step(model_, phi_, phi_hat_, cn_, FicnOptions{config_.picard_tol, config_.max_picard_iters});
      phi_next = std::move(r.phi_next);
      phi_next_hat = std::move(r.phi_next_hat);
      next.energy = r.energy_next;
      next.energy_target = record_.energy - config_.tau * r.dissipation;
      next.solver_iters = r.iters;
      next.dissipation = r.dissipation;
      break;
    }
  }
  next.mass = mean(phi_next);
  if (!phi_next.all_finite() || !std::isfinite(next.energy)) {
    throw StepFailure(StepFailureKind::NonFinite, "step " + std::to_string(next.step) + " produced NaN/Inf");
  }

  phi_prev_ = std::move(phi_);
  phi_ = std::move(phi_next);
  phi_hat_ = std::move(phi_next_hat);
  next.wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  record_ = next;
  return record_;
}

RunOutcome run(const SchemeConfig& config) {
  config.validate();
  return run(config, init_field(config.init, Grid2D::create(config.n)));
}

RunOutcome run(const SchemeConfig& config, RealField initial) {
  Simulation sim(config, std::move(initial));
  const std::int64_t steps = config.step_count();

  std::set<std::int64_t> snapshot_steps;
  for (double t : config.snapshot_times) {
    snapshot_steps.insert(std::min<std::int64_t>(steps, std::llround(t / config.tau)));
  }

  RunOutcome out{RunSeries{config.to_text(), {}, {}}, sim.phi(), std::nullopt};
  out.series.records.reserve(static_cast<std::size_t>(steps) + 1);
  auto take = [&]() {
    out.series.records.push_back(sim.current_record());
    if (snapshot_steps.count(sim.step())) out.series.snapshots.push_back(Snapshot{sim.step(), sim.time(), sim.phi()});
  };
  take();
  while (sim.step() < steps) {
    try {
      sim.advance();
    } catch (const StepFailure& e) {
      out.failure = RunFailure{sim.step() + 1, e.what()};
      break;
    }
    take();
  }
  out.final_phi = sim.phi();
  return out;
}

void write_run_outputs(const std::filesystem::path& dir, const RunOutcome& outcome) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  write_run_csv(dir / "run.csv", outcome.series.records);
  write_text_file(dir / "config.txt", outcome.series.config_echo);
  for (const auto& snap : outcome.series.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "snap_%08lld", static_cast<long long>(snap.step));
    write_snapshot_raw(dir / (std::string(name) + ".svmf"), snap.phi);
    write_snapshot_pgm(dir / (std::string(name) + ".pgm"), snap.phi);
  }
  write_snapshot_raw(dir / "final.svmf", outcome.final_phi);
  write_snapshot_pgm(dir / "final.pgm", outcome.final_phi);
  if (outcome.failure) {
    write_text_file(dir / "failure.txt",
                    "step " + std::to_string(outcome.failure->step) + ": " + outcome.failure->message + "\n");
  }
}

}  // namespace svmch
