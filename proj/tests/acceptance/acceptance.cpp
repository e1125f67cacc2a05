// Acceptance checks for the solver. Prints one PASS/FAIL line per criterion
// and exits nonzero if any criterion fails. Tolerances are fixed here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "svmch/config.hpp"
#include "svmch/diagnostics.hpp"
#include "svmch/experiments.hpp"
#include "svmch/initial.hpp"
#include "svmch/runner.hpp"
#include "svmch/svm_integrator.hpp"

using namespace svmch;

namespace {

constexpr double kOrderLo = 1.8, kOrderHi = 2.2;
constexpr double kConstraintTol = 1e-11;
constexpr double kMonotoneTol = 1e-11;
constexpr double kMassTol = 1e-10;
constexpr int kMassSteps = 10000;
constexpr double kBetaOrderLo = 2.6, kBetaOrderHi = 3.4;
constexpr double kAlphaBound = 0.1;
constexpr double kAlphaAfter = 0.002;
constexpr double kFicnFactor = 2.0;
constexpr double kSvmSavFactor = 3.0;
constexpr int kCpuRounds = 5;
constexpr double kPolyTol = 1e-11;
constexpr double kBetaOracleTol = 1e-10;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_step_increase(const std::vector<StepRecord>& r, bool use_target) {
  double worst = -INFINITY;
  for (std::size_t k = 1; k < r.size(); ++k) {
    const double a = use_target ? r[k - 1].energy_target : r[k - 1].energy;
    const double b = use_target ? r[k].energy_target : r[k].energy;
    worst = std::max(worst, b - a);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// 1-3 share the refinement runs.

RefineReport refine_runs() {
  RefineOptions o;
  o.n = 128;
  o.tau0 = 1.25e-2;
  o.levels = 6;
  o.t_end = 1.0;
  o.epsilon = 1e-2;
  o.lambda = 1e-3;
  o.mode = RefinementMode::AdjacentPairs;
  return run_refine(o);
}

void check_order(const RefineReport& r) {
  bool ok = r.series.size() == 2;
  std::string detail;
  for (const auto& s : r.series) {
    for (const auto& run : s.runs) ok = ok && !run.failure;
    ok = ok && s.slope_l2 >= kOrderLo && s.slope_l2 <= kOrderHi && s.slope_linf >= kOrderLo &&
         s.slope_linf <= kOrderHi;
    detail += std::string(to_string(s.scheme)) + " L2 " + fmt("%.3f", s.slope_l2) + " Linf " +
              fmt("%.3f", s.slope_linf) + "; ";
  }
  report(1, "temporal order", ok, detail + "required [1.8, 2.2]");
}

void check_constraint(const RefineReport& r) {
  double worst = 0.0;
  std::size_t steps = 0;
  for (const auto& s : r.series) {
    for (const auto& run : s.runs) {
      const auto& rec = run.series.records;
      for (std::size_t k = 1; k < rec.size(); ++k) {
        const double scaled = std::abs(rec[k].energy - rec[k].energy_target) / std::max(1.0, std::abs(rec[k].energy_target));
        worst = std::max(worst, scaled);
        ++steps;
      }
    }
  }
  report(2, "energy constraint", steps > 0 && worst <= kConstraintTol,
         "max |F - F~| / max(1,|F~|) = " + fmt("%.2e", worst) + " over " + std::to_string(steps) +
             " steps; required <= 1e-11");
}

// ---------------------------------------------------------------------------

void check_dissipation(const RefineReport& refine, const CoarsenReport& coarsen) {
  double svm = -INFINITY;
  for (const auto& s : refine.series) {
    for (const auto& run : s.runs) svm = std::max(svm, max_step_increase(run.series.records, false));
  }
  for (const auto& row : coarsen.rows) {
    if (row.entry.scheme != Scheme::SavCn) svm = std::max(svm, max_step_increase(row.outcome.series.records, false));
  }

  double sav = -INFINITY;
  for (const auto& row : coarsen.rows) {
    if (row.entry.scheme == Scheme::SavCn) sav = std::max(sav, max_step_increase(row.outcome.series.records, true));
  }
  SchemeConfig c;
  c.scheme = Scheme::SavCn;
  c.tau = 1e-2;
  sav = std::max(sav, max_step_increase(run(c).series.records, true));

  double ficn = -INFINITY;
  c.scheme = Scheme::Ficn;
  const RunOutcome f1 = run(c);
  ficn = std::max(ficn, max_step_increase(f1.series.records, false));
  SchemeConfig fc;
  fc.scheme = Scheme::Ficn;
  fc.n = 64;
  fc.lambda = 1.0;
  fc.init = "coarsening";
  fc.tau = 1e-5;
  fc.t_end = 2e-3;
  const RunOutcome f2 = run(fc);
  ficn = std::max(ficn, max_step_increase(f2.series.records, false));
  const double ficn_tol = 10 * c.picard_tol;

  const bool ok = svm <= kMonotoneTol && sav <= kMonotoneTol && ficn <= ficn_tol && !f1.failure && !f2.failure;
  report(3, "dissipation", ok,
         "max per-step increase: svm " + fmt("%.2e", svm) + ", savcn (modified) " + fmt("%.2e", sav) + ", ficn " +
             fmt("%.2e", ficn) + "; required <= 1e-11");
}

// ---------------------------------------------------------------------------

void check_mass() {
  std::string detail;
  bool ok = true;
  for (Scheme s : {Scheme::Svm1, Scheme::Svm2, Scheme::SavCn, Scheme::Ficn}) {
    SchemeConfig c;
    c.scheme = s;
    c.n = 64;
    c.epsilon = 1e-2;
    c.lambda = 1.0;
    c.init = "coarsening";
    c.tau = 2e-6;
    c.t_end = kMassSteps * c.tau;
    const RunOutcome out = run(c);
    const auto& rec = out.series.records;
    double drift = 0.0;
    for (const auto& r : rec) drift = std::max(drift, std::abs(r.mass - rec.front().mass));
    const bool done = !out.failure && rec.back().step == kMassSteps;
    ok = ok && done && drift <= kMassTol;
    detail += std::string(to_string(s)) + " " + fmt("%.1e", drift) + (done ? "" : " (incomplete)") + "; ";
  }
  report(4, "mass conservation", ok, detail + std::to_string(kMassSteps) + " steps, required <= 1e-10");
}

// ---------------------------------------------------------------------------

void check_beta_order() {
  std::vector<double> betas;
  std::string detail;
  bool ok = true;
  for (int k = 0; k <= 5; ++k) {
    SchemeConfig c;
    c.scheme = Scheme::Svm2;
    c.n = 128;
    c.tau = 1e-2 * std::pow(2.0, -k);
    // Resolve beta to rounding instead of accepting beta = 0 once the
    // constraint holds to the default 1e-13.
    c.newton_tol = 1e-30;
    Simulation sim(c);
    for (int step = 0; step < 6; ++step) sim.advance();
    const double b = std::abs(sim.current_record().beta);
    ok = ok && b > 0.0;
    betas.push_back(b);
    detail += fmt("%.2e", b) + " ";
  }
  const double slope = ok ? order_fit(betas) : 0.0;
  ok = ok && slope >= kBetaOrderLo && slope <= kBetaOrderHi;
  report(5, "beta order", ok, "|beta| at step 6: " + detail + "slope " + fmt("%.3f", slope) + ", required [2.6, 3.4]");
}

// ---------------------------------------------------------------------------

void check_coarsening(const CoarsenReport& r) {
  const CoarsenRow* s2 = r.find(Scheme::Svm2, 1e-4);
  const CoarsenRow* s1 = r.find(Scheme::Svm1, 4e-5);
  const CoarsenRow* sav = r.find(Scheme::SavCn, 4e-5);
  const double theta = r.options.threshold;
  bool ok = s2 && s1 && sav && s2->completed && s1->completed;
  std::string detail;
  if (ok) {
    const double svm_dev = std::max(s2->rel_l2, s1->rel_l2);
    // A SAV-CN run that fails outright also sits above the SVM deviations.
    const bool sav_above = !sav->completed || sav->rel_l2 > svm_dev;
    ok = s2->rel_l2 < theta && s1->rel_l2 < theta && sav_above;
    detail = "rel L2: svm2@1e-4 " + fmt("%.2e", s2->rel_l2) + ", svm1@4e-5 " + fmt("%.2e", s1->rel_l2) +
             ", savcn@4e-5 " + (sav->completed ? fmt("%.2e", sav->rel_l2) : std::string("failed")) +
             "; svm below " + fmt("%.0e", theta) + ", savcn above svm";
  } else {
    detail = "ladder entries missing or failed";
  }
  report(6, "coarsening ordering", ok, detail);
}

void check_alpha(const CoarsenReport& r) {
  double worst = 0.0;
  bool any = false;
  for (const auto& row : r.rows) {
    if (row.entry.scheme == Scheme::SavCn) continue;
    any = true;
    for (const auto& rec : row.outcome.series.records) {
      if (rec.t > kAlphaAfter + 1e-12) worst = std::max(worst, std::abs(rec.alpha));
    }
  }
  report(7, "alpha trace", any && worst <= kAlphaBound,
         "max |alpha| for t > 0.002 over SVM coarsening runs = " + fmt("%.3e", worst) + "; required <= 0.1");
}

// ---------------------------------------------------------------------------

void check_cost() {
  // Best of several interleaved rounds, to damp scheduling noise.
  CpuOptions o;
  o.sizes = {128};
  o.tau = 1e-2;
  o.t_end = 1.0;
  std::array<double, 4> best;
  best.fill(INFINITY);
  const std::array<Scheme, 4> schemes{Scheme::Svm1, Scheme::Svm2, Scheme::SavCn, Scheme::Ficn};
  bool completed = true;
  for (int round = 0; round < kCpuRounds; ++round) {
    const CpuReport rep = run_cpu(o);
    for (std::size_t i = 0; i < schemes.size(); ++i) best[i] = std::min(best[i], rep.wall(schemes[i], 128));
    for (const auto& row : rep.rows) completed = completed && row.completed;
  }
  const double w1 = best[0], w2 = best[1], ws = best[2], wf = best[3];
  const double ficn_ratio = wf / w2;
  const double spread = std::max({w1, w2, ws}) / std::min({w1, w2, ws});
  const bool ok = completed && ficn_ratio >= kFicnFactor && spread <= kSvmSavFactor;
  report(8, "cost ordering", ok,
         "wall s: svm1 " + fmt("%.3f", w1) + ", svm2 " + fmt("%.3f", w2) + ", savcn " + fmt("%.3f", ws) + ", ficn " +
             fmt("%.3f", wf) + "; ficn/svm2 " + fmt("%.2f", ficn_ratio) + " (>= 2), svm/savcn spread " +
             fmt("%.2f", spread) + " (<= 3)");
}

// ---------------------------------------------------------------------------

// All complex roots of c0 + c1 x + ... + c4 x^4 by Durand-Kerner iteration.
std::array<std::complex<double>, 4> quartic_roots(const std::array<double, 5>& c) {
  using C = std::complex<double>;
  const double lead = c[4];
  auto p = [&](C x) { return (((x + c[3] / lead) * x + c[2] / lead) * x + c[1] / lead) * x + c[0] / lead; };
  std::array<C, 4> z;
  const C seed(0.4, 0.9);
  z[0] = 1.0;
  for (int i = 1; i < 4; ++i) z[i] = z[i - 1] * seed;
  for (int it = 0; it < 2000; ++it) {
    double moved = 0.0;
    for (int i = 0; i < 4; ++i) {
      C den = 1.0;
      for (int j = 0; j < 4; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const C step = p(z[i]) / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-16) break;
  }
  // Polish each root with Newton on the original polynomial.
  for (auto& x : z) {
    for (int it = 0; it < 5; ++it) {
      const C f = (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
      const C d = ((4.0 * c[4] * x + 3.0 * c[3]) * x + 2.0 * c[2]) * x + c[1];
      if (std::abs(d) == 0.0) break;
      x -= f / d;
    }
  }
  return z;
}

RealField random_smooth(const GridPtr& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> mode(-4, 4);
  std::vector<std::array<double, 4>> terms;
  for (int i = 0; i < 8; ++i) terms.push_back({u(rng), double(mode(rng)), double(mode(rng)), u(rng)});
  return RealField::from_function(g, [&](double x, double y) {
    double v = 0.0;
    for (const auto& t : terms) v += scale * t[0] * std::cos(2 * std::numbers::pi * (t[1] * x + t[2] * y) + 3 * t[3]);
    return v;
  });
}

void check_oracles() {
  std::mt19937_64 rng(20240531);

  const GradFlowModel model({1e-2, 1e-3}, Grid2D::create(32));
  double poly_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RealField phi_hat = random_smooth(model.grid_ptr(), rng, 0.3);
    const RealField w = random_smooth(model.grid_ptr(), rng, 0.1);
    const double f_tilde = model.free_energy(phi_hat) - 1e-3;
    const QuarticPoly p = energy_poly(model, phi_hat, w, f_tilde);
    for (double beta : {-0.5, -0.1, -1e-3, 0.0, 1e-2, 0.3, 1.0}) {
      RealField x = phi_hat;
      x.axpy(beta, w);
      poly_err = std::max(poly_err, std::abs(p(beta) - (model.free_energy(x) - f_tilde)));
    }
  }

  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> near(-0.1, 0.1);
  double beta_err = 0.0;
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    QuarticPoly p;
    for (int i = 1; i <= 4; ++i) p.c[i] = coef(rng);
    const double r = near(rng);
    p.c[0] = -(p.c[1] * r + p.c[2] * r * r + p.c[3] * r * r * r + p.c[4] * r * r * r * r);

    double nearest = INFINITY;
    for (const auto& z : quartic_roots(p.c)) {
      if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z)) && std::abs(z.real()) < std::abs(nearest)) {
        nearest = z.real();
      }
    }
    double got = NAN;
    try {
      got = solve_beta(p, 1e-15, 100).beta;
    } catch (const std::exception&) {
    }
    const double err = std::abs(got - nearest);
    if (!(err <= kBetaOracleTol)) ++mismatches;
    if (std::isfinite(err)) beta_err = std::max(beta_err, err);
  }

  const bool ok = poly_err <= kPolyTol && mismatches == 0;
  report(9, "oracle equivalence", ok,
         "energy_poly max |diff| " + fmt("%.2e", poly_err) + " on 100 pairs (<= 1e-11); solve_beta " +
             std::to_string(1000 - mismatches) + "/1000 match nearest-zero root, max |diff| " + fmt("%.2e", beta_err));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();

  const RefineReport refine = refine_runs();
  check_order(refine);
  check_constraint(refine);

  const CoarsenReport coarsen = run_coarsen(CoarsenOptions::for_profile(Profile::Desk));
  check_dissipation(refine, coarsen);
  check_mass();
  check_beta_order();
  check_coarsening(coarsen);
  check_alpha(coarsen);
  check_cost();
  check_oracles();

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 9 criteria failed (%.0f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
