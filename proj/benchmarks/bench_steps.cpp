#include <benchmark/benchmark.h>

#include "svmch/ficn.hpp"
#include "svmch/initial.hpp"
#include "svmch/sav_cn.hpp"
#include "svmch/svm_integrator.hpp"

namespace {

svmch::GradFlowModel make_model(std::size_t n) {
  return svmch::GradFlowModel(svmch::ChParams{1e-2, 1e-3}, svmch::Grid2D::create(n));
}

void BM_FftRoundTrip(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const auto phi = svmch::taylor_field(model.grid_ptr());
  for (auto _ : state) {
    auto back = svmch::fft_inverse(svmch::fft_forward(phi));
    benchmark::DoNotOptimize(back.values().data());
  }
}
BENCHMARK(BM_FftRoundTrip)->Arg(128)->Arg(256);

void BM_FreeEnergy(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const auto phi = svmch::coarsening_field(model.grid_ptr());
  for (auto _ : state) benchmark::DoNotOptimize(model.free_energy(phi));
}
BENCHMARK(BM_FreeEnergy)->Arg(128)->Arg(256);

void BM_SvmStep(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const auto variant = state.range(1) == 1 ? svmch::SvmVariant::SvmI : svmch::SvmVariant::SvmII;
  const auto cn = svmch::cn_symbols(model, 1e-2);
  const auto phi = svmch::taylor_field(model.grid_ptr());
  for (auto _ : state) {
    auto r = svmch::svm_step(model, phi, phi, variant, cn);
    benchmark::DoNotOptimize(r.beta);
  }
}
BENCHMARK(BM_SvmStep)->Args({128, 1})->Args({128, 2})->Args({256, 2});

void BM_SavStep(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const auto cn = svmch::cn_symbols(model, 1e-2);
  const auto s = svmch::sav_init(model, svmch::taylor_field(model.grid_ptr()));
  for (auto _ : state) {
    auto r = svmch::sav_step(model, s, s.phi, cn);
    benchmark::DoNotOptimize(r.next.r);
  }
}
BENCHMARK(BM_SavStep)->Arg(128)->Arg(256);

void BM_FicnStep(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  const auto cn = svmch::cn_symbols(model, 1e-2);
  const auto phi = svmch::taylor_field(model.grid_ptr());
  for (auto _ : state) {
    auto r = svmch::ficn_step(model, phi, cn);
    benchmark::DoNotOptimize(r.iters);
  }
}
BENCHMARK(BM_FicnStep)->Arg(128)->Arg(256);

void BM_SolveBeta(benchmark::State& state) {
  const svmch::QuarticPoly poly{{-1e-6, 1.0, 0.3, -0.2, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(svmch::solve_beta(poly, 1e-13, 50).beta);
}
BENCHMARK(BM_SolveBeta);

}  // namespace

BENCHMARK_MAIN();
