#include <benchmark/benchmark.h>

#include <vector>

#include "isoprofile/bounds.hpp"
#include "isoprofile/profile_ode.hpp"
#include "isoprofile/spaceform.hpp"
#include "isoprofile/warped.hpp"

namespace {

using namespace isoprofile;

void BM_sn_power_integral_series(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sn_power_integral(4, 1.0, 0.1));
  }
}
BENCHMARK(BM_sn_power_integral_series);

void BM_sn_power_integral_recurrence(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sn_power_integral(4, 1.0, 2.0));
  }
}
BENCHMARK(BM_sn_power_integral_recurrence);

void BM_model_h2_sphere(benchmark::State& state) {
  const SpaceForm m{3, 1.0};
  const double beta = 0.4 * m.total_volume();
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_h2(m, beta));
  }
}
BENCHMARK(BM_model_h2_sphere);

void BM_model_h1_small_volume(benchmark::State& state) {
  const SpaceForm m{3, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_h1(m, 1e-4));
  }
}
BENCHMARK(BM_model_h1_small_volume);

void BM_whole_manifold_ricci_norm(benchmark::State& state) {
  const WarpedManifold W = WarpedManifold::perturbed_sphere(3, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(W.whole_manifold_ricci_norm(2.0, 1.0).value);
  }
}
BENCHMARK(BM_whole_manifold_ricci_norm);

void BM_C_constant(benchmark::State& state) {
  BoundParams params;
  params.n = 3;
  params.p = 2.0;
  params.k = 1.0;
  params.d = 1.0;
  params.norm = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(C_constant(params));
  }
}
BENCHMARK(BM_C_constant);

void BM_f_error(benchmark::State& state) {
  BoundParams params;
  params.n = 3;
  params.p = 2.0;
  params.k = 1.0;
  params.d = 1.0;
  params.norm = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_error(params, 0.5));
  }
}
BENCHMARK(BM_f_error);

void BM_relative_profile_witness(benchmark::State& state) {
  const SpaceForm m{3, -1.0};
  const double beta = 0.3 * model_volume(m, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relative_profile_witness(m, 1.0, beta));
  }
}
BENCHMARK(BM_relative_profile_witness);

void BM_supersolution_residuals(benchmark::State& state) {
  const SpaceForm m{2, 1.0};
  std::vector<double> grid(257);
  for (int i = 0; i < 257; ++i) grid[i] = 0.01 + 0.98 * i / 256.0;
  const ProfileCurve curve = sample_model_h1(m, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        supersolution_residuals(curve, 1.05, m, m.radial_limit()));
  }
}
BENCHMARK(BM_supersolution_residuals);

void BM_verify_h2_row(benchmark::State& state) {
  const WarpedManifold W = WarpedManifold::perturbed_sphere(2, 0.05);
  const BoundParams params = params_for_manifold(W, 2.0, 1.0);
  const std::vector<double> grid = {0.3 * beta_ceiling(W, 1.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_h2(W, params, grid, 1e-7));
  }
}
BENCHMARK(BM_verify_h2_row);

}  // namespace

BENCHMARK_MAIN();
