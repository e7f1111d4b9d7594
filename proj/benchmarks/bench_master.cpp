#include <benchmark/benchmark.h>

#include "ste/shortcut.hpp"

using namespace ste;

namespace {

// Full protocol design (bracket scan + golden section), the inner loop of a
// fidelity-vs-duration sweep.
void design_protocol(benchmark::State& state) {
    ModelParams params;
    params.omegaf = 3.0;
    const BathSpec bath{0.002, 100.0, 600};
    for (auto _ : state) {
        const STEResult res = design_ste(params, bath, static_cast<double>(state.range(0)));
        benchmark::DoNotOptimize(res.predicted_fidelity);
    }
}

void moment_propagation(benchmark::State& state) {
    ModelParams params;
    params.omegaf = 3.0;
    const BathSpec bath{0.002, 100.0, 600};
    const PolynomialScaling scaling = solve_boundary_coefficients(params, 16.0, 31.0);
    MomentState init;
    init.n_occ = planck_occupation(1.0, 1.0);
    MomentOptions opts;
    opts.n_samples = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto traj = propagate_moments(scaling, bath, params, init, opts);
        benchmark::DoNotOptimize(traj.back().n_occ);
    }
}

}  // namespace

BENCHMARK(design_protocol)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(moment_propagation)->Arg(8)->Arg(2000)->Unit(benchmark::kMillisecond);
