#include <benchmark/benchmark.h>

#include "ste/gaussian.hpp"
#include "ste/shortcut.hpp"

using namespace ste;

namespace {

ModelParams compression_params() {
    ModelParams p;
    p.omegaf = 3.0;
    return p;
}

FrequencyProfile chirp(double duration) {
    FrequencyProfile prof;
    prof.duration = duration;
    prof.omega_sq = [](double t) {
        const double s = std::sin(0.7 * t);
        return 1.0 + 2.0 * s * s;
    };
    return prof;
}

// One RK4 step of the full-trajectory engine at the paper's bath size,
// measured through a short run.
void exact_trajectory_steps(benchmark::State& state) {
    const ModelParams params = compression_params();
    BathSpec bath{0.002, 100.0, static_cast<int>(state.range(0))};
    const BathModes modes = discretize_bath(bath);
    gauss::ExactOptions opts;
    opts.dt = 1e-3;
    opts.n_samples = 1;
    const FrequencyProfile prof = chirp(0.05);  // 50 steps per run
    for (auto _ : state) {
        const auto traj = gauss::evolve_exact(prof, modes, params, opts);
        benchmark::DoNotOptimize(traj.sigma_s.back());
    }
    state.counters["step_ms"] =
        benchmark::Counter(1e3 * 0.05 / 1e-3, benchmark::Counter::kIsIterationInvariantRate |
                                                  benchmark::Counter::kInvert);
}

void exact_final_adjoint(benchmark::State& state) {
    const ModelParams params = compression_params();
    BathSpec bath{0.002, 100.0, static_cast<int>(state.range(0))};
    const BathModes modes = discretize_bath(bath);
    const FrequencyProfile prof = chirp(1.0);
    for (auto _ : state) {
        const auto fin = gauss::evolve_exact_final(prof, modes, params, 1e-3);
        benchmark::DoNotOptimize(fin.sigma_s);
    }
}

}  // namespace

BENCHMARK(exact_trajectory_steps)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(exact_final_adjoint)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);
