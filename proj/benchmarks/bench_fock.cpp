#include <benchmark/benchmark.h>

#include "ste/fock.hpp"

using namespace ste;

namespace {

void uhlmann_fidelity(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const fock::Mat a = fock::squeezed_thermal_state(1.0, 0.5, 0.3, dim);
    const fock::Mat b = fock::thermal_state(0.5, dim);
    for (auto _ : state) benchmark::DoNotOptimize(fock::fidelity(a, b));
}

void lindblad_rhs_roundtrip(benchmark::State& state) {
    // short Lindblad propagation in the truncated basis
    ModelParams params;
    params.omegaf = 3.0;
    const BathSpec bath{0.002, 100.0, 600};
    const PolynomialScaling scaling = solve_boundary_coefficients(params, 16.0, 31.0);
    const int dim = static_cast<int>(state.range(0));
    fock::FockLindbladOptions opts;
    opts.sample_times = {0.0, 1.0};
    const fock::Mat rho0 = fock::thermal_state(0.582, dim);
    for (auto _ : state) {
        const auto res = fock::lindblad_propagate(scaling, bath, params, rho0, opts);
        benchmark::DoNotOptimize(res.n_occ.back());
    }
}

}  // namespace

BENCHMARK(uhlmann_fidelity)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(lindblad_rhs_roundtrip)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
