// Serial reference vs OpenMP kernels on the Test-4 graphon.
#include "kinsir/config.hpp"
#include "kinsir/opinion_fp.hpp"
#include "kinsir/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace kinsir;

namespace {

struct Setup {
    ScenarioConfig cfg;
    PhaseGrid grid;
    GraphonLattice lattice;
    CompartmentField state;

    explicit Setup(int nx, int nw) : cfg(preset_config(Preset::Test4Leaders))
    {
        cfg.nx = nx;
        cfg.nw = nw;
        grid = PhaseGrid(nx, nw);
        lattice = build_lattice(cfg.graphon, grid.x);
        state = build_initial_condition(cfg, grid);
    }
};

Backend backend(const benchmark::State& st) { return st.range(1) ? Backend::OpenMP : Backend::Serial; }

void BM_profile_full(benchmark::State& st)
{
    const Setup s(static_cast<int>(st.range(0)), 200);
    const auto total = s.state.total();
    for (auto _ : st) benchmark::DoNotOptimize(profile_full(s.grid, s.lattice, total, backend(st)));
}

void BM_assemble(benchmark::State& st)
{
    const Setup s(static_cast<int>(st.range(0)), 200);
    for (auto _ : st) benchmark::DoNotOptimize(assemble_coefficients(s.state, s.cfg.model, s.lattice, backend(st)));
}

void BM_fp_step(benchmark::State& st)
{
    Setup s(static_cast<int>(st.range(0)), 200);
    const FpCoefficients c = assemble_coefficients(s.state, s.cfg.model, s.lattice);
    for (auto _ : st) {
        fp_step(s.state, c, 1e-3, backend(st));
        benchmark::ClobberMemory();
    }
}

}  // namespace

BENCHMARK(BM_profile_full)->ArgsProduct({{20, 80}, {0, 1}})->ArgNames({"nx", "omp"});
BENCHMARK(BM_assemble)->ArgsProduct({{20, 80}, {0, 1}})->ArgNames({"nx", "omp"});
BENCHMARK(BM_fp_step)->ArgsProduct({{20, 80}, {0, 1}})->ArgNames({"nx", "omp"});

BENCHMARK_MAIN();
