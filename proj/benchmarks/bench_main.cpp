#include <benchmark/benchmark.h>

#include "mbgk/relaxation.hpp"
#include "mbgk/scenarios.hpp"
#include "mbgk/transport.hpp"

using namespace mbgk;

namespace {

std::array<Species, 2> pair() { return {Species{1.0, 0, "a"}, Species{1.5, 0, "b"}}; }

void BM_CellRelaxation(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto sp = pair();
    const VelocityGrid g1 = build_grid(sp[0], {0.0, 0.0, 0.0}, 0.6, N);
    const VelocityGrid g2 = build_grid(sp[1], {0.0, 0.0, 0.0}, 0.6, N);
    const std::array<const VelocityGrid*, 2> grids{&g1, &g2};
    const auto f1 = maxwellian(sp[0], 1.0, {0.2, 0.0, 0.0}, 0.5, g1);
    const auto f2 = maxwellian(sp[1], 0.5, {-0.1, 0.0, 0.0}, 0.7, g2);
    CollisionModel model(FrequencyModel{FrequencyFamily::PowerLaw, FrequencyAveraging::VelocityDependent, 10.0}, sp,
                         grids);
    for (auto _ : state) benchmark::DoNotOptimize(implicit_relax(f1, f2, 0.1, model, sp, grids));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g1.size()));
}
BENCHMARK(BM_CellRelaxation)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_Transport(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const VelocityGrid g({-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}, N);
    const SpatialMesh mesh{0.0, 1.0, 100, Boundary::Copy};
    PhaseField f(100, g.size(), 1.0), out;
    for (std::size_t r = 0; r < f.data().size(); ++r) f.data()[r] = 1.0 + 1e-3 * static_cast<double>(r % 97);
    for (auto _ : state) {
        apply_transport(f, mesh, g, {2}, out);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.data().size()));
}
BENCHMARK(BM_Transport)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SodStep(benchmark::State& state) {
    ScenarioConfig c = preset("sod");
    c.mesh.cells = 50;
    c.velocity_nodes = static_cast<int>(state.range(0));
    Scenario sc = build_scenario(c);
    const double dt = sc.stepper->cfl_dt();
    for (auto _ : state) sc.stepper->step(sc.state, dt);
}
BENCHMARK(BM_SodStep)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
