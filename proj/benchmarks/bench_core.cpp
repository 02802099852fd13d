#include <benchmark/benchmark.h>

#include <memory>

#include "plastiq/dissipation.hpp"
#include "plastiq/energy.hpp"
#include "plastiq/geometry.hpp"
#include "plastiq/random.hpp"
#include "plastiq/scenario.hpp"
#include "plastiq/solver.hpp"
#include "plastiq/state.hpp"

using namespace plastiq;

namespace {

std::shared_ptr<const Mesh> square(int n) { return std::make_shared<const Mesh>(Mesh::unit_square(n)); }

// Affine admissible state; cheap to build on fine meshes.
State affine_state(std::shared_ptr<const Mesh> mesh, Rng& rng) {
    Field yp = affine_field(mesh, random_sl(rng, 2, 0.3));
    recenter(yp);
    return State{affine_field(mesh, Mat::identity(2) + random_matrix(rng, 2, -0.1, 0.1)), yp};
}

void BM_TotalEnergy(benchmark::State& st) {
    auto mesh = square(static_cast<int>(st.range(0)));
    Rng rng(1);
    const State s = affine_state(mesh, rng);
    const EnergyModel m;
    const Loading l = Loading::uniform(mesh, {0.0, 1.0}, {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}});
    for (auto _ : st) benchmark::DoNotOptimize(total_energy(m, l, 0.5, s).total);
    st.SetItemsProcessed(st.iterations() * static_cast<long>(mesh->element_count()));
}
BENCHMARK(BM_TotalEnergy)->Arg(4)->Arg(16)->Arg(64);

void BM_EulerianEnergy(benchmark::State& st) {
    auto mesh = square(static_cast<int>(st.range(0)));
    Rng rng(2);
    const State s = affine_state(mesh, rng);
    const EnergyModel m;
    for (auto _ : st) benchmark::DoNotOptimize(eulerian_elastic_energy(m, s));
}
BENCHMARK(BM_EulerianEnergy)->Arg(8)->Arg(32);

void BM_OneStepDistance(benchmark::State& st) {
    Rng rng(3);
    std::vector<Mat> fs;
    for (int i = 0; i < 256; ++i) fs.push_back(random_sl(rng, 2, 1.0));
    const DissipationModel m;
    std::size_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(one_step_distance(fs[i++ & 255], m));
}
BENCHMARK(BM_OneStepDistance);

void BM_DeltaEstimate(benchmark::State& st) {
    Rng rng(4);
    const Mat f = random_sl(rng, 2, 1.0);
    const DissipationModel m;
    for (auto _ : st) benchmark::DoNotOptimize(delta_estimate(f, static_cast<std::size_t>(st.range(0)), m).value);
}
BENCHMARK(BM_DeltaEstimate)->Arg(1)->Arg(4);

void BM_ProjectIsochoric(benchmark::State& st) {
    auto mesh = square(static_cast<int>(st.range(0)));
    Rng rng(5);
    const Field f = perturb_field(identity_field(mesh), rng, 0.1 / static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(project_isochoric(f, 1e-8, 20000).values.data());
}
BENCHMARK(BM_ProjectIsochoric)->Arg(4)->Arg(8);

void BM_CiarletNecas(benchmark::State& st) {
    auto mesh = square(static_cast<int>(st.range(0)));
    const Field f = identity_field(mesh);
    for (auto _ : st) benchmark::DoNotOptimize(ciarlet_necas_check(f).margin);
}
BENCHMARK(BM_CiarletNecas)->Arg(4)->Arg(16);

void BM_JonesSlit(benchmark::State& st) {
    const Polygon slit = load_polygon(std::string(PLASTIQ_SCENARIO_DIR) + "/geom/slit.json");
    for (auto _ : st) benchmark::DoNotOptimize(jones_verify(slit, 0.5, 0.5, 500, 1).pairs_checked);
}
BENCHMARK(BM_JonesSlit)->Unit(benchmark::kMillisecond);

void BM_IncrementalSolve(benchmark::State& st) {
    auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(static_cast<int>(st.range(0)), SquareSides::all()));
    EnergyOptions o;
    o.dirichlet_weight = 4.0;
    DissipationModel d;
    d.det_tolerance = 1e-5;
    const Problem pr{EnergyModel(o), d, Loading::uniform(mesh, {0.0, 1.0}, {{0, 0}, {0.2, -0.4}}, {{0, 0}, {0, 0}})};
    const State ref = reference_state(mesh);
    for (auto _ : st) benchmark::DoNotOptimize(incremental_solve(ref, 0.5, pr, SolverConfig{}).y.values.data());
}
BENCHMARK(BM_IncrementalSolve)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Toy1d(benchmark::State& st) {
    const TimeGrid g = TimeGrid::uniform(1.0, 40);
    for (auto _ : st) benchmark::DoNotOptimize(run_1d_toy(2.0, g).size());
}
BENCHMARK(BM_Toy1d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
