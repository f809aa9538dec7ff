#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wm/reflection.hpp"
#include "wm/variant_store.hpp"

namespace {

wm::InputVariant sample(std::size_t idx) {
    return wm::load_variants(std::filesystem::path(WM_SAMPLES_DIR) / "QQ.dat").at(idx);
}

void BM_SolveReflection(benchmark::State& state) {
    const wm::InputVariant v = sample(static_cast<std::size_t>(state.range(0)));
    double angle = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm::solve_reflection(v, wm::Incidence::SV, angle));
        angle = angle >= 89.0 ? 1.0 : angle + 1.0;
    }
}
BENCHMARK(BM_SolveReflection)->Arg(0)->Arg(1);

void BM_SweepAngle(benchmark::State& state) {
    const wm::InputVariant v = sample(1);
    const auto grid = wm::default_angle_grid();
    for (auto _ : state) benchmark::DoNotOptimize(wm::sweep_angle(v, wm::Incidence::P, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_SweepAngle);

void BM_ParseVariants(benchmark::State& state) {
    std::vector<wm::InputVariant> set(static_cast<std::size_t>(state.range(0)), sample(0));
    const std::string text = *wm::serialize_variants(set);
    for (auto _ : state) benchmark::DoNotOptimize(wm::parse_variants(text));
    state.SetBytesProcessed(state.iterations() * static_cast<long>(text.size()));
}
BENCHMARK(BM_ParseVariants)->Arg(2)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
