#include "actm/beam_fem.hpp"
#include "actm/ga.hpp"
#include "actm/nsm_problem.hpp"
#include "actm/units.hpp"

#include <benchmark/benchmark.h>

using namespace actm;
using units::mm;

namespace {

nsm::NsmProblem loop_problem() {
    nsm::NsmProblem p;
    p.pin_start = fem::Vec2(mm(14), 0);
    p.pin_end = fem::Vec2(mm(16), 0);
    return p;
}

fem::KeyPoints loop_points() {
    return {fem::Vec2(mm(14), 0), fem::Vec2(mm(0.058), mm(7.514)), fem::Vec2(mm(2.636), mm(10.841)),
            fem::Vec2(mm(29.783), mm(6.546)), fem::Vec2(mm(16), 0)};
}

void BM_ForceSweep(benchmark::State &state) {
    const auto p = loop_problem();
    const auto model = fem::build_model(p.design(loop_points()), static_cast<int>(state.range(0)));
    const auto chords = p.sweep_chords();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fem::solve_chord_samples(model, chords));
    }
}
BENCHMARK(BM_ForceSweep)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Fitness(benchmark::State &state) {
    const auto p = loop_problem();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nsm::fitness(p, loop_points()));
    }
}
BENCHMARK(BM_Fitness)->Unit(benchmark::kMillisecond);

void BM_SurrogateRun(benchmark::State &state) {
    const auto p = loop_problem();
    const auto problem = ga::quadratic_surrogate(p.search_space(), loop_points());
    ga::GAConfig cfg;
    cfg.max_generations = 50;
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ga::run(cfg, problem));
    }
}
BENCHMARK(BM_SurrogateRun)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
