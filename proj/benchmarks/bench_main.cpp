#include "epo/experiments.hpp"

#include <benchmark/benchmark.h>

namespace {

epo::RunConfig small_config() {
    epo::RunConfig cfg;
    cfg.simulation.paths = 4000;
    cfg.simulation.seed = 7;
    return cfg;
}

void BM_simulate_paths(benchmark::State& state) {
    const auto cfg = small_config();
    const auto hw = cfg.make_hull_white();
    const auto grid = cfg.make_grid();
    const auto pricing = epo::girsanov_map(cfg.behavior, cfg.mpr);
    for (auto _ : state) {
        auto ps = epo::simulate_paths(hw, pricing, cfg.correlation, grid,
                                      static_cast<std::size_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(ps.money_account.data().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_paths)->Arg(1000)->Arg(8000);

void BM_price_epo(benchmark::State& state) {
    auto cfg = small_config();
    cfg.simulation.paths = static_cast<std::size_t>(state.range(0));
    const auto hw = cfg.make_hull_white();
    const auto grid = cfg.make_grid();
    const auto ps = epo::simulate_paths(hw, epo::girsanov_map(cfg.behavior, cfg.mpr),
                                        cfg.correlation, grid, cfg.simulation.paths, 7);
    const auto np = epo::notional_paths(cfg.mortgage, cfg.sigmoid, ps, hw);
    for (auto _ : state) {
        auto res = epo::price_epo(ps, np, cfg.mortgage, hw, cfg.lsm);
        benchmark::DoNotOptimize(res.value.data().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_price_epo)->Arg(2000)->Arg(8000);

void BM_hedge_coefficients(benchmark::State& state) {
    auto cfg = small_config();
    cfg.simulation.paths = static_cast<std::size_t>(state.range(0));
    const auto sc = epo::build_scenario(cfg, true);
    for (auto _ : state) {
        auto qc = epo::quadratic_coefficients(sc.exposure_wealth, sc.hedge_wealth, sc.grid,
                                              epo::TimeWeight{}, 0.0, 10.0);
        benchmark::DoNotOptimize(qc.exposure);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_hedge_coefficients)->Arg(2000)->Arg(8000);

} // namespace

BENCHMARK_MAIN();
