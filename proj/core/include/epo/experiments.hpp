#pragma once

#include "epo/config.hpp"
#include "epo/csv.hpp"
#include "epo/robust.hpp"

namespace epo {

// One fully-built pricing scenario: paths under the pricing measure plus
// the derived notional, value and wealth processes.
struct BuiltScenario {
    HullWhiteParams hw;
    TimeGrid grid;
    PathSet paths;
    NotionalPaths notionals;
    LsmResult lsm;
    PriceAtZero price;
    WealthPath exposure_wealth;
    std::vector<WealthPath> hedge_wealth;  // one per configured instrument

    BuiltScenario(HullWhiteParams h, TimeGrid g, PathSet p)
        : hw(std::move(h)), grid(std::move(g)), paths(std::move(p)) {}
};

// Simulates, prices and (optionally) values the hedge roster.
BuiltScenario build_scenario(const RunConfig& cfg, bool with_hedges);

// Pricing-only run returning the value at issue; pieces of the config may
// be overridden through `cfg` before the call.
PriceAtZero price_run(const RunConfig& cfg);

double to_bps(const RunConfig& cfg, double value);

// Experiment presets; each writes one or more CSVs under out_dir and
// returns the written paths. Known ids: fig4a, fig4b, table4, table5,
// fig5, fig6, robust.
std::vector<std::string> run_experiment(const std::string& id, const RunConfig& cfg,
                                        const std::string& out_dir);

std::vector<std::string> experiment_ids();

// Shared provenance header for every emitted table.
std::vector<std::string> provenance(const RunConfig& cfg);

} // namespace epo
