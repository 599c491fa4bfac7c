#pragma once

#include "epo/lsm.hpp"
#include "epo/loss.hpp"
#include "epo/instruments.hpp"

#include <cstdint>
#include <string>

namespace epo {

struct SimulationConfig {
    std::uint64_t seed = 42;
    std::size_t paths = 100000;
    int steps_per_year = 12;
    int threads = 1;
};

struct RobustConfig {
    double alpha_min = 0.1;
    double alpha_max = 10.0;
    double theta_min = -0.03;
    double theta_max = 0.03;
    int grid_alpha = 12;
    int grid_theta = 12;
    std::size_t paths = 20000;          // nodal Monte Carlo size
    std::vector<std::size_t> roster{0};  // indices into `instruments`
};

struct LossSettings {
    int p = 2;
    double q = 0.9;
    double shortfall_weight = 0.0;
    double window_begin = 0.0;
    double window_end = 10.0;
};

// Full run description; every section validates under its module's rules
// and unknown keys in the file are rejected.
struct RunConfig {
    std::vector<std::pair<double, double>> curve_pillars{{1.0, 0.03}};
    double alpha_r = 0.023;
    double eta_r = 0.006;
    OUParams behavior{2.099, -0.002, 0.015, 0.0, Measure::RealWorld};
    double correlation = 0.44;
    MarketPriceOfRisk mpr{0.0, 0.0};
    SigmoidParams sigmoid{0.0231, 0.0447, 84.0, false};
    MortgageSpec mortgage = MortgageSpec::annual(1e4, 0.031, 0.0, 10, Amortization::Bullet);
    PrepaymentMode prepayment_mode = PrepaymentMode::Continuous;
    std::vector<InstrumentSpec> instruments = default_roster();
    LossSettings loss;
    LsmConfig lsm;
    RobustConfig robust;
    SimulationConfig simulation;
    std::string experiment;

    // 10y par-ish receiver swap plus the two single-period swaptions.
    static std::vector<InstrumentSpec> default_roster();

    void validate() const;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig load(const std::string& path);
    std::string to_json_text() const;

    // FNV-1a over the canonical serialization; stable across runs.
    std::string canonical_hash() const;

    HullWhiteParams make_hull_white() const;
    TimeGrid make_grid() const;
    LossConfig make_loss_config() const;
};

} // namespace epo
