#pragma once

#include "epo/config.hpp"
#include "epo/experiments.hpp"
#include "epo/rng.hpp"

// Shared fixtures: the baseline market/behavior/contract parameters used
// throughout the experiments.
namespace fixtures {

inline epo::YieldCurve flat3() { return epo::YieldCurve::flat(0.03); }

inline epo::HullWhiteParams hw3() { return epo::fit_theta(flat3(), 0.023, 0.006); }

inline epo::OUParams behavior_p() { return {2.099, -0.002, 0.015, 0.0, epo::Measure::RealWorld}; }

inline epo::SigmoidParams empirical_sigmoid() { return {0.0231, 0.0447, 84.0, false}; }

inline epo::SigmoidParams rational_sigmoid() { return {0.0, 0.0447, 0.0, true}; }

inline epo::MortgageSpec bullet10() {
    return epo::MortgageSpec::annual(1e4, 0.031, 0.0, 10, epo::Amortization::Bullet);
}

inline epo::MortgageSpec linear10() {
    return epo::MortgageSpec::annual(1e4, 0.031, 0.0, 10, epo::Amortization::Linear);
}

inline epo::TimeGrid grid10(int steps_per_year = 12) {
    const auto m = bullet10();
    return epo::TimeGrid::regular(0.0, 10.0, steps_per_year, m.reset_dates(), m.payment_dates);
}

// Deterministic uniform in [lo, hi) for hand-rolled property tests.
inline double uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j, double lo, double hi) {
    return lo + (hi - lo) * epo::CounterRng::uniform(seed, i, j, 7);
}

} // namespace fixtures
