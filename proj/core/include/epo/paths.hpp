#pragma once

#include "epo/hull_white.hpp"
#include "epo/matrix.hpp"
#include "epo/time_grid.hpp"

#include <cstdint>

namespace epo {

enum class Measure { RealWorld, RiskNeutral };

// Mean-reverting Gaussian factor for the behavioral spread.
struct OUParams {
    double alpha = 0.0;  // mean reversion per year, > 0
    double mean = 0.0;   // long-run level
    double vol = 0.0;    // >= 0
    double b0 = 0.0;
    Measure measure = Measure::RealWorld;

    void validate() const;
};

// Affine market price of risk lambda(t) = lambda0 + lambda1 * b(t).
struct MarketPriceOfRisk {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
};

// Drift change from real-world to pricing dynamics. Exact arithmetic:
//   alpha_q = alpha_p + vol * lambda1
//   mean_q  = (alpha_p * mean_p - vol * lambda0) / alpha_q
// Rejects lambda1 that would make alpha_q nonpositive.
OUParams girsanov_map(const OUParams& real_world, const MarketPriceOfRisk& mpr);

// Inverse of girsanov_map for admissible pricing parameters.
MarketPriceOfRisk girsanov_invert(const OUParams& real_world, double alpha_q, double mean_q);

// Joint paths of the short rate, behavioral factor and money account on a
// shared grid. Immutable after construction.
struct PathSet {
    TimeGrid grid;
    PathMatrix rate;           // r
    PathMatrix behavior;       // b
    PathMatrix money_account;  // M, trapezoidal integral of r exponentiated
    std::uint64_t seed = 0;
    double correlation = 0.0;

    std::size_t n_paths() const { return rate.paths(); }
    std::size_t n_nodes() const { return rate.nodes(); }
};

// Exact one-step Gaussian sampling for both factors; the 2x2 step
// covariance (including the cross term implied by the instantaneous
// correlation) is factored by Cholesky. Output is bit-identical for equal
// (seed, n_paths, grid) regardless of worker threads: shocks are keyed by
// (seed, path index, step).
PathSet simulate_paths(const HullWhiteParams& hw, const OUParams& ou, double rho,
                       const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

// Re-simulates only the behavioral factor of `base` under different OU
// parameters, reusing the same underlying Gaussian shocks (common random
// numbers); the rate and money-account paths are shared unchanged.
PathSet resimulate_behavior(const PathSet& base, const HullWhiteParams& hw, const OUParams& ou);

} // namespace epo
