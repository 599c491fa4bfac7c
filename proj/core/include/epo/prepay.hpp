#pragma once

#include "epo/mortgage.hpp"
#include "epo/paths.hpp"

namespace epo {

// Prepayment response to the perceived rate incentive. The rational flag
// models the infinite-steepness limit (step function).
struct SigmoidParams {
    double lower = 0.0;      // minimum prepayment rate per year
    double upper = 0.0;      // maximum prepayment rate per year
    double steepness = 0.0;  // ignored when rational
    bool rational = false;

    void validate() const;
    double response(double perceived_incentive) const;
};

// Continuous mode integrates the instantaneous rate over the grid; the
// reset-lump mode prepays a lump at each triggered reset date instead.
enum class PrepaymentMode { Continuous, ResetLump };

struct NotionalPaths {
    std::vector<double> contractual;  // per grid node, deterministic
    PathMatrix realized;
    PathMatrix prepayment;  // contractual - realized, the EPO notional
};

// Incentive spread (fixed rate minus generalized swap rate of the remaining
// contractual schedule) per path and node; zero at and after the final
// payment where the remaining schedule is empty.
PathMatrix incentive_matrix(const MortgageSpec& spec, const PathSet& paths,
                            const HullWhiteParams& params);

// Instantaneous prepayment rate at one state, in [lower, upper].
double prepayment_rate(double t, double short_rate, double behavior, const MortgageSpec& spec,
                       const SigmoidParams& sigmoid, const HullWhiteParams& params);

NotionalPaths notional_paths(const MortgageSpec& spec, const SigmoidParams& sigmoid,
                             const PathSet& paths, const HullWhiteParams& params,
                             PrepaymentMode mode = PrepaymentMode::Continuous);

// Same computation with a precomputed incentive matrix (the incentive only
// depends on the rate paths, so it can be shared across behavioral
// re-simulations).
NotionalPaths notional_paths(const MortgageSpec& spec, const SigmoidParams& sigmoid,
                             const PathSet& paths, const HullWhiteParams& params,
                             const PathMatrix& incentive, PrepaymentMode mode);

// Cash flow of the prepayment-notional swap at one payment date: rate
// spread fixed at the previous reset times the notional integral over the
// period. payment_index is 0-based into spec.payment_dates.
std::vector<double> epo_cashflow(const PathSet& paths, const NotionalPaths& notionals,
                                 const MortgageSpec& spec, const HullWhiteParams& params,
                                 std::size_t payment_index);

// All payment-date cash flows as a [paths x payments] matrix.
PathMatrix epo_cashflows(const PathSet& paths, const NotionalPaths& notionals,
                         const MortgageSpec& spec, const HullWhiteParams& params);

} // namespace epo
