#pragma once

#include "epo/hull_white.hpp"

#include <vector>

namespace epo {

enum class Amortization { Bullet, Linear };

// Fixed-rate mortgage contract.
struct MortgageSpec {
    double notional0 = 0.0;
    double fixed_rate = 0.0;
    double issue = 0.0;
    std::vector<double> payment_dates;
    Amortization amortization = Amortization::Bullet;

    void validate() const;
    double maturity() const { return payment_dates.back(); }
    // Reset dates: issue plus every payment date except the last.
    std::vector<double> reset_dates() const;

    // Yearly payments over (issue, issue + tenor_years].
    static MortgageSpec annual(double notional0, double fixed_rate, double issue,
                               int tenor_years, Amortization am);
};

// Scheduled outstanding notional; right-continuous piecewise constant.
double contractual_notional(const MortgageSpec& spec, double t);

struct SwapRateResult {
    double swap_rate = 0.0;
    double annuity = 0.0;
};

// Generalized par rate and annuity of the remaining schedule (payments
// strictly after t), weighted by the deterministic notional in force over
// each period. Errors when no payment remains.
SwapRateResult swap_rate_annuity(double t, double short_rate, const MortgageSpec& spec,
                                 const HullWhiteParams& params);

// Same quantities for an arbitrary (dates, per-period notional) schedule.
SwapRateResult swap_rate_annuity(double t, double short_rate,
                                 const std::vector<double>& payment_dates,
                                 const std::vector<double>& period_notionals, double issue,
                                 const HullWhiteParams& params);

} // namespace epo
