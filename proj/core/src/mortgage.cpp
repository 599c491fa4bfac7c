#include "epo/mortgage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

namespace {
constexpr double kDateTol = 1e-12;
}

void MortgageSpec::validate() const {
    if (notional0 <= 0.0) throw std::invalid_argument("MortgageSpec: notional must be positive");
    if (payment_dates.empty()) throw std::invalid_argument("MortgageSpec: no payment dates");
    double prev = issue;
    for (double t : payment_dates) {
        if (t <= prev) throw std::invalid_argument("MortgageSpec: payment dates must be strictly increasing after issue");
        prev = t;
    }
}

std::vector<double> MortgageSpec::reset_dates() const {
    std::vector<double> resets;
    resets.reserve(payment_dates.size());
    resets.push_back(issue);
    for (std::size_t j = 0; j + 1 < payment_dates.size(); ++j) resets.push_back(payment_dates[j]);
    return resets;
}

MortgageSpec MortgageSpec::annual(double notional0, double fixed_rate, double issue,
                                  int tenor_years, Amortization am) {
    MortgageSpec spec;
    spec.notional0 = notional0;
    spec.fixed_rate = fixed_rate;
    spec.issue = issue;
    for (int j = 1; j <= tenor_years; ++j) spec.payment_dates.push_back(issue + j);
    spec.amortization = am;
    spec.validate();
    return spec;
}

double contractual_notional(const MortgageSpec& spec, double t) {
    if (t < spec.issue - kDateTol)
        throw std::invalid_argument("contractual_notional: t before issue");
    const std::size_t n = spec.payment_dates.size();
    // number of payments at or before t (right-continuous at payment dates)
    std::size_t paid = 0;
    while (paid < n && spec.payment_dates[paid] <= t + kDateTol) ++paid;
    if (spec.amortization == Amortization::Bullet)
        return paid == n ? 0.0 : spec.notional0;
    return spec.notional0 * static_cast<double>(n - paid) / static_cast<double>(n);
}

SwapRateResult swap_rate_annuity(double t, double short_rate,
                                 const std::vector<double>& payment_dates,
                                 const std::vector<double>& period_notionals, double issue,
                                 const HullWhiteParams& params) {
    if (payment_dates.size() != period_notionals.size())
        throw std::invalid_argument("swap_rate_annuity: schedule size mismatch");
    double numerator = 0.0;
    double annuity = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < payment_dates.size(); ++j) {
        const double tj = payment_dates[j];
        if (tj <= t + kDateTol) continue;
        const double t_prev = j == 0 ? issue : payment_dates[j - 1];
        const double notional = period_notionals[j];
        const double p_prev = params.zcb_unchecked(t, t_prev, short_rate);
        const double p_next = params.zcb_unchecked(t, tj, short_rate);
        numerator += notional * (p_prev - p_next);
        annuity += notional * (tj - t_prev) * p_next;
        any = true;
    }
    if (!any) throw std::invalid_argument("swap_rate_annuity: no payments remain after t");
    return {numerator / annuity, annuity};
}

SwapRateResult swap_rate_annuity(double t, double short_rate, const MortgageSpec& spec,
                                 const HullWhiteParams& params) {
    std::vector<double> notionals(spec.payment_dates.size());
    for (std::size_t j = 0; j < spec.payment_dates.size(); ++j) {
        const double t_prev = j == 0 ? spec.issue : spec.payment_dates[j - 1];
        notionals[j] = contractual_notional(spec, t_prev);
    }
    return swap_rate_annuity(t, short_rate, spec.payment_dates, notionals, spec.issue, params);
}

} // namespace epo
