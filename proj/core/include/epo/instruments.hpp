#pragma once

#include "epo/lsm.hpp"

namespace epo {

enum class InstrumentKind { ReceiverSwap, PayerSwap, ReceiverSwaption, PayerSwaption };

bool is_swap(InstrumentKind k);
bool is_swaption(InstrumentKind k);

// A hedge instrument: fixed-for-floating swap on a deterministic notional
// profile, or a European swaption on a single-period underlying that cash
// settles at expiry.
struct InstrumentSpec {
    InstrumentKind kind = InstrumentKind::ReceiverSwap;
    double strike = 0.0;
    double start = 0.0;                 // first reset of the underlying
    std::vector<double> payment_dates;  // strictly increasing, all > start
    double maturity = 0.0;              // swaptions only; must equal start
    double notional = 1.0;
    std::vector<double> period_notionals;  // optional; defaults to `notional`

    void validate() const;

    static InstrumentSpec swap(InstrumentKind kind, double strike, double start, double end,
                               int payments_per_year, double notional = 1.0);
    static InstrumentSpec swaption(InstrumentKind kind, double strike, double start, double end,
                                   double notional = 1.0);
};

// Instrument value plus the cash account its cash flows accrue in. Values
// switch to the post-flow convention at flow nodes (the flow moves to
// cash), so value + cash is continuous across payment dates.
struct WealthPath {
    PathMatrix value;
    PathMatrix cash;

    double wealth(std::size_t i, std::size_t k) const { return value(i, k) + cash(i, k); }
    PathMatrix wealth_matrix() const;
};

WealthPath swap_wealth(const InstrumentSpec& spec, const PathSet& paths,
                       const HullWhiteParams& params);

WealthPath swaption_wealth(const InstrumentSpec& spec, const PathSet& paths,
                           const HullWhiteParams& params);

WealthPath instrument_wealth(const InstrumentSpec& spec, const PathSet& paths,
                             const HullWhiteParams& params);

// Wealth of the prepayment-notional swap: the LSM value process plus a cash
// account collecting the payment-date flows.
WealthPath epo_wealth(const LsmResult& epo_values, const PathMatrix& cashflows,
                      const PathSet& paths, const MortgageSpec& spec);

} // namespace epo
