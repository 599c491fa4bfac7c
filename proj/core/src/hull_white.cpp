#include "epo/hull_white.hpp"

#include <cmath>
#include <stdexcept>

namespace epo {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

HullWhiteParams::HullWhiteParams(YieldCurve curve, double mean_reversion, double volatility)
    : curve_(std::move(curve)), alpha_(mean_reversion), vol_(volatility) {
    if (alpha_ <= 0.0)
        throw std::invalid_argument("HullWhiteParams: mean reversion must be positive");
    if (vol_ < 0.0)
        throw std::invalid_argument("HullWhiteParams: volatility must be nonnegative");
    r0_ = curve_.instantaneous_forward(0.0);
}

double HullWhiteParams::theta(double t) const {
    const double f = curve_.instantaneous_forward(t);
    const double df = curve_.instantaneous_forward_slope(t);
    const double decay = 1.0 - std::exp(-2.0 * alpha_ * t);
    return f + df / alpha_ + vol_ * vol_ / (2.0 * alpha_ * alpha_) * decay;
}

double HullWhiteParams::shift(double t) const {
    const double e = 1.0 - std::exp(-alpha_ * t);
    return curve_.instantaneous_forward(t) + vol_ * vol_ / (2.0 * alpha_ * alpha_) * e * e;
}

double HullWhiteParams::bond_duration(double t, double maturity) const {
    return (1.0 - std::exp(-alpha_ * (maturity - t))) / alpha_;
}

HullWhiteParams::ZcbCoeffs HullWhiteParams::zcb_coeffs(double t, double maturity) const {
    const double b = bond_duration(t, maturity);
    const double ln_ratio = std::log(curve_.discount(maturity)) - std::log(curve_.discount(t));
    const double conv = vol_ * vol_ / (4.0 * alpha_) * (1.0 - std::exp(-2.0 * alpha_ * t)) * b * b;
    return {ln_ratio + b * curve_.instantaneous_forward(t) - conv, b};
}

double HullWhiteParams::zcb_unchecked(double t, double maturity, double short_rate) const {
    return zcb_coeffs(t, maturity).price(short_rate);
}

double HullWhiteParams::zcb(double t, double maturity, double short_rate) const {
    if (t > maturity)
        throw std::invalid_argument("zcb: valuation date after maturity");
    if (!std::isfinite(short_rate))
        throw std::invalid_argument("zcb: short rate must be finite");
    if (t == maturity) return 1.0;
    return zcb_unchecked(t, maturity, short_rate);
}

double HullWhiteParams::forward_rate(double t, double t1, double t2, double short_rate) const {
    if (!(t <= t1 && t1 < t2))
        throw std::invalid_argument("forward_rate: need t <= t1 < t2");
    const double p1 = zcb(t, t1, short_rate);
    const double p2 = zcb(t, t2, short_rate);
    return (p1 - p2) / ((t2 - t1) * p2);
}

double HullWhiteParams::zcb_option(double t, double expiry, double bond_maturity, double strike,
                                   OptionKind kind, double short_rate) const {
    if (!(t <= expiry && expiry <= bond_maturity))
        throw std::invalid_argument("zcb_option: need t <= expiry <= bond maturity");
    const double p_bond = zcb(t, bond_maturity, short_rate);
    const double p_exp = zcb(t, expiry, short_rate);
    const double sd = vol_ * std::sqrt((1.0 - std::exp(-2.0 * alpha_ * (expiry - t))) / (2.0 * alpha_)) *
                      bond_duration(expiry, bond_maturity);
    if (sd < 1e-14) {
        const double intrinsic = p_bond - strike * p_exp;
        if (kind == OptionKind::Call) return intrinsic > 0.0 ? intrinsic : 0.0;
        return intrinsic < 0.0 ? -intrinsic : 0.0;
    }
    const double d1 = std::log(p_bond / (p_exp * strike)) / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    if (kind == OptionKind::Call)
        return p_bond * norm_cdf(d1) - strike * p_exp * norm_cdf(d2);
    return strike * p_exp * norm_cdf(-d2) - p_bond * norm_cdf(-d1);
}

HullWhiteParams fit_theta(const YieldCurve& curve, double mean_reversion, double volatility) {
    return HullWhiteParams(curve, mean_reversion, volatility);
}

} // namespace epo
