#pragma once

#include "epo/yield_curve.hpp"

#include <cmath>

namespace epo {

enum class OptionKind { Call, Put };

// One-factor mean-reverting Gaussian short rate fitted to an input curve.
//
// The time-dependent reversion level is carried implicitly through the
// deterministic shift phi(t): the short rate decomposes as
// r(t) = x(t) + phi(t) with x a zero-mean reverting Gaussian factor,
// which gives exact transition densities and closed-form bond prices that
// reproduce the input curve at t = 0 by construction.
class HullWhiteParams {
public:
    HullWhiteParams(YieldCurve curve, double mean_reversion, double volatility);

    double mean_reversion() const { return alpha_; }
    double volatility() const { return vol_; }
    double r0() const { return r0_; }
    const YieldCurve& curve() const { return curve_; }

    // Reversion level theta(t) of d r = alpha (theta(t) - r) dt + vol dW.
    double theta(double t) const;

    // Deterministic shift phi(t); phi(0) = r0.
    double shift(double t) const;

    double bond_duration(double t, double maturity) const; // B(t,T)

    // Affine decomposition P(t,T) = exp(ln_a - b * r(t)); precomputing these
    // lets path-wise loops evaluate many bonds per node with one exp each.
    struct ZcbCoeffs {
        double ln_a = 0.0;
        double b = 0.0;
        double price(double short_rate) const { return std::exp(ln_a - b * short_rate); }
    };
    ZcbCoeffs zcb_coeffs(double t, double maturity) const;

    // P(t,T) given the short rate at t. Requires t <= T.
    double zcb(double t, double maturity, double short_rate) const;

    // Same closed form without the date-order guard; the affine expression
    // extends smoothly to maturities slightly in the past, which the
    // generalized swap rate uses between payment dates.
    double zcb_unchecked(double t, double maturity, double short_rate) const;

    // Simply compounded forward rate for (t1, t2] observed at t <= t1.
    double forward_rate(double t, double t1, double t2, double short_rate) const;

    // European option on a zero coupon bond, expiry <= bond maturity.
    double zcb_option(double t, double expiry, double bond_maturity, double strike,
                      OptionKind kind, double short_rate) const;

private:
    YieldCurve curve_;
    double alpha_;
    double vol_;
    double r0_;
};

// Fits the reversion level so model discount factors at t = 0 match the
// input curve. Rejects non-positive mean reversion.
HullWhiteParams fit_theta(const YieldCurve& curve, double mean_reversion, double volatility);

double norm_cdf(double x);

} // namespace epo
