#include "epo/yield_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

YieldCurve::YieldCurve(std::vector<std::pair<double, double>> pillars)
    : pillars_(std::move(pillars)) {
    if (pillars_.empty())
        throw std::invalid_argument("YieldCurve: at least one pillar required");
    double prev = 0.0;
    for (const auto& [tenor, rate] : pillars_) {
        (void)rate;
        if (tenor <= prev)
            throw std::invalid_argument("YieldCurve: tenors must be strictly increasing and positive");
        prev = tenor;
    }
}

YieldCurve YieldCurve::flat(double rate) {
    return YieldCurve({{1.0, rate}});
}

double YieldCurve::zero_rate(double tenor) const {
    if (tenor <= pillars_.front().first) return pillars_.front().second;
    if (tenor >= pillars_.back().first) return pillars_.back().second;
    auto hi = std::upper_bound(pillars_.begin(), pillars_.end(), tenor,
                               [](double t, const auto& p) { return t < p.first; });
    auto lo = hi - 1;
    const double w = (tenor - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

double YieldCurve::discount(double tenor) const {
    if (tenor == 0.0) return 1.0;
    return std::exp(-zero_rate(tenor) * tenor);
}

double YieldCurve::zero_rate_slope(double t) const {
    if (t < pillars_.front().first || t >= pillars_.back().first) return 0.0;
    auto hi = std::upper_bound(pillars_.begin(), pillars_.end(), t,
                               [](double x, const auto& p) { return x < p.first; });
    auto lo = hi - 1;
    return (hi->second - lo->second) / (hi->first - lo->first);
}

double YieldCurve::instantaneous_forward(double t) const {
    return zero_rate(t) + t * zero_rate_slope(t);
}

double YieldCurve::instantaneous_forward_slope(double t) const {
    return 2.0 * zero_rate_slope(t);
}

} // namespace epo
