#pragma once

#include <utility>
#include <vector>

namespace epo {

// Zero curve on continuously compounded rates, linear in rate between
// pillars, flat beyond the ends. A single pillar is a flat curve.
class YieldCurve {
public:
    explicit YieldCurve(std::vector<std::pair<double, double>> pillars);

    static YieldCurve flat(double rate);

    double zero_rate(double tenor) const;
    double discount(double tenor) const;

    // Right-hand slope of the zero rate; piecewise constant between pillars.
    double zero_rate_slope(double t) const;

    // Instantaneous forward f(0,t) = z(t) + t z'(t), with pillar kinks
    // resolved to their right-hand slope (the closed form of a one-sided
    // difference shrunk to zero).
    double instantaneous_forward(double t) const;

    // Right-hand derivative of the instantaneous forward.
    double instantaneous_forward_slope(double t) const;

    const std::vector<std::pair<double, double>>& pillars() const { return pillars_; }

private:
    std::vector<std::pair<double, double>> pillars_;
};

} // namespace epo
