#pragma once

#include <cstddef>
#include <vector>

namespace epo {

// Simulation grid: strictly increasing year fractions starting at t0, with
// per-node flags for membership in the reset and payment date sets. Both
// date sets must be grid nodes.
class TimeGrid {
public:
    TimeGrid(std::vector<double> times, const std::vector<double>& reset_dates,
             const std::vector<double>& payment_dates);

    // Uniform steps-per-year nodes over [t0, horizon], merged with the reset
    // and payment dates (deduplicated at 1e-12).
    static TimeGrid regular(double t0, double horizon, int steps_per_year,
                            const std::vector<double>& reset_dates,
                            const std::vector<double>& payment_dates);

    std::size_t size() const { return times_.size(); }
    double time(std::size_t k) const { return times_[k]; }
    const std::vector<double>& times() const { return times_; }
    bool is_reset(std::size_t k) const { return reset_[k]; }
    bool is_payment(std::size_t k) const { return payment_[k]; }

    // Node index of t; throws when t is off-grid (tolerance 1e-9).
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid& other) const {
        return times_ == other.times_ && reset_ == other.reset_ && payment_ == other.payment_;
    }

private:
    std::vector<double> times_;
    std::vector<char> reset_;
    std::vector<char> payment_;
};

// Composite trapezoidal rule over the sub-grid [a, b]; a and b must be nodes.
double trapezoid(const std::vector<double>& values, const std::vector<double>& times,
                 double a, double b);

// Same rule on node indices over a contiguous row of values.
double trapezoid_idx(const double* values, const std::vector<double>& times,
                     std::size_t a_idx, std::size_t b_idx);

} // namespace epo
