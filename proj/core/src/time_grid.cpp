#include "epo/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kLookupTol = 1e-9;

std::size_t find_node(const std::vector<double>& times, double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t - kLookupTol);
    if (it == times.end() || std::abs(*it - t) > kLookupTol)
        throw std::invalid_argument("TimeGrid: date is not a grid node");
    return static_cast<std::size_t>(it - times.begin());
}

} // namespace

TimeGrid::TimeGrid(std::vector<double> times, const std::vector<double>& reset_dates,
                   const std::vector<double>& payment_dates)
    : times_(std::move(times)) {
    if (times_.empty()) throw std::invalid_argument("TimeGrid: empty grid");
    for (std::size_t k = 1; k < times_.size(); ++k)
        if (times_[k] <= times_[k - 1])
            throw std::invalid_argument("TimeGrid: times must be strictly increasing");
    reset_.assign(times_.size(), 0);
    payment_.assign(times_.size(), 0);
    for (double t : reset_dates) reset_[find_node(times_, t)] = 1;
    for (double t : payment_dates) payment_[find_node(times_, t)] = 1;
}

TimeGrid TimeGrid::regular(double t0, double horizon, int steps_per_year,
                           const std::vector<double>& reset_dates,
                           const std::vector<double>& payment_dates) {
    if (horizon <= t0) throw std::invalid_argument("TimeGrid: horizon must exceed t0");
    if (steps_per_year < 1) throw std::invalid_argument("TimeGrid: steps_per_year must be >= 1");
    std::vector<double> nodes;
    const double dt = 1.0 / steps_per_year;
    const auto n_steps = static_cast<std::size_t>(std::ceil((horizon - t0) / dt - kMergeTol));
    nodes.reserve(n_steps + reset_dates.size() + payment_dates.size() + 2);
    for (std::size_t k = 0; k <= n_steps; ++k) nodes.push_back(t0 + static_cast<double>(k) * dt);
    nodes.back() = horizon;
    for (double t : reset_dates)
        if (t >= t0 - kMergeTol && t <= horizon + kMergeTol) nodes.push_back(t);
    for (double t : payment_dates)
        if (t >= t0 - kMergeTol && t <= horizon + kMergeTol) nodes.push_back(t);
    std::sort(nodes.begin(), nodes.end());
    std::vector<double> merged;
    merged.reserve(nodes.size());
    for (double t : nodes)
        if (merged.empty() || t - merged.back() > kMergeTol) merged.push_back(t);
    return TimeGrid(std::move(merged), reset_dates, payment_dates);
}

std::size_t TimeGrid::index_of(double t) const { return find_node(times_, t); }

double trapezoid_idx(const double* values, const std::vector<double>& times,
                     std::size_t a_idx, std::size_t b_idx) {
    double sum = 0.0;
    for (std::size_t k = a_idx; k < b_idx; ++k)
        sum += 0.5 * (values[k] + values[k + 1]) * (times[k + 1] - times[k]);
    return sum;
}

double trapezoid(const std::vector<double>& values, const std::vector<double>& times,
                 double a, double b) {
    if (values.size() != times.size())
        throw std::invalid_argument("trapezoid: values/times size mismatch");
    const std::size_t a_idx = find_node(times, a);
    const std::size_t b_idx = find_node(times, b);
    if (b_idx < a_idx) throw std::invalid_argument("trapezoid: need a <= b");
    return trapezoid_idx(values.data(), times, a_idx, b_idx);
}

} // namespace epo
