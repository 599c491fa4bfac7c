#pragma once

#include "epo/instruments.hpp"

#include <Eigen/Dense>

#include <functional>

namespace epo {

enum class TailSide { Upper, Lower };

// Empirical expected shortfall with a nearest-rank quantile: mean of the
// strict exceedance set, or the quantile itself when that set is empty.
double expected_shortfall(const std::vector<double>& sample, double q, TailSide side);

// Time weight on the monitoring window, normalized so its integral equals
// the window length.
struct TimeWeight {
    std::function<double(double)> fn = [](double) { return 1.0; };
    double operator()(double t) const { return fn(t); }
};

struct LossConfig {
    int p = 2;                  // moment order >= 1
    double q = 0.9;             // shortfall level in (0,1)
    double shortfall_weight = 0.0;  // k >= 0
    TimeWeight alpha;
    double window_begin = 0.0;
    double window_end = 0.0;

    void validate() const;
    // Checks the alpha normalization under the grid quadrature (1e-9).
    void validate_on_grid(const TimeGrid& grid) const;
};

struct LossBreakdown {
    double moment = 0.0;     // time integral of the p-th absolute moment
    double shortfall = 0.0;  // time integral of the upper expected shortfall
    double total = 0.0;      // moment + k * shortfall
};

// D = EPO wealth minus the allocation-weighted instrument wealths.
PathMatrix signed_distance(const WealthPath& epo, const std::vector<WealthPath>& instruments,
                           const Eigen::VectorXd& allocations);

LossBreakdown loss(const PathMatrix& distance, const TimeGrid& grid, const LossConfig& config);

// Path-wise time integral of the distance over the window (exposure metric
// used for histograms).
std::vector<double> integrated_distance(const PathMatrix& distance, const TimeGrid& grid,
                                        double window_begin, double window_end);

} // namespace epo
