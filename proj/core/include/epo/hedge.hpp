#pragma once

#include "epo/loss.hpp"

namespace epo {

// Quadratic form of the mean-squared loss in the allocations:
//   L(w) = w' X w - 2 y' w + z,
// with entries given by alpha-weighted time integrals of wealth
// cross-moments. Minimized at w* = X^+ y.
struct QuadraticCoefficients {
    Eigen::MatrixXd cross;   // X
    Eigen::VectorXd target;  // y, instrument / exposure cross-moments
    double exposure = 0.0;   // z

    double loss_at(const Eigen::VectorXd& w) const;
};

// alpha_power 2 matches the displayed coefficient formulas; with the
// default constant weight both powers coincide.
QuadraticCoefficients quadratic_coefficients(const WealthPath& epo,
                                             const std::vector<WealthPath>& instruments,
                                             const TimeGrid& grid, const TimeWeight& alpha,
                                             double window_begin, double window_end,
                                             int alpha_power = 2);

struct HedgeSolution {
    Eigen::VectorXd allocations;
    double loss_value = 0.0;
    double moment_part = 0.0;
    double shortfall_part = 0.0;   // unweighted ES integral
    double gradient_norm = 0.0;    // relative, at the solution
    bool converged = true;
};

// Closed-form minimizer of the quadratic loss via the pseudo-inverse.
HedgeSolution solve_quadratic(const Eigen::MatrixXd& cross, const Eigen::VectorXd& target,
                              double exposure = 0.0);

// Derivative-free local search (Nelder-Mead) for the general
// moment-plus-shortfall loss, started from `initial` (typically the
// quadratic solution). The best iterate never exceeds the starting loss.
HedgeSolution solve_general(const WealthPath& epo, const std::vector<WealthPath>& instruments,
                            const TimeGrid& grid, const LossConfig& config,
                            const Eigen::VectorXd& initial, int max_evals = 0);

} // namespace epo
