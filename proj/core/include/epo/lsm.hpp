#pragma once

#include "epo/prepay.hpp"

#include <Eigen/Dense>

#include <optional>

namespace epo {

// Polynomial regression basis over the state vector [r, b, N]. Inputs are
// rescaled per time step to zero mean / unit variance before the monomials
// are formed; a feature with no cross-sectional variance is zeroed out so
// the design stays well conditioned.
struct RegressionBasis {
    int degree = 2;

    std::size_t size() const;                       // number of basis functions
    std::vector<std::array<int, 3>> exponents() const;
};

struct LsmConfig {
    RegressionBasis basis;
    double ridge = 1e-10;

    void validate() const;
};

// Least squares with an L2 penalty on the coefficients:
//   minimize (1/n) |y - X beta|^2 + ridge |beta|^2.
// With ridge = 0 a rank-deficient design is an error.
Eigen::VectorXd ridge_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                                    double ridge);

// Per-step fitted conditional-expectation functions, reusable for
// out-of-sample valuation on an independent path set.
struct LsmStepFit {
    std::array<double, 3> mean{};
    std::array<double, 3> scale{};  // 0 marks a degenerate (constant) feature
    Eigen::VectorXd beta_pending;   // within-period notional integral
    Eigen::VectorXd beta_future;    // value of later cash flows
    bool fitted = false;
};

struct LsmFit {
    LsmConfig config;
    std::vector<LsmStepFit> steps;  // one per grid node
};

struct LsmResult {
    PathMatrix value;          // V, cum-cash-flow at interior payment nodes
    std::size_t last_node = 0; // value at the final node is zero by construction
};

// Backward-induction valuation of the prepayment-notional swap along the
// simulated paths. At reset nodes the future-value regression targets the
// discounted next-node value; elsewhere the pending-integral and
// future-value recursions advance jointly. The value at a node is
//   spread * (known discounted integral + fitted pending integral) + fitted future value,
// and is identically zero after the final payment.
LsmResult price_epo(const PathSet& paths, const NotionalPaths& notionals, const MortgageSpec& spec,
                    const HullWhiteParams& params, const LsmConfig& config,
                    LsmFit* capture_fit = nullptr);

// Valuation on an independent path set using a previously captured fit.
LsmResult price_epo_with_fit(const PathSet& paths, const NotionalPaths& notionals,
                             const MortgageSpec& spec, const HullWhiteParams& params,
                             const LsmFit& fit);

struct PriceAtZero {
    double value = 0.0;    // mean of the node-0 value column
    double stderr_ = 0.0;  // Monte Carlo error of the discounted cash-flow sum
    double discounted_mean = 0.0;
};

PriceAtZero price_epo_at_zero(const PathSet& paths, const NotionalPaths& notionals,
                              const MortgageSpec& spec, const HullWhiteParams& params,
                              const LsmConfig& config);

} // namespace epo
