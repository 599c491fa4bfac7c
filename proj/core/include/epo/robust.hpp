#pragma once

#include "epo/hedge.hpp"
#include "epo/spline.hpp"

#include <array>
#include <cstdint>

namespace epo {

// Search region for the market price of risk, specified as a rectangle in
// the (pricing mean reversion, pricing mean) plane. alpha_min = 0 gives the
// triangular region in (lambda0, lambda1); alpha_min > 0 a trapezoid.
struct MprDomain {
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    OUParams real_world;

    void validate() const;
};

struct DomainGeometry {
    MprDomain spec;
    // Corners in (lambda0, lambda1): 3 for the triangle, 4 for the trapezoid.
    std::vector<std::array<double, 2>> vertices;

    bool contains_lambda(double lambda0, double lambda1, double tol = 1e-9) const;
    bool contains_param(double alpha_q, double theta_q, double tol = 1e-9) const;
    std::array<double, 2> to_lambda(double alpha_q, double theta_q) const;
    std::array<double, 2> to_param(double lambda0, double lambda1) const;
    // Euclidean diameter of the lambda-space region (vertex hull).
    double lambda_diameter() const;
};

DomainGeometry build_domain(const MprDomain& spec);

// Everything needed to re-price the exposure at a market-price-of-risk node.
struct RobustScenario {
    HullWhiteParams hw;
    OUParams real_world;
    double rho = 0.0;
    MortgageSpec mortgage;
    SigmoidParams sigmoid;
    PrepaymentMode mode = PrepaymentMode::Continuous;
    std::vector<InstrumentSpec> roster;
    LsmConfig lsm;
    TimeWeight alpha;
    int alpha_power = 2;
    double window_begin = 0.0;
    double window_end = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    int steps_per_year = 12;
};

// Monte Carlo nodal values of the quadratic-loss coefficients over a
// rectangular (alpha, theta) grid. The rate paths and instrument wealths
// are shared across nodes (common random numbers); only the behavioral
// factor is re-simulated, so the cross matrix is computed once.
struct NodalTables {
    std::vector<double> alphas;
    std::vector<double> thetas;
    std::vector<Eigen::MatrixXd> target_nodes;  // y_i per instrument, [alpha x theta]
    Eigen::MatrixXd exposure_nodes;             // z
    Eigen::MatrixXd cross;                      // X, lambda-independent
};

NodalTables evaluate_nodal_grid(const DomainGeometry& domain, int n_alpha, int n_theta,
                                const RobustScenario& scenario);

struct SplineSurface {
    std::vector<Spline2D> target;  // one per instrument
    Spline2D exposure;
    Eigen::MatrixXd cross;
    double max_node_residual = 0.0;
};

SplineSurface fit_spline(const NodalTables& tables);

// Projected loss g(alpha, theta) = z - y' X^+ y (the conditional optimum
// substituted) and its derivatives from the fitted surfaces.
struct ProjectedLoss {
    const SplineSurface* surface = nullptr;
    Eigen::MatrixXd cross_pinv;

    double value(double alpha, double theta) const;
    Eigen::Vector2d gradient(double alpha, double theta) const;
    Eigen::Matrix2d hessian(double alpha, double theta) const;
    Eigen::VectorXd allocations(double alpha, double theta) const;
    // Loss of a fixed allocation at this market price of risk.
    double loss_at(const Eigen::VectorXd& w, double alpha, double theta) const;
};

ProjectedLoss make_projected_loss(const SplineSurface& surface);

enum class CriticalKind { Saddle, Minimum, Indefinite, Unclassified };

struct CriticalPoint {
    double alpha = 0.0, theta = 0.0;
    double lambda0 = 0.0, lambda1 = 0.0;
    Eigen::VectorXd allocations;
    double loss = 0.0;
    Eigen::Matrix2d hessian;
    std::array<double, 2> eigenvalues{};
    CriticalKind kind = CriticalKind::Unclassified;
};

// Zeros of the projected-loss gradient inside the rectangle, located by a
// dense sign-change scan plus Newton polishing.
std::vector<CriticalPoint> find_critical_points(const SplineSurface& surface,
                                                const DomainGeometry& domain, int scan = 200);

struct BoundarySolution {
    int edge = 0;  // 0: alpha=min, 1: alpha=max, 2: theta=min, 3: theta=max
    double alpha = 0.0, theta = 0.0;
    double lambda0 = 0.0, lambda1 = 0.0;
    Eigen::VectorXd allocations;
    double loss = 0.0;
    double inward_derivative = 0.0;
    bool robust = false;  // loss does not increase moving into the domain
};

struct SemiRobustDiagnostic {
    double max_alpha_gradient = 0.0;   // |d loss / d alpha| on the theta-stationary curve
    double theta_gradient_p10 = 0.0;   // 10th percentile of |d loss / d theta| on the domain
    bool holds = false;
};

struct SaddleReport {
    std::vector<CriticalPoint> critical_points;
    std::vector<BoundarySolution> boundary;
    SemiRobustDiagnostic semi_robust;

    std::vector<CriticalPoint> saddles() const;
    std::vector<BoundarySolution> robust_boundary() const;
};

SaddleReport classify_and_boundary(const std::vector<CriticalPoint>& candidates,
                                   const SplineSurface& surface, const DomainGeometry& domain,
                                   int edge_scan = 400);

// Projected gradient-ascent path in (alpha, theta) from one starting point;
// terminates at a stationary point or on the boundary.
std::vector<std::array<double, 3>> ascent_trajectory(const SplineSurface& surface,
                                                     const DomainGeometry& domain, double alpha0,
                                                     double theta0, int max_steps = 500);

} // namespace epo
