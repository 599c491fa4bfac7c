#pragma once

#include <Eigen/Dense>

#include <vector>

namespace epo {

// Natural cubic interpolation with not-a-knot end conditions; exact on
// cubic polynomials. Needs at least 4 knots.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> knots, std::vector<double> values);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> moments_;  // second derivatives at the knots
};

// Precomputed not-a-knot system for a fixed knot vector, reusable across
// many right-hand sides.
class NotAKnotSystem {
public:
    NotAKnotSystem() = default;
    explicit NotAKnotSystem(std::vector<double> knots);

    const std::vector<double>& knots() const { return knots_; }
    std::vector<double> moments(const std::vector<double>& values) const;

private:
    std::vector<double> knots_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct SplineEval {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

SplineEval eval_cubic(const std::vector<double>& knots, const std::vector<double>& values,
                      const std::vector<double>& moments, double x);

// Tensor-product bicubic interpolation on a rectangular grid: one cubic
// spline per grid row in the second coordinate, tied together by a shared
// not-a-knot system in the first. Reproduces degree-(3,3) polynomials.
class Spline2D {
public:
    Spline2D() = default;
    Spline2D(std::vector<double> xs, std::vector<double> ys, const Eigen::MatrixXd& values);

    double value(double x, double y) const { return full_eval(x, y).value; }

    struct Partials {
        double value = 0.0;
        double dx = 0.0, dy = 0.0;
        double dxx = 0.0, dxy = 0.0, dyy = 0.0;
    };
    Partials partials(double x, double y) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    SplineEval full_eval(double x, double y) const;

    std::vector<double> xs_, ys_;
    Eigen::MatrixXd values_;      // nx x ny
    Eigen::MatrixXd y_moments_;   // per row spline in y
    NotAKnotSystem x_system_;
};

} // namespace epo
