#include "epo/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace epo {

namespace {

void check_knots(const std::vector<double>& knots) {
    if (knots.size() < 4)
        throw std::invalid_argument("spline: at least 4 knots required for a cubic fit");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i] <= knots[i - 1])
            throw std::invalid_argument("spline: knots must be strictly increasing");
}

std::size_t interval_of(const std::vector<double>& knots, double x) {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t idx = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(idx, knots.size() - 2);
}

} // namespace

NotAKnotSystem::NotAKnotSystem(std::vector<double> knots) : knots_(std::move(knots)) {
    check_knots(knots_);
    const std::size_t n = knots_.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots_[i + 1] - knots_[i];
    // interior second derivative continuity
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a(i, i - 1) = h[i - 1];
        a(i, i) = 2.0 * (h[i - 1] + h[i]);
        a(i, i + 1) = h[i];
    }
    // not-a-knot: third derivative continuous at the 2nd and (n-1)th knots
    a(0, 0) = 1.0 / h[0];
    a(0, 1) = -1.0 / h[0] - 1.0 / h[1];
    a(0, 2) = 1.0 / h[1];
    a(n - 1, n - 3) = 1.0 / h[n - 3];
    a(n - 1, n - 2) = -1.0 / h[n - 3] - 1.0 / h[n - 2];
    a(n - 1, n - 1) = 1.0 / h[n - 2];
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(a);
}

std::vector<double> NotAKnotSystem::moments(const std::vector<double>& values) const {
    const std::size_t n = knots_.size();
    if (values.size() != n) throw std::invalid_argument("spline: values/knots size mismatch");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = knots_[i] - knots_[i - 1];
        const double h1 = knots_[i + 1] - knots_[i];
        rhs(i) = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
    }
    const Eigen::VectorXd m = lu_.solve(rhs);
    return std::vector<double>(m.data(), m.data() + n);
}

SplineEval eval_cubic(const std::vector<double>& knots, const std::vector<double>& values,
                      const std::vector<double>& moments, double x) {
    const std::size_t i = interval_of(knots, x);
    const double h = knots[i + 1] - knots[i];
    const double t = x - knots[i];
    const double c2 = 0.5 * moments[i];
    const double c3 = (moments[i + 1] - moments[i]) / (6.0 * h);
    const double c1 = (values[i + 1] - values[i]) / h - h * (2.0 * moments[i] + moments[i + 1]) / 6.0;
    SplineEval e;
    e.value = values[i] + t * (c1 + t * (c2 + t * c3));
    e.d1 = c1 + t * (2.0 * c2 + 3.0 * t * c3);
    e.d2 = 2.0 * c2 + 6.0 * t * c3;
    return e;
}

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    NotAKnotSystem sys(knots_);
    moments_ = sys.moments(values_);
}

double CubicSpline::value(double x) const { return eval_cubic(knots_, values_, moments_, x).value; }
double CubicSpline::derivative(double x) const { return eval_cubic(knots_, values_, moments_, x).d1; }
double CubicSpline::second_derivative(double x) const {
    return eval_cubic(knots_, values_, moments_, x).d2;
}

Spline2D::Spline2D(std::vector<double> xs, std::vector<double> ys, const Eigen::MatrixXd& values)
    : xs_(std::move(xs)), ys_(std::move(ys)), values_(values) {
    check_knots(xs_);
    check_knots(ys_);
    if (values_.rows() != static_cast<Eigen::Index>(xs_.size()) ||
        values_.cols() != static_cast<Eigen::Index>(ys_.size()))
        throw std::invalid_argument("Spline2D: value grid shape mismatch");
    NotAKnotSystem y_sys(ys_);
    y_moments_.resize(values_.rows(), values_.cols());
    std::vector<double> row(ys_.size());
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index j = 0; j < values_.cols(); ++j) row[j] = values_(i, j);
        const auto m = y_sys.moments(row);
        for (Eigen::Index j = 0; j < values_.cols(); ++j) y_moments_(i, j) = m[j];
    }
    x_system_ = NotAKnotSystem(xs_);
}

SplineEval Spline2D::full_eval(double x, double y) const {
    const std::size_t nx = xs_.size();
    std::vector<double> row_vals(ys_.size()), row_moms(ys_.size());
    std::vector<double> g(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ys_.size(); ++j) {
            row_vals[j] = values_(i, j);
            row_moms[j] = y_moments_(i, j);
        }
        g[i] = eval_cubic(ys_, row_vals, row_moms, y).value;
    }
    const auto gm = x_system_.moments(g);
    return eval_cubic(xs_, g, gm, x);
}

Spline2D::Partials Spline2D::partials(double x, double y) const {
    const std::size_t nx = xs_.size();
    std::vector<double> row_vals(ys_.size()), row_moms(ys_.size());
    std::vector<double> g(nx), gy(nx), gyy(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ys_.size(); ++j) {
            row_vals[j] = values_(i, j);
            row_moms[j] = y_moments_(i, j);
        }
        const SplineEval e = eval_cubic(ys_, row_vals, row_moms, y);
        g[i] = e.value;
        gy[i] = e.d1;
        gyy[i] = e.d2;
    }
    const auto gm = x_system_.moments(g);
    const auto gym = x_system_.moments(gy);
    const auto gyym = x_system_.moments(gyy);
    const SplineEval ex = eval_cubic(xs_, g, gm, x);
    const SplineEval exy = eval_cubic(xs_, gy, gym, x);
    const SplineEval eyy = eval_cubic(xs_, gyy, gyym, x);
    Partials p;
    p.value = ex.value;
    p.dx = ex.d1;
    p.dy = exy.value;
    p.dxx = ex.d2;
    p.dxy = exy.d1;
    p.dyy = eyy.value;
    return p;
}

} // namespace epo
