#include "epo/robust.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace epo {

void MprDomain::validate() const {
    real_world.validate();
    if (real_world.vol <= 0.0)
        throw std::invalid_argument("MprDomain: behavioral vol must be positive");
    if (alpha_min < 0.0 || alpha_max <= alpha_min)
        throw std::invalid_argument("MprDomain: need 0 <= alpha_min < alpha_max");
    if (theta_min >= theta_max)
        throw std::invalid_argument("MprDomain: need theta_min < theta_max");
}

std::array<double, 2> DomainGeometry::to_lambda(double alpha_q, double theta_q) const {
    const auto& p = spec.real_world;
    return {(p.alpha * p.mean - alpha_q * theta_q) / p.vol, (alpha_q - p.alpha) / p.vol};
}

std::array<double, 2> DomainGeometry::to_param(double lambda0, double lambda1) const {
    const auto& p = spec.real_world;
    const double alpha_q = p.alpha + p.vol * lambda1;
    return {alpha_q, (p.alpha * p.mean - p.vol * lambda0) / alpha_q};
}

bool DomainGeometry::contains_param(double alpha_q, double theta_q, double tol) const {
    return alpha_q >= spec.alpha_min - tol && alpha_q <= spec.alpha_max + tol &&
           theta_q >= spec.theta_min - tol && theta_q <= spec.theta_max + tol;
}

bool DomainGeometry::contains_lambda(double lambda0, double lambda1, double tol) const {
    const auto [alpha_q, theta_q] = to_param(lambda0, lambda1);
    if (alpha_q <= 0.0) return false;
    return contains_param(alpha_q, theta_q, tol);
}

double DomainGeometry::lambda_diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            best = std::max(best, std::hypot(vertices[i][0] - vertices[j][0],
                                             vertices[i][1] - vertices[j][1]));
    return best;
}

DomainGeometry build_domain(const MprDomain& spec) {
    spec.validate();
    DomainGeometry geo;
    geo.spec = spec;
    const std::array<std::array<double, 2>, 4> corners = {{{spec.alpha_min, spec.theta_min},
                                                           {spec.alpha_min, spec.theta_max},
                                                           {spec.alpha_max, spec.theta_max},
                                                           {spec.alpha_max, spec.theta_min}}};
    for (const auto& [a, t] : corners) {
        const auto v = geo.to_lambda(a, t);
        bool dup = false;
        for (const auto& u : geo.vertices)
            if (std::hypot(u[0] - v[0], u[1] - v[1]) < 1e-12) dup = true;
        if (!dup) geo.vertices.push_back(v);
    }
    if (geo.vertices.size() < 3) throw std::invalid_argument("build_domain: empty region");
    return geo;
}

NodalTables evaluate_nodal_grid(const DomainGeometry& domain, int n_alpha, int n_theta,
                                const RobustScenario& sc) {
    if (n_alpha < 4 || n_theta < 4)
        throw std::invalid_argument("evaluate_nodal_grid: need at least a 4x4 grid");
    if (domain.spec.alpha_min <= 0.0)
        throw std::invalid_argument("evaluate_nodal_grid: alpha_min must be positive for grid nodes");
    sc.mortgage.validate();

    NodalTables tables;
    tables.alphas.resize(n_alpha);
    tables.thetas.resize(n_theta);
    for (int i = 0; i < n_alpha; ++i)
        tables.alphas[i] = domain.spec.alpha_min +
                           (domain.spec.alpha_max - domain.spec.alpha_min) * i / (n_alpha - 1.0);
    for (int j = 0; j < n_theta; ++j)
        tables.thetas[j] = domain.spec.theta_min +
                           (domain.spec.theta_max - domain.spec.theta_min) * j / (n_theta - 1.0);

    const TimeGrid grid = TimeGrid::regular(sc.mortgage.issue, sc.mortgage.maturity(),
                                            sc.steps_per_year, sc.mortgage.reset_dates(),
                                            sc.mortgage.payment_dates);
    const PathSet base = simulate_paths(sc.hw, sc.real_world, sc.rho, grid, sc.n_paths, sc.seed);
    const PathMatrix incentive = incentive_matrix(sc.mortgage, base, sc.hw);
    std::vector<WealthPath> hedge_wealth;
    hedge_wealth.reserve(sc.roster.size());
    for (const auto& inst : sc.roster) hedge_wealth.push_back(instrument_wealth(inst, base, sc.hw));

    tables.target_nodes.assign(sc.roster.size(), Eigen::MatrixXd::Zero(n_alpha, n_theta));
    tables.exposure_nodes = Eigen::MatrixXd::Zero(n_alpha, n_theta);

    bool have_cross = false;
    for (int ia = 0; ia < n_alpha; ++ia) {
        for (int jt = 0; jt < n_theta; ++jt) {
            OUParams ou_q = sc.real_world;
            ou_q.alpha = tables.alphas[ia];
            ou_q.mean = tables.thetas[jt];
            ou_q.measure = Measure::RiskNeutral;
            const PathSet node_paths = resimulate_behavior(base, sc.hw, ou_q);
            const NotionalPaths notionals =
                notional_paths(sc.mortgage, sc.sigmoid, node_paths, sc.hw, incentive, sc.mode);
            const LsmResult lsm = price_epo(node_paths, notionals, sc.mortgage, sc.hw, sc.lsm);
            const PathMatrix cfs = epo_cashflows(node_paths, notionals, sc.mortgage, sc.hw);
            const WealthPath wv = epo_wealth(lsm, cfs, node_paths, sc.mortgage);
            const QuadraticCoefficients qc =
                quadratic_coefficients(wv, hedge_wealth, grid, sc.alpha, sc.window_begin,
                                       sc.window_end, sc.alpha_power);
            for (std::size_t s = 0; s < sc.roster.size(); ++s)
                tables.target_nodes[s](ia, jt) = qc.target(static_cast<Eigen::Index>(s));
            tables.exposure_nodes(ia, jt) = qc.exposure;
            if (!have_cross) {
                tables.cross = qc.cross;
                have_cross = true;
            }
        }
    }
    return tables;
}

SplineSurface fit_spline(const NodalTables& tables) {
    SplineSurface surface;
    surface.cross = tables.cross;
    for (const auto& y : tables.target_nodes)
        surface.target.emplace_back(tables.alphas, tables.thetas, y);
    surface.exposure = Spline2D(tables.alphas, tables.thetas, tables.exposure_nodes);
    double resid = 0.0;
    for (std::size_t ia = 0; ia < tables.alphas.size(); ++ia)
        for (std::size_t jt = 0; jt < tables.thetas.size(); ++jt) {
            const double a = tables.alphas[ia], t = tables.thetas[jt];
            for (std::size_t s = 0; s < surface.target.size(); ++s) {
                const double node = tables.target_nodes[s](ia, jt);
                const double rel = std::abs(surface.target[s].value(a, t) - node) /
                                   std::max(std::abs(node), 1.0);
                resid = std::max(resid, rel);
            }
            const double nodez = tables.exposure_nodes(ia, jt);
            resid = std::max(resid, std::abs(surface.exposure.value(a, t) - nodez) /
                                        std::max(std::abs(nodez), 1.0));
        }
    surface.max_node_residual = resid;
    return surface;
}

namespace {

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd evals = es.eigenvalues();
    const double tol = std::max(evals.cwiseAbs().maxCoeff(), 1e-300) * 1e-13;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > tol) inv(i) = 1.0 / evals(i);
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

ProjectedLoss make_projected_loss(const SplineSurface& surface) {
    ProjectedLoss pl;
    pl.surface = &surface;
    pl.cross_pinv = pseudo_inverse(surface.cross);
    return pl;
}

Eigen::VectorXd ProjectedLoss::allocations(double alpha, double theta) const {
    const std::size_t n = surface->target.size();
    Eigen::VectorXd y(n);
    for (std::size_t s = 0; s < n; ++s) y(s) = surface->target[s].value(alpha, theta);
    return cross_pinv * y;
}

double ProjectedLoss::value(double alpha, double theta) const {
    const std::size_t n = surface->target.size();
    Eigen::VectorXd y(n);
    for (std::size_t s = 0; s < n; ++s) y(s) = surface->target[s].value(alpha, theta);
    return surface->exposure.value(alpha, theta) - y.dot(cross_pinv * y);
}

double ProjectedLoss::loss_at(const Eigen::VectorXd& w, double alpha, double theta) const {
    const std::size_t n = surface->target.size();
    Eigen::VectorXd y(n);
    for (std::size_t s = 0; s < n; ++s) y(s) = surface->target[s].value(alpha, theta);
    return w.dot(surface->cross * w) - 2.0 * y.dot(w) + surface->exposure.value(alpha, theta);
}

Eigen::Vector2d ProjectedLoss::gradient(double alpha, double theta) const {
    const std::size_t n = surface->target.size();
    Eigen::VectorXd y(n), ya(n), yt(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto p = surface->target[s].partials(alpha, theta);
        y(s) = p.value;
        ya(s) = p.dx;
        yt(s) = p.dy;
    }
    const Eigen::VectorXd c = cross_pinv * y;
    const auto pz = surface->exposure.partials(alpha, theta);
    return {pz.dx - 2.0 * ya.dot(c), pz.dy - 2.0 * yt.dot(c)};
}

Eigen::Matrix2d ProjectedLoss::hessian(double alpha, double theta) const {
    const std::size_t n = surface->target.size();
    Eigen::VectorXd y(n), ya(n), yt(n), yaa(n), yat(n), ytt(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto p = surface->target[s].partials(alpha, theta);
        y(s) = p.value;
        ya(s) = p.dx;
        yt(s) = p.dy;
        yaa(s) = p.dxx;
        yat(s) = p.dxy;
        ytt(s) = p.dyy;
    }
    const Eigen::VectorXd c = cross_pinv * y;
    const auto pz = surface->exposure.partials(alpha, theta);
    Eigen::Matrix2d h;
    h(0, 0) = pz.dxx - 2.0 * (yaa.dot(c) + ya.dot(cross_pinv * ya));
    h(1, 1) = pz.dyy - 2.0 * (ytt.dot(c) + yt.dot(cross_pinv * yt));
    h(0, 1) = pz.dxy - 2.0 * (yat.dot(c) + ya.dot(cross_pinv * yt));
    h(1, 0) = h(0, 1);
    return h;
}

std::vector<CriticalPoint> find_critical_points(const SplineSurface& surface,
                                                const DomainGeometry& domain, int scan) {
    const ProjectedLoss pl = make_projected_loss(surface);
    const double a_lo = domain.spec.alpha_min, a_hi = domain.spec.alpha_max;
    const double t_lo = domain.spec.theta_min, t_hi = domain.spec.theta_max;
    const double a_span = a_hi - a_lo, t_span = t_hi - t_lo;

    const int n = scan;
    std::vector<double> ga((n + 1) * (n + 1)), gt((n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double a = a_lo + a_span * i / n;
            const double t = t_lo + t_span * j / n;
            const Eigen::Vector2d g = pl.gradient(a, t);
            ga[i * (n + 1) + j] = g(0);
            gt[i * (n + 1) + j] = g(1);
        }

    auto sign_change = [](double w, double x, double y, double z) {
        const double lo = std::min(std::min(w, x), std::min(y, z));
        const double hi = std::max(std::max(w, x), std::max(y, z));
        return lo <= 0.0 && hi >= 0.0;
    };

    std::vector<CriticalPoint> found;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k00 = i * (n + 1) + j, k01 = k00 + 1;
            const int k10 = k00 + (n + 1), k11 = k10 + 1;
            if (!sign_change(ga[k00], ga[k01], ga[k10], ga[k11])) continue;
            if (!sign_change(gt[k00], gt[k01], gt[k10], gt[k11])) continue;
            // Newton polish from the cell center
            double a = a_lo + a_span * (i + 0.5) / n;
            double t = t_lo + t_span * (j + 0.5) / n;
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                const Eigen::Vector2d g = pl.gradient(a, t);
                const Eigen::Matrix2d h = pl.hessian(a, t);
                const double det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
                if (std::abs(det) < 1e-300) break;
                Eigen::Vector2d step = h.inverse() * g;
                step(0) = std::clamp(step(0), -2.0 * a_span / n, 2.0 * a_span / n);
                step(1) = std::clamp(step(1), -2.0 * t_span / n, 2.0 * t_span / n);
                a = std::clamp(a - step(0), a_lo, a_hi);
                t = std::clamp(t - step(1), t_lo, t_hi);
                if (std::abs(step(0)) < 1e-12 * a_span && std::abs(step(1)) < 1e-12 * t_span) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                const Eigen::Vector2d g = pl.gradient(a, t);
                const double scale = std::max(std::abs(g(0)) * a_span, std::abs(g(1)) * t_span);
                ok = scale < 1e-6 * std::max(std::abs(pl.value(a, t)), 1.0);
            }
            if (!ok) continue;
            {
                // isolated zeros only: a flat gradient field is not a solution
                const Eigen::Matrix2d h = pl.hessian(a, t);
                const double hs = std::max({std::abs(h(0, 0)) * a_span * a_span,
                                            std::abs(h(1, 1)) * t_span * t_span,
                                            std::abs(h(0, 1)) * a_span * t_span});
                const double det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
                if (!(std::abs(det) * a_span * a_span * t_span * t_span >
                      1e-16 * std::max(hs * hs, 1e-300)))
                    continue;
            }
            // interior only; the boundary scan reports edge solutions
            const double margin_a = 1e-6 * a_span, margin_t = 1e-6 * t_span;
            if (a <= a_lo + margin_a || a >= a_hi - margin_a || t <= t_lo + margin_t ||
                t >= t_hi - margin_t)
                continue;
            bool dup = false;
            for (const auto& c : found)
                if (std::abs(c.alpha - a) < 1e-4 * a_span && std::abs(c.theta - t) < 1e-4 * t_span)
                    dup = true;
            if (dup) continue;
            CriticalPoint cp;
            cp.alpha = a;
            cp.theta = t;
            const auto lam = domain.to_lambda(a, t);
            cp.lambda0 = lam[0];
            cp.lambda1 = lam[1];
            cp.allocations = pl.allocations(a, t);
            cp.loss = pl.value(a, t);
            cp.hessian = pl.hessian(a, t);
            found.push_back(std::move(cp));
        }
    }
    return found;
}

namespace {

void classify(CriticalPoint& cp) {
    const double tr = cp.hessian(0, 0) + cp.hessian(1, 1);
    const double det = cp.hessian(0, 0) * cp.hessian(1, 1) - cp.hessian(0, 1) * cp.hessian(1, 0);
    if (!std::isfinite(tr) || !std::isfinite(det)) {
        cp.kind = CriticalKind::Unclassified;
        return;
    }
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    cp.eigenvalues = {0.5 * (tr - disc), 0.5 * (tr + disc)};
    const double scale = std::max({std::abs(cp.eigenvalues[0]), std::abs(cp.eigenvalues[1]), 1e-300});
    const double tol = 1e-10 * scale;
    if (cp.eigenvalues[1] < -tol)
        cp.kind = CriticalKind::Saddle;  // concave in lambda, convex in w
    else if (cp.eigenvalues[0] > tol)
        cp.kind = CriticalKind::Minimum;
    else
        cp.kind = CriticalKind::Indefinite;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::vector<CriticalPoint> SaddleReport::saddles() const {
    std::vector<CriticalPoint> out;
    for (const auto& c : critical_points)
        if (c.kind == CriticalKind::Saddle) out.push_back(c);
    return out;
}

std::vector<BoundarySolution> SaddleReport::robust_boundary() const {
    std::vector<BoundarySolution> out;
    for (const auto& b : boundary)
        if (b.robust) out.push_back(b);
    return out;
}

SaddleReport classify_and_boundary(const std::vector<CriticalPoint>& candidates,
                                   const SplineSurface& surface, const DomainGeometry& domain,
                                   int edge_scan) {
    const ProjectedLoss pl = make_projected_loss(surface);
    SaddleReport report;
    report.critical_points = candidates;
    for (auto& cp : report.critical_points) classify(cp);

    const double a_lo = domain.spec.alpha_min, a_hi = domain.spec.alpha_max;
    const double t_lo = domain.spec.theta_min, t_hi = domain.spec.theta_max;
    const double a_span = a_hi - a_lo, t_span = t_hi - t_lo;

    struct Edge {
        int id;
        bool along_alpha;    // parameter runs over alpha
        double fixed;        // the fixed coordinate
        double lo, hi;       // parameter range
        double inward_sign;  // sign of the inward normal in the fixed coordinate
    };
    const std::array<Edge, 4> edges = {{{0, false, a_lo, t_lo, t_hi, +1.0},
                                        {1, false, a_hi, t_lo, t_hi, -1.0},
                                        {2, true, t_lo, a_lo, a_hi, +1.0},
                                        {3, true, t_hi, a_lo, a_hi, -1.0}}};
    for (const auto& e : edges) {
        auto point = [&](double s) {
            return e.along_alpha ? std::array<double, 2>{s, e.fixed}
                                 : std::array<double, 2>{e.fixed, s};
        };
        auto g_of = [&](double s) {
            const auto [a, t] = point(s);
            return pl.value(a, t);
        };
        const int n = edge_scan;
        std::vector<double> gs(n + 1);
        for (int i = 0; i <= n; ++i) gs[i] = g_of(e.lo + (e.hi - e.lo) * i / n);
        const double ds = (e.hi - e.lo) / n;
        std::vector<double> maxima;
        for (int i = 0; i <= n; ++i) {
            const bool left_ok = i == 0 || gs[i] >= gs[i - 1];
            const bool right_ok = i == n || gs[i] >= gs[i + 1];
            const bool strict = (i > 0 && gs[i] > gs[i - 1]) || (i < n && gs[i] > gs[i + 1]);
            if (left_ok && right_ok && strict) {
                const double lo = e.lo + std::max(i - 1, 0) * ds;
                const double hi = e.lo + std::min(i + 1, n) * ds;
                maxima.push_back(golden_max(g_of, lo, hi));
            }
        }
        for (double s : maxima) {
            const auto [a, t] = point(s);
            BoundarySolution bs;
            bs.edge = e.id;
            bs.alpha = a;
            bs.theta = t;
            const auto lam = domain.to_lambda(a, t);
            bs.lambda0 = lam[0];
            bs.lambda1 = lam[1];
            bs.allocations = pl.allocations(a, t);
            bs.loss = pl.value(a, t);
            const Eigen::Vector2d grad = pl.gradient(a, t);
            const double inward = e.along_alpha ? grad(1) * e.inward_sign : grad(0) * e.inward_sign;
            bs.inward_derivative = inward;
            const double span = e.along_alpha ? t_span : a_span;
            bs.robust = inward * span <= 1e-6 * std::max(std::abs(bs.loss), 1.0);
            bool dup = false;
            for (const auto& other : report.boundary)
                if (std::abs(other.alpha - a) < 1e-6 * a_span &&
                    std::abs(other.theta - t) < 1e-6 * t_span)
                    dup = true;
            if (!dup) report.boundary.push_back(std::move(bs));
        }
    }

    // Dominance of theta-moves over alpha-moves beyond the saddle: compare
    // the alpha-gradient on the theta-stationary curve against the 10th
    // percentile of |d loss / d theta| over the domain.
    double saddle_alpha = a_lo;
    bool have_saddle = false;
    for (const auto& cp : report.critical_points)
        if (cp.kind == CriticalKind::Saddle) {
            saddle_alpha = std::max(saddle_alpha, cp.alpha);
            have_saddle = true;
        }
    {
        const int n_fine = 160;
        std::vector<double> abs_gt;
        abs_gt.reserve((n_fine + 1) * (n_fine + 1));
        double max_ga = 0.0;
        for (int i = 0; i <= n_fine; ++i) {
            const double a = a_lo + a_span * i / n_fine;
            double prev_gt = 0.0;
            double prev_t = t_lo;
            for (int j = 0; j <= n_fine; ++j) {
                const double t = t_lo + t_span * j / n_fine;
                const Eigen::Vector2d g = pl.gradient(a, t);
                abs_gt.push_back(std::abs(g(1)));
                if (have_saddle && a > saddle_alpha && j > 0 && prev_gt * g(1) < 0.0) {
                    // theta-stationary curve crossing; bisect for the root
                    double lo = prev_t, hi = t;
                    for (int b = 0; b < 40; ++b) {
                        const double mid = 0.5 * (lo + hi);
                        const double gm = pl.gradient(a, mid)(1);
                        if (gm * prev_gt <= 0.0)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    const double root = 0.5 * (lo + hi);
                    max_ga = std::max(max_ga, std::abs(pl.gradient(a, root)(0)));
                }
                prev_gt = g(1);
                prev_t = t;
            }
        }
        std::sort(abs_gt.begin(), abs_gt.end());
        report.semi_robust.theta_gradient_p10 = abs_gt[abs_gt.size() / 10];
        report.semi_robust.max_alpha_gradient = max_ga;
        report.semi_robust.holds =
            have_saddle && max_ga < report.semi_robust.theta_gradient_p10;
    }
    return report;
}

std::vector<std::array<double, 3>> ascent_trajectory(const SplineSurface& surface,
                                                     const DomainGeometry& domain, double alpha0,
                                                     double theta0, int max_steps) {
    const ProjectedLoss pl = make_projected_loss(surface);
    const double a_lo = domain.spec.alpha_min, a_hi = domain.spec.alpha_max;
    const double t_lo = domain.spec.theta_min, t_hi = domain.spec.theta_max;
    const double a_span = a_hi - a_lo, t_span = t_hi - t_lo;

    std::vector<std::array<double, 3>> traj;
    double a = std::clamp(alpha0, a_lo, a_hi);
    double t = std::clamp(theta0, t_lo, t_hi);
    double h = 0.02;
    double g = pl.value(a, t);
    traj.push_back({a, t, g});
    for (int step = 0; step < max_steps && h > 1e-7; ++step) {
        Eigen::Vector2d grad = pl.gradient(a, t);
        // normalized coordinates, with boundary components projected out
        Eigen::Vector2d dir(grad(0) * a_span, grad(1) * t_span);
        if ((a <= a_lo + 1e-12 && dir(0) < 0.0) || (a >= a_hi - 1e-12 && dir(0) > 0.0)) dir(0) = 0.0;
        if ((t <= t_lo + 1e-12 && dir(1) < 0.0) || (t >= t_hi - 1e-12 && dir(1) > 0.0)) dir(1) = 0.0;
        const double norm = dir.norm();
        if (norm < 1e-10 * std::max(std::abs(g), 1.0)) break;
        const double a_new = std::clamp(a + h * dir(0) / norm * a_span, a_lo, a_hi);
        const double t_new = std::clamp(t + h * dir(1) / norm * t_span, t_lo, t_hi);
        const double g_new = pl.value(a_new, t_new);
        if (g_new > g) {
            a = a_new;
            t = t_new;
            g = g_new;
            traj.push_back({a, t, g});
        } else {
            h *= 0.5;
        }
    }
    return traj;
}

} // namespace epo
