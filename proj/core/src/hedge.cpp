#include "epo/hedge.hpp"

#include "epo/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

double QuadraticCoefficients::loss_at(const Eigen::VectorXd& w) const {
    return w.dot(cross * w) - 2.0 * target.dot(w) + exposure;
}

QuadraticCoefficients quadratic_coefficients(const WealthPath& epo,
                                             const std::vector<WealthPath>& instruments,
                                             const TimeGrid& grid, const TimeWeight& alpha,
                                             double window_begin, double window_end,
                                             int alpha_power) {
    const std::size_t n_inst = instruments.size();
    const std::size_t n_paths = epo.value.paths();
    const std::size_t a = grid.index_of(window_begin);
    const std::size_t b = grid.index_of(window_end);
    for (const auto& inst : instruments)
        inst.value.require_shape(n_paths, grid.size(), "quadratic_coefficients");

    const std::size_t n_win = b - a + 1;
    // node means of all pairwise wealth products: instruments x instruments,
    // instruments x exposure, exposure^2
    Eigen::MatrixXd cross_node = Eigen::MatrixXd::Zero(n_inst * n_inst, n_win);
    Eigen::MatrixXd target_node = Eigen::MatrixXd::Zero(n_inst, n_win);
    Eigen::VectorXd expo_node = Eigen::VectorXd::Zero(n_win);

    const std::size_t n_blocks = (n_paths + kPathBlock - 1) / kPathBlock;
    std::vector<Eigen::MatrixXd> cross_part(n_blocks), target_part(n_blocks);
    std::vector<Eigen::VectorXd> expo_part(n_blocks);
    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        const std::size_t blk = beg / kPathBlock;
        Eigen::MatrixXd cp = Eigen::MatrixXd::Zero(n_inst * n_inst, n_win);
        Eigen::MatrixXd tp = Eigen::MatrixXd::Zero(n_inst, n_win);
        Eigen::VectorXd ep = Eigen::VectorXd::Zero(n_win);
        std::vector<double> wi(n_inst);
        for (std::size_t i = beg; i < end; ++i) {
            for (std::size_t kk = 0; kk < n_win; ++kk) {
                const std::size_t k = a + kk;
                const double wv = epo.wealth(i, k);
                for (std::size_t s = 0; s < n_inst; ++s) wi[s] = instruments[s].wealth(i, k);
                for (std::size_t s = 0; s < n_inst; ++s) {
                    for (std::size_t u = s; u < n_inst; ++u)
                        cp(s * n_inst + u, kk) += wi[s] * wi[u];
                    tp(s, kk) += wi[s] * wv;
                }
                ep(kk) += wv * wv;
            }
        }
        cross_part[blk] = std::move(cp);
        target_part[blk] = std::move(tp);
        expo_part[blk] = std::move(ep);
    });
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        cross_node += cross_part[blk];
        target_node += target_part[blk];
        expo_node += expo_part[blk];
    }
    const double dn = static_cast<double>(n_paths);
    cross_node /= dn;
    target_node /= dn;
    expo_node /= dn;

    // alpha^power-weighted trapezoid in time
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(n_win);
    for (std::size_t kk = 0; kk + 1 < n_win; ++kk) {
        const double t0 = grid.time(a + kk), t1 = grid.time(a + kk + 1);
        const double w0 = std::pow(alpha(t0), alpha_power);
        const double w1 = std::pow(alpha(t1), alpha_power);
        weight(kk) += 0.5 * w0 * (t1 - t0);
        weight(kk + 1) += 0.5 * w1 * (t1 - t0);
    }

    QuadraticCoefficients out;
    out.cross = Eigen::MatrixXd::Zero(n_inst, n_inst);
    out.target = Eigen::VectorXd::Zero(n_inst);
    for (std::size_t s = 0; s < n_inst; ++s) {
        for (std::size_t u = s; u < n_inst; ++u) {
            const double v = cross_node.row(s * n_inst + u).dot(weight);
            out.cross(s, u) = v;
            out.cross(u, s) = v;
        }
        out.target(s) = target_node.row(s).dot(weight);
    }
    out.exposure = expo_node.dot(weight);

    for (std::size_t s = 0; s < n_inst; ++s)
        if (out.cross(s, s) == 0.0)
            throw std::invalid_argument("quadratic_coefficients: instrument with all-zero wealth");
    return out;
}

HedgeSolution solve_quadratic(const Eigen::MatrixXd& cross, const Eigen::VectorXd& target,
                              double exposure) {
    if (cross.rows() != cross.cols() || cross.rows() != target.size())
        throw std::invalid_argument("solve_quadratic: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cross);
    const Eigen::VectorXd evals = es.eigenvalues();
    const double tol = std::max(evals.cwiseAbs().maxCoeff(), 1e-300) * 1e-13;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > tol) inv(i) = 1.0 / evals(i);
    const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    HedgeSolution sol;
    sol.allocations = pinv * target;
    sol.loss_value = sol.allocations.dot(cross * sol.allocations) -
                     2.0 * target.dot(sol.allocations) + exposure;
    sol.moment_part = sol.loss_value;
    const Eigen::VectorXd grad = 2.0 * (cross * sol.allocations - target);
    const double scale = std::max(2.0 * target.norm(), 1e-300);
    sol.gradient_norm = grad.norm() / scale;
    return sol;
}

namespace {

// Node-major view of the distance computation for repeated loss evaluation.
struct LossObjective {
    const TimeGrid* grid = nullptr;
    LossConfig config;
    std::size_t a = 0, n_win = 0, n_paths = 0;
    std::vector<std::vector<double>> epo_w;                // [node][path]
    std::vector<std::vector<std::vector<double>>> inst_w;  // [inst][node][path]
    std::vector<double> weight;                            // trapezoid x alpha per node

    LossObjective(const WealthPath& epo, const std::vector<WealthPath>& instruments,
                  const TimeGrid& g, const LossConfig& cfg)
        : grid(&g), config(cfg) {
        config.validate_on_grid(g);
        a = g.index_of(cfg.window_begin);
        const std::size_t b = g.index_of(cfg.window_end);
        n_win = b - a + 1;
        n_paths = epo.value.paths();
        epo_w.assign(n_win, std::vector<double>(n_paths));
        inst_w.assign(instruments.size(),
                      std::vector<std::vector<double>>(n_win, std::vector<double>(n_paths)));
        for (std::size_t kk = 0; kk < n_win; ++kk)
            for (std::size_t i = 0; i < n_paths; ++i) epo_w[kk][i] = epo.wealth(i, a + kk);
        for (std::size_t s = 0; s < instruments.size(); ++s)
            for (std::size_t kk = 0; kk < n_win; ++kk)
                for (std::size_t i = 0; i < n_paths; ++i)
                    inst_w[s][kk][i] = instruments[s].wealth(i, a + kk);
        weight.assign(n_win, 0.0);
        for (std::size_t kk = 0; kk + 1 < n_win; ++kk) {
            const double t0 = g.time(a + kk), t1 = g.time(a + kk + 1);
            weight[kk] += 0.5 * cfg.alpha(t0) * (t1 - t0);
            weight[kk + 1] += 0.5 * cfg.alpha(t1) * (t1 - t0);
        }
    }

    LossBreakdown evaluate(const Eigen::VectorXd& w) const {
        std::vector<double> moment_node(n_win, 0.0), es_node(n_win, 0.0);
        parallel_blocks(n_win, 4, [&](std::size_t beg, std::size_t end) {
            std::vector<double> col(n_paths);
            for (std::size_t kk = beg; kk < end; ++kk) {
                for (std::size_t i = 0; i < n_paths; ++i) {
                    double d = epo_w[kk][i];
                    for (std::size_t s = 0; s < inst_w.size(); ++s)
                        d -= w(static_cast<Eigen::Index>(s)) * inst_w[s][kk][i];
                    col[i] = d;
                }
                double acc = 0.0;
                for (double x : col) {
                    double ax = std::abs(x), m = ax;
                    for (int e = 1; e < config.p; ++e) m *= ax;
                    acc += m;
                }
                moment_node[kk] = acc / static_cast<double>(n_paths);
                const std::size_t rank =
                    static_cast<std::size_t>(std::ceil(config.q * static_cast<double>(n_paths)));
                auto nth = col.begin() + static_cast<std::ptrdiff_t>(std::min(rank, n_paths) - 1);
                std::nth_element(col.begin(), nth, col.end());
                const double quantile = *nth;
                double sum = 0.0;
                std::size_t count = 0;
                for (auto it = nth + 1; it != col.end(); ++it)
                    if (*it > quantile) {
                        sum += *it;
                        ++count;
                    }
                es_node[kk] = count == 0 ? quantile : sum / static_cast<double>(count);
            }
        });
        LossBreakdown out;
        for (std::size_t kk = 0; kk < n_win; ++kk) {
            out.moment += weight[kk] * moment_node[kk];
            out.shortfall += weight[kk] * es_node[kk];
        }
        out.total = out.moment + config.shortfall_weight * out.shortfall;
        return out;
    }
};

} // namespace

HedgeSolution solve_general(const WealthPath& epo, const std::vector<WealthPath>& instruments,
                            const TimeGrid& grid, const LossConfig& config,
                            const Eigen::VectorXd& initial, int max_evals) {
    const int dim = static_cast<int>(instruments.size());
    if (initial.size() != dim) throw std::invalid_argument("solve_general: initial size mismatch");
    LossObjective obj(epo, instruments, grid, config);
    if (max_evals <= 0) max_evals = 400 * dim;

    int evals = 0;
    auto f = [&](const Eigen::VectorXd& w) {
        ++evals;
        return obj.evaluate(w).total;
    };

    // Nelder-Mead with standard coefficients and a restart-free budget.
    const double scale = std::max(initial.cwiseAbs().maxCoeff(), 1.0);
    std::vector<Eigen::VectorXd> xs(dim + 1, initial);
    std::vector<double> fs(dim + 1);
    for (int i = 0; i < dim; ++i)
        xs[i + 1](i) += std::max(0.05 * std::abs(initial(i)), 0.02 * scale);
    for (int i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

    const double tol = 1e-9;
    bool converged = false;
    while (evals < max_evals) {
        std::vector<int> order(dim + 1);
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int l, int r) { return fs[l] < fs[r]; });
        std::vector<Eigen::VectorXd> xs2(dim + 1);
        std::vector<double> fs2(dim + 1);
        for (int i = 0; i <= dim; ++i) {
            xs2[i] = xs[order[i]];
            fs2[i] = fs[order[i]];
        }
        xs = std::move(xs2);
        fs = std::move(fs2);
        if (std::abs(fs[dim] - fs[0]) <= tol * (std::abs(fs[0]) + tol)) {
            converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < dim; ++i) centroid += xs[i];
        centroid /= dim;
        const Eigen::VectorXd reflected = centroid + (centroid - xs[dim]);
        const double fr = f(reflected);
        if (fr < fs[0]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[dim]);
            const double fe = f(expanded);
            if (fe < fr) {
                xs[dim] = expanded;
                fs[dim] = fe;
            } else {
                xs[dim] = reflected;
                fs[dim] = fr;
            }
        } else if (fr < fs[dim - 1]) {
            xs[dim] = reflected;
            fs[dim] = fr;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (xs[dim] - centroid);
            const double fc = f(contracted);
            if (fc < fs[dim]) {
                xs[dim] = contracted;
                fs[dim] = fc;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (fs[i] < fs[best]) best = i;

    HedgeSolution sol;
    sol.allocations = xs[best];
    const LossBreakdown bd = obj.evaluate(xs[best]);
    sol.loss_value = bd.total;
    sol.moment_part = bd.moment;
    sol.shortfall_part = bd.shortfall;
    sol.converged = converged;
    sol.gradient_norm = 0.0;
    return sol;
}

} // namespace epo
