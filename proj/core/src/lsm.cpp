#include "epo/lsm.hpp"

#include "epo/parallel.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace epo {

namespace {
constexpr double kDateTol = 1e-9;
}

std::size_t RegressionBasis::size() const {
    const std::size_t d = static_cast<std::size_t>(degree);
    return (d + 1) * (d + 2) * (d + 3) / 6;
}

std::vector<std::array<int, 3>> RegressionBasis::exponents() const {
    std::vector<std::array<int, 3>> out;
    for (int total = 0; total <= degree; ++total)
        for (int e0 = total; e0 >= 0; --e0)
            for (int e1 = total - e0; e1 >= 0; --e1)
                out.push_back({e0, e1, total - e0 - e1});
    return out;
}

void LsmConfig::validate() const {
    if (basis.degree < 0) throw std::invalid_argument("LsmConfig: degree must be nonnegative");
    if (ridge < 0.0) throw std::invalid_argument("LsmConfig: ridge must be nonnegative");
}

Eigen::VectorXd ridge_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                                    double ridge) {
    if (design.rows() != targets.size())
        throw std::invalid_argument("ridge_least_squares: row count mismatch");
    if (ridge < 0.0) throw std::invalid_argument("ridge_least_squares: ridge must be nonnegative");
    if (ridge == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < design.cols())
            throw std::runtime_error("ridge_least_squares: rank-deficient design requires ridge > 0");
        return qr.solve(targets);
    }
    const double n = static_cast<double>(design.rows());
    Eigen::MatrixXd gram = design.transpose() * design / n;
    gram.diagonal().array() += ridge;
    const Eigen::VectorXd rhs = design.transpose() * targets / n;
    return gram.ldlt().solve(rhs);
}

namespace {

struct StepContext {
    std::vector<std::array<int, 3>> exps;
    std::size_t n_basis = 0;
};

// Cross-sectional mean/scale of the raw state features at one node.
void standardize_node(const PathSet& paths, const PathMatrix& notional, std::size_t k,
                      LsmStepFit& fit) {
    const std::size_t n = paths.n_paths();
    const std::size_t n_blocks = (n + kPathBlock - 1) / kPathBlock;
    std::vector<std::array<double, 6>> partial(n_blocks, {0, 0, 0, 0, 0, 0});
    parallel_blocks(n, kPathBlock, [&](std::size_t beg, std::size_t end) {
        auto& acc = partial[beg / kPathBlock];
        for (std::size_t i = beg; i < end; ++i) {
            const double x0 = paths.rate(i, k), x1 = paths.behavior(i, k), x2 = notional(i, k);
            acc[0] += x0;
            acc[1] += x1;
            acc[2] += x2;
            acc[3] += x0 * x0;
            acc[4] += x1 * x1;
            acc[5] += x2 * x2;
        }
    });
    std::array<double, 6> sums{};
    for (const auto& acc : partial)
        for (int j = 0; j < 6; ++j) sums[j] += acc[j];
    for (int f = 0; f < 3; ++f) {
        const double mean = sums[f] / static_cast<double>(n);
        const double var = std::max(sums[f + 3] / static_cast<double>(n) - mean * mean, 0.0);
        const double sd = std::sqrt(var);
        fit.mean[f] = mean;
        fit.scale[f] = sd > 1e-12 * (1.0 + std::abs(mean)) ? 1.0 / sd : 0.0;
    }
}

inline void basis_row(const StepContext& ctx, const LsmStepFit& fit, double r, double b, double nn,
                      double* out) {
    const double z0 = (r - fit.mean[0]) * fit.scale[0];
    const double z1 = (b - fit.mean[1]) * fit.scale[1];
    const double z2 = (nn - fit.mean[2]) * fit.scale[2];
    double p0[4] = {1, z0, z0 * z0, z0 * z0 * z0};
    double p1[4] = {1, z1, z1 * z1, z1 * z1 * z1};
    double p2[4] = {1, z2, z2 * z2, z2 * z2 * z2};
    for (std::size_t l = 0; l < ctx.n_basis; ++l) {
        const auto& e = ctx.exps[l];
        out[l] = p0[e[0]] * p1[e[1]] * p2[e[2]];
    }
}

// Fits one or two targets against the node's basis by normal equations,
// accumulated over fixed path blocks so results do not depend on threading.
void fit_node(const StepContext& ctx, const PathSet& paths, const PathMatrix& notional,
              std::size_t k, const std::vector<double>& y1, const std::vector<double>* y2,
              double ridge, LsmStepFit& fit, Eigen::VectorXd& beta1, Eigen::VectorXd& beta2) {
    const std::size_t n = paths.n_paths();
    const std::size_t p = ctx.n_basis;
    standardize_node(paths, notional, k, fit);

    const std::size_t n_blocks = (n + kPathBlock - 1) / kPathBlock;
    std::vector<Eigen::MatrixXd> gram_part(n_blocks, Eigen::MatrixXd::Zero(p, p));
    std::vector<Eigen::VectorXd> rhs1_part(n_blocks, Eigen::VectorXd::Zero(p));
    std::vector<Eigen::VectorXd> rhs2_part(n_blocks, Eigen::VectorXd::Zero(p));
    parallel_blocks(n, kPathBlock, [&](std::size_t beg, std::size_t end) {
        const std::size_t blk = beg / kPathBlock;
        auto& gram = gram_part[blk];
        auto& r1 = rhs1_part[blk];
        auto& r2 = rhs2_part[blk];
        std::vector<double> row(p);
        for (std::size_t i = beg; i < end; ++i) {
            basis_row(ctx, fit, paths.rate(i, k), paths.behavior(i, k), notional(i, k), row.data());
            for (std::size_t a = 0; a < p; ++a) {
                const double ra = row[a];
                for (std::size_t bcol = a; bcol < p; ++bcol) gram(a, bcol) += ra * row[bcol];
                r1(a) += ra * y1[i];
                if (y2) r2(a) += ra * (*y2)[i];
            }
        }
    });
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd rhs1 = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(p);
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        gram += gram_part[blk];
        rhs1 += rhs1_part[blk];
        if (y2) rhs2 += rhs2_part[blk];
    }
    const double dn = static_cast<double>(n);
    gram /= dn;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t bcol = a + 1; bcol < p; ++bcol) gram(bcol, a) = gram(a, bcol);
    rhs1 /= dn;
    rhs2 /= dn;

    if (ridge > 0.0) {
        gram.diagonal().array() += ridge;
        const auto ldlt = gram.ldlt();
        beta1 = ldlt.solve(rhs1);
        if (y2) beta2 = ldlt.solve(rhs2);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
        if (qr.rank() < static_cast<Eigen::Index>(p))
            throw std::runtime_error("price_epo: rank-deficient regression requires ridge > 0");
        beta1 = qr.solve(rhs1);
        if (y2) beta2 = qr.solve(rhs2);
    }
    fit.fitted = true;
}

struct Precomputed {
    PathMatrix bond_to_next;      // P(t; next payment)
    PathMatrix notional_prefix;   // running trapezoid of the prepayment notional
    PathMatrix spread;            // K - fixing of the period covering the node
    std::vector<std::size_t> next_pay_node;
    std::vector<std::size_t> prev_reset_node;
    std::vector<char> past_maturity;
};

Precomputed precompute(const PathSet& paths, const NotionalPaths& notionals,
                       const MortgageSpec& spec, const HullWhiteParams& params) {
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const std::size_t n_paths = paths.n_paths();
    Precomputed pc;
    pc.bond_to_next = PathMatrix(n_paths, n_nodes);
    pc.notional_prefix = PathMatrix(n_paths, n_nodes);
    pc.spread = PathMatrix(n_paths, n_nodes);
    pc.next_pay_node.resize(n_nodes);
    pc.prev_reset_node.resize(n_nodes);
    pc.past_maturity.assign(n_nodes, 0);

    const auto& pay = spec.payment_dates;
    std::vector<std::size_t> pay_nodes(pay.size());
    for (std::size_t j = 0; j < pay.size(); ++j) pay_nodes[j] = grid.index_of(pay[j]);
    const std::size_t issue_node = grid.index_of(spec.issue);

    std::vector<std::size_t> period_of(n_nodes, pay.size());
    {
        std::size_t j = 0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            while (j < pay.size() && grid.time(k) > pay[j] + kDateTol) ++j;
            if (j == pay.size()) {
                pc.past_maturity[k] = 1;
                pc.next_pay_node[k] = k;
                pc.prev_reset_node[k] = k;
            } else {
                period_of[k] = j;
                pc.next_pay_node[k] = pay_nodes[j];
                pc.prev_reset_node[k] = j == 0 ? issue_node : pay_nodes[j - 1];
            }
        }
    }

    // Affine bond coefficients per node, fixing coefficients per period.
    std::vector<HullWhiteParams::ZcbCoeffs> to_next(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k)
        if (!pc.past_maturity[k])
            to_next[k] = params.zcb_coeffs(grid.time(k), grid.time(pc.next_pay_node[k]));
    std::vector<HullWhiteParams::ZcbCoeffs> fixing_coeffs(pay.size());
    std::vector<double> delta(pay.size());
    for (std::size_t j = 0; j < pay.size(); ++j) {
        const double t_prev = j == 0 ? spec.issue : pay[j - 1];
        fixing_coeffs[j] = params.zcb_coeffs(t_prev, pay[j]);
        delta[j] = pay[j] - t_prev;
    }

    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        std::vector<double> fixing(pay.size());
        for (std::size_t i = beg; i < end; ++i) {
            const double* r = paths.rate.row(i);
            const double* nn = notionals.prepayment.row(i);
            double* bond = pc.bond_to_next.row(i);
            double* prefix = pc.notional_prefix.row(i);
            double* spread = pc.spread.row(i);
            for (std::size_t j = 0; j < pay.size(); ++j) {
                const std::size_t reset_node = j == 0 ? issue_node : pay_nodes[j - 1];
                const double p = fixing_coeffs[j].price(r[reset_node]);
                fixing[j] = (1.0 / p - 1.0) / delta[j];
            }
            prefix[0] = 0.0;
            for (std::size_t k = 1; k < n_nodes; ++k)
                prefix[k] = prefix[k - 1] +
                            0.5 * (nn[k - 1] + nn[k]) * (grid.time(k) - grid.time(k - 1));
            for (std::size_t k = 0; k < n_nodes; ++k) {
                if (pc.past_maturity[k]) {
                    bond[k] = 1.0;
                    spread[k] = 0.0;
                } else {
                    bond[k] = k == pc.next_pay_node[k] ? 1.0 : to_next[k].price(r[k]);
                    spread[k] = spec.fixed_rate - fixing[period_of[k]];
                }
            }
        }
    });
    return pc;
}

} // namespace

LsmResult price_epo(const PathSet& paths, const NotionalPaths& notionals, const MortgageSpec& spec,
                    const HullWhiteParams& params, const LsmConfig& config, LsmFit* capture_fit) {
    config.validate();
    spec.validate();
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const std::size_t n_paths = paths.n_paths();
    notionals.prepayment.require_shape(n_paths, n_nodes, "price_epo: notionals");
    for (double t : spec.payment_dates) grid.index_of(t);
    for (double t : spec.reset_dates()) grid.index_of(t);

    const Precomputed pc = precompute(paths, notionals, spec, params);
    StepContext ctx{config.basis.exponents(), config.basis.size()};

    LsmResult res;
    res.value = PathMatrix(n_paths, n_nodes);
    res.last_node = n_nodes - 1;
    if (capture_fit) {
        capture_fit->config = config;
        capture_fit->steps.assign(n_nodes, {});
    }

    std::vector<double> pending(n_paths, 0.0);  // fitted within-period integral
    std::vector<double> future(n_paths, 0.0);   // fitted value of later flows
    std::vector<double> y_cf(n_paths), y_fv(n_paths);
    std::vector<double> row(ctx.n_basis);

    for (std::size_t kk = n_nodes - 1; kk-- > 0;) {
        const std::size_t k = kk;
        if (pc.past_maturity[k]) continue;  // value stays zero, states untouched

        LsmStepFit fit;
        Eigen::VectorXd beta_cf, beta_fv;
        if (grid.is_reset(k)) {
            parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
                for (std::size_t i = beg; i < end; ++i)
                    y_fv[i] = paths.money_account(i, k) / paths.money_account(i, k + 1) *
                              res.value(i, k + 1);
            });
            fit_node(ctx, paths, notionals.prepayment, k, y_fv, nullptr, config.ridge, fit,
                     beta_fv, beta_cf);
            beta_cf = Eigen::VectorXd::Zero(ctx.n_basis);
            fit.beta_pending = beta_cf;
            fit.beta_future = beta_fv;
        } else {
            parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
                for (std::size_t i = beg; i < end; ++i) {
                    const double disc = paths.money_account(i, k) / paths.money_account(i, k + 1);
                    const double step_integral =
                        pc.notional_prefix(i, k + 1) - pc.notional_prefix(i, k);
                    y_cf[i] = disc * (pc.bond_to_next(i, k + 1) * step_integral + pending[i]);
                    y_fv[i] = disc * future[i];
                }
            });
            fit_node(ctx, paths, notionals.prepayment, k, y_cf, &y_fv, config.ridge, fit, beta_cf,
                     beta_fv);
            fit.beta_pending = beta_cf;
            fit.beta_future = beta_fv;
        }
        if (capture_fit) capture_fit->steps[k] = fit;

        const bool at_reset = grid.is_reset(k);
        parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
            std::vector<double> feat(ctx.n_basis);
            for (std::size_t i = beg; i < end; ++i) {
                basis_row(ctx, fit, paths.rate(i, k), paths.behavior(i, k),
                          notionals.prepayment(i, k), feat.data());
                double fut = 0.0, pend = 0.0;
                for (std::size_t l = 0; l < ctx.n_basis; ++l) fut += beta_fv(l) * feat[l];
                if (!at_reset)
                    for (std::size_t l = 0; l < ctx.n_basis; ++l) pend += beta_cf(l) * feat[l];
                pending[i] = pend;
                future[i] = fut;
                const double known =
                    pc.bond_to_next(i, k) *
                    (pc.notional_prefix(i, k) - pc.notional_prefix(i, pc.prev_reset_node[k]));
                res.value(i, k) = pc.spread(i, k) * (known + pend) + fut;
            }
        });
    }
    return res;
}

LsmResult price_epo_with_fit(const PathSet& paths, const NotionalPaths& notionals,
                             const MortgageSpec& spec, const HullWhiteParams& params,
                             const LsmFit& fit) {
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const std::size_t n_paths = paths.n_paths();
    if (fit.steps.size() != n_nodes)
        throw std::invalid_argument("price_epo_with_fit: fit/grid mismatch");
    const Precomputed pc = precompute(paths, notionals, spec, params);
    StepContext ctx{fit.config.basis.exponents(), fit.config.basis.size()};

    LsmResult res;
    res.value = PathMatrix(n_paths, n_nodes);
    res.last_node = n_nodes - 1;
    for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
        if (pc.past_maturity[k] || !fit.steps[k].fitted) continue;
        const LsmStepFit& sf = fit.steps[k];
        parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
            std::vector<double> feat(ctx.n_basis);
            for (std::size_t i = beg; i < end; ++i) {
                basis_row(ctx, sf, paths.rate(i, k), paths.behavior(i, k),
                          notionals.prepayment(i, k), feat.data());
                double fut = 0.0, pend = 0.0;
                for (std::size_t l = 0; l < ctx.n_basis; ++l) {
                    fut += sf.beta_future(l) * feat[l];
                    pend += sf.beta_pending(l) * feat[l];
                }
                const double known =
                    pc.bond_to_next(i, k) *
                    (pc.notional_prefix(i, k) - pc.notional_prefix(i, pc.prev_reset_node[k]));
                res.value(i, k) = pc.spread(i, k) * (known + pend) + fut;
            }
        });
    }
    return res;
}

PriceAtZero price_epo_at_zero(const PathSet& paths, const NotionalPaths& notionals,
                              const MortgageSpec& spec, const HullWhiteParams& params,
                              const LsmConfig& config) {
    const LsmResult res = price_epo(paths, notionals, spec, params, config);
    const std::size_t n = paths.n_paths();
    PriceAtZero out;
    double mean_v0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_v0 += res.value(i, 0);
    out.value = mean_v0 / static_cast<double>(n);

    const PathMatrix cfs = epo_cashflows(paths, notionals, spec, params);
    std::vector<std::size_t> pay_nodes(spec.payment_dates.size());
    for (std::size_t j = 0; j < pay_nodes.size(); ++j)
        pay_nodes[j] = paths.grid.index_of(spec.payment_dates[j]);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double discounted = 0.0;
        for (std::size_t j = 0; j < pay_nodes.size(); ++j)
            discounted += cfs(i, j) / paths.money_account(i, pay_nodes[j]);
        sum += discounted;
        sum_sq += discounted * discounted;
    }
    const double dn = static_cast<double>(n);
    out.discounted_mean = sum / dn;
    const double var = std::max(sum_sq / dn - out.discounted_mean * out.discounted_mean, 0.0);
    out.stderr_ = std::sqrt(var / dn);
    return out;
}

} // namespace epo
