#include "epo/prepay.hpp"

#include "epo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

namespace {
constexpr double kDateTol = 1e-9;
}

void SigmoidParams::validate() const {
    if (lower < 0.0 || lower > upper)
        throw std::invalid_argument("SigmoidParams: need 0 <= lower <= upper");
    if (!rational && steepness < 0.0)
        throw std::invalid_argument("SigmoidParams: steepness must be nonnegative");
}

double SigmoidParams::response(double perceived_incentive) const {
    if (rational) {
        if (perceived_incentive > 0.0) return upper;
        if (perceived_incentive < 0.0) return lower;
        return 0.5 * (lower + upper);
    }
    return lower + 0.5 * (upper - lower) * (std::tanh(steepness * perceived_incentive) + 1.0);
}

namespace {

// Remaining-schedule bond coefficients for one grid node: bond i covers the
// date list {previous payment (or issue), remaining payments...}; period i
// spans (date[i-1], date[i]].
struct NodeSchedule {
    std::vector<HullWhiteParams::ZcbCoeffs> bonds;
    std::vector<double> notional;  // per period
    std::vector<double> delta;
};

NodeSchedule node_schedule(const MortgageSpec& spec, const HullWhiteParams& params, double t) {
    NodeSchedule ns;
    const auto& pay = spec.payment_dates;
    std::size_t first = 0;
    while (first < pay.size() && pay[first] <= t + kDateTol) ++first;
    if (first == pay.size()) return ns;
    const double prev0 = first == 0 ? spec.issue : pay[first - 1];
    ns.bonds.push_back(params.zcb_coeffs(t, prev0));
    for (std::size_t j = first; j < pay.size(); ++j) {
        const double t_prev = j == 0 ? spec.issue : pay[j - 1];
        ns.bonds.push_back(params.zcb_coeffs(t, pay[j]));
        ns.notional.push_back(contractual_notional(spec, t_prev));
        ns.delta.push_back(pay[j] - t_prev);
    }
    return ns;
}

double incentive_from_schedule(const NodeSchedule& ns, double fixed_rate, double short_rate,
                               std::vector<double>& bond_buf) {
    const std::size_t m = ns.notional.size();
    bond_buf.resize(ns.bonds.size());
    for (std::size_t i = 0; i < ns.bonds.size(); ++i) bond_buf[i] = ns.bonds[i].price(short_rate);
    double numerator = 0.0, annuity = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        numerator += ns.notional[i] * (bond_buf[i] - bond_buf[i + 1]);
        annuity += ns.notional[i] * ns.delta[i] * bond_buf[i + 1];
    }
    return fixed_rate - numerator / annuity;
}

void check_grid_coverage(const MortgageSpec& spec, const TimeGrid& grid) {
    if (std::abs(grid.time(0) - spec.issue) > kDateTol)
        throw std::invalid_argument("notional_paths: grid must start at the mortgage issue date");
    grid.index_of(spec.maturity()); // throws when the maturity is off-grid
}

} // namespace

PathMatrix incentive_matrix(const MortgageSpec& spec, const PathSet& paths,
                            const HullWhiteParams& params) {
    spec.validate();
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const double maturity = spec.maturity();
    std::vector<NodeSchedule> schedules(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k)
        if (grid.time(k) < maturity - kDateTol)
            schedules[k] = node_schedule(spec, params, grid.time(k));

    PathMatrix incentive(paths.n_paths(), n_nodes);
    parallel_blocks(paths.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        std::vector<double> bond_buf;
        for (std::size_t i = beg; i < end; ++i) {
            const double* r = paths.rate.row(i);
            double* out = incentive.row(i);
            for (std::size_t k = 0; k < n_nodes; ++k)
                out[k] = schedules[k].notional.empty()
                             ? 0.0
                             : incentive_from_schedule(schedules[k], spec.fixed_rate, r[k], bond_buf);
        }
    });
    return incentive;
}

double prepayment_rate(double t, double short_rate, double behavior, const MortgageSpec& spec,
                       const SigmoidParams& sigmoid, const HullWhiteParams& params) {
    sigmoid.validate();
    const auto sr = swap_rate_annuity(t, short_rate, spec, params);
    return sigmoid.response(spec.fixed_rate - sr.swap_rate + behavior);
}

NotionalPaths notional_paths(const MortgageSpec& spec, const SigmoidParams& sigmoid,
                             const PathSet& paths, const HullWhiteParams& params,
                             PrepaymentMode mode) {
    return notional_paths(spec, sigmoid, paths, params, incentive_matrix(spec, paths, params), mode);
}

NotionalPaths notional_paths(const MortgageSpec& spec, const SigmoidParams& sigmoid,
                             const PathSet& paths, const HullWhiteParams& params,
                             const PathMatrix& incentive, PrepaymentMode mode) {
    (void)params;
    spec.validate();
    sigmoid.validate();
    check_grid_coverage(spec, paths.grid);
    incentive.require_shape(paths.n_paths(), paths.n_nodes(), "notional_paths: incentive");

    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const double maturity = spec.maturity();

    NotionalPaths out;
    out.contractual.resize(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k)
        out.contractual[k] = contractual_notional(spec, grid.time(k));
    out.realized = PathMatrix(paths.n_paths(), n_nodes);
    out.prepayment = PathMatrix(paths.n_paths(), n_nodes);

    if (mode == PrepaymentMode::Continuous) {
        parallel_blocks(paths.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
            std::vector<double> rate(n_nodes);
            for (std::size_t i = beg; i < end; ++i) {
                const double* eps = incentive.row(i);
                const double* b = paths.behavior.row(i);
                double* realized = out.realized.row(i);
                double* prepay = out.prepayment.row(i);
                for (std::size_t k = 0; k < n_nodes; ++k)
                    rate[k] = grid.time(k) < maturity - kDateTol ? sigmoid.response(eps[k] + b[k]) : 0.0;
                double cum = 0.0;
                for (std::size_t k = 0; k < n_nodes; ++k) {
                    if (k > 0)
                        cum += 0.5 * (rate[k - 1] + rate[k]) * (grid.time(k) - grid.time(k - 1));
                    const double prepaid = spec.notional0 * cum;
                    const double nc = out.contractual[k];
                    realized[k] = std::max(nc - prepaid, 0.0);
                    prepay[k] = nc - realized[k];
                }
            }
        });
        return out;
    }

    // Reset-lump mode: a lump of upper * N0 * (period length) is prepaid at
    // each reset date where the prevailing swap rate plus the behavioral
    // spread sits below the contract rate.
    const std::vector<double> resets = spec.reset_dates();
    std::vector<std::size_t> reset_nodes;
    std::vector<double> lump;
    for (std::size_t j = 0; j < resets.size(); ++j) {
        reset_nodes.push_back(grid.index_of(resets[j]));
        const double next_pay = spec.payment_dates[j];
        lump.push_back(sigmoid.upper * spec.notional0 * (next_pay - resets[j]));
    }
    parallel_blocks(paths.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            const double* eps = incentive.row(i);
            const double* b = paths.behavior.row(i);
            double* realized = out.realized.row(i);
            double* prepay = out.prepayment.row(i);
            double prepaid = 0.0;
            std::size_t next_reset = 0;
            for (std::size_t k = 0; k < n_nodes; ++k) {
                if (next_reset < reset_nodes.size() && reset_nodes[next_reset] == k) {
                    // trigger: kappa + b < K, i.e. b below the incentive
                    if (b[k] < eps[k]) prepaid += lump[next_reset];
                    ++next_reset;
                }
                const double nc = out.contractual[k];
                realized[k] = std::max(nc - prepaid, 0.0);
                prepay[k] = nc - realized[k];
            }
        }
    });
    return out;
}

std::vector<double> epo_cashflow(const PathSet& paths, const NotionalPaths& notionals,
                                 const MortgageSpec& spec, const HullWhiteParams& params,
                                 std::size_t payment_index) {
    if (payment_index >= spec.payment_dates.size())
        throw std::out_of_range("epo_cashflow: payment index out of range");
    const double t_pay = spec.payment_dates[payment_index];
    const double t_reset = payment_index == 0 ? spec.issue : spec.payment_dates[payment_index - 1];
    const TimeGrid& grid = paths.grid;
    const std::size_t k_reset = grid.index_of(t_reset);
    const std::size_t k_pay = grid.index_of(t_pay);
    const double delta = t_pay - t_reset;
    const auto coeffs = params.zcb_coeffs(t_reset, t_pay);

    std::vector<double> cf(paths.n_paths());
    parallel_blocks(paths.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            const double p = coeffs.price(paths.rate(i, k_reset));
            const double fixing = (1.0 / p - 1.0) / delta;
            const double integral =
                trapezoid_idx(notionals.prepayment.row(i), grid.times(), k_reset, k_pay);
            cf[i] = (spec.fixed_rate - fixing) * integral;
        }
    });
    return cf;
}

PathMatrix epo_cashflows(const PathSet& paths, const NotionalPaths& notionals,
                         const MortgageSpec& spec, const HullWhiteParams& params) {
    PathMatrix out(paths.n_paths(), spec.payment_dates.size());
    for (std::size_t j = 0; j < spec.payment_dates.size(); ++j) {
        const auto cf = epo_cashflow(paths, notionals, spec, params, j);
        for (std::size_t i = 0; i < cf.size(); ++i) out(i, j) = cf[i];
    }
    return out;
}

} // namespace epo
