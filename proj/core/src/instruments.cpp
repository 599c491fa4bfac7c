#include "epo/instruments.hpp"

#include "epo/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace epo {

namespace {
constexpr double kDateTol = 1e-9;
}

bool is_swap(InstrumentKind k) {
    return k == InstrumentKind::ReceiverSwap || k == InstrumentKind::PayerSwap;
}
bool is_swaption(InstrumentKind k) { return !is_swap(k); }

void InstrumentSpec::validate() const {
    if (payment_dates.empty()) throw std::invalid_argument("InstrumentSpec: no payment dates");
    double prev = start;
    for (double t : payment_dates) {
        if (t <= prev) throw std::invalid_argument("InstrumentSpec: schedule must be strictly increasing");
        prev = t;
    }
    if (!period_notionals.empty() && period_notionals.size() != payment_dates.size())
        throw std::invalid_argument("InstrumentSpec: period notionals/schedule size mismatch");
    if (is_swaption(kind)) {
        if (std::abs(maturity - start) > kDateTol)
            throw std::invalid_argument("InstrumentSpec: swaption maturity must equal the first reset");
        if (payment_dates.size() != 1)
            throw std::invalid_argument("InstrumentSpec: multi-period swaption underlyings are not supported");
    }
}

InstrumentSpec InstrumentSpec::swap(InstrumentKind kind, double strike, double start, double end,
                                    int payments_per_year, double notional) {
    if (payments_per_year < 1) throw std::invalid_argument("InstrumentSpec: payments_per_year >= 1");
    InstrumentSpec s;
    s.kind = kind;
    s.strike = strike;
    s.start = start;
    s.notional = notional;
    const double dt = 1.0 / payments_per_year;
    const int n = static_cast<int>(std::lround((end - start) * payments_per_year));
    for (int j = 1; j <= n; ++j) s.payment_dates.push_back(start + j * dt);
    s.payment_dates.back() = end;
    s.validate();
    return s;
}

InstrumentSpec InstrumentSpec::swaption(InstrumentKind kind, double strike, double start,
                                        double end, double notional) {
    InstrumentSpec s;
    s.kind = kind;
    s.strike = strike;
    s.start = start;
    s.payment_dates = {end};
    s.maturity = start;
    s.notional = notional;
    s.validate();
    return s;
}

PathMatrix WealthPath::wealth_matrix() const {
    PathMatrix w = value;
    const std::size_t n = w.data().size();
    for (std::size_t idx = 0; idx < n; ++idx) w.data()[idx] += cash.data()[idx];
    return w;
}

namespace {

void accrue_cash(PathMatrix& cash, const PathSet& paths,
                 const std::vector<std::pair<std::size_t, std::vector<double>>>& deposits) {
    const std::size_t n_nodes = paths.n_nodes();
    parallel_blocks(paths.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            double* c = cash.row(i);
            const double* m = paths.money_account.row(i);
            double level = 0.0;
            std::size_t d = 0;
            c[0] = 0.0;
            for (std::size_t k = 0; k < n_nodes; ++k) {
                if (k > 0) level *= m[k] / m[k - 1];
                while (d < deposits.size() && deposits[d].first == k) {
                    level += deposits[d].second[i];
                    ++d;
                }
                c[k] = level;
            }
        }
    });
}

} // namespace

WealthPath swap_wealth(const InstrumentSpec& spec, const PathSet& paths,
                       const HullWhiteParams& params) {
    spec.validate();
    if (!is_swap(spec.kind)) throw std::invalid_argument("swap_wealth: instrument is not a swap");
    const double sign = spec.kind == InstrumentKind::ReceiverSwap ? 1.0 : -1.0;
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const std::size_t n_paths = paths.n_paths();
    const auto& pay = spec.payment_dates;
    const std::size_t n_pay = pay.size();

    std::vector<double> notional(n_pay);
    std::vector<double> delta(n_pay);
    std::vector<double> reset_time(n_pay);
    for (std::size_t j = 0; j < n_pay; ++j) {
        notional[j] = spec.period_notionals.empty() ? spec.notional : spec.period_notionals[j];
        reset_time[j] = j == 0 ? spec.start : pay[j - 1];
        delta[j] = pay[j] - reset_time[j];
    }
    std::vector<std::size_t> pay_node(n_pay), reset_node(n_pay);
    for (std::size_t j = 0; j < n_pay; ++j) {
        pay_node[j] = grid.index_of(pay[j]);
        reset_node[j] = grid.index_of(reset_time[j]);
    }

    // Per node: index of the first period paying strictly later, plus bond
    // coefficients for every remaining schedule date.
    std::vector<std::size_t> first_period(n_nodes, n_pay);
    std::vector<std::vector<HullWhiteParams::ZcbCoeffs>> pay_coeffs(n_nodes);
    std::vector<HullWhiteParams::ZcbCoeffs> reset_coeffs(n_nodes);
    std::vector<char> reset_is_future(n_nodes, 0);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const double t = grid.time(k);
        std::size_t j = 0;
        while (j < n_pay && pay[j] <= t + kDateTol) ++j;
        first_period[k] = j;
        if (j == n_pay) continue;
        pay_coeffs[k].resize(n_pay - j);
        for (std::size_t jj = j; jj < n_pay; ++jj)
            pay_coeffs[k][jj - j] = params.zcb_coeffs(t, pay[jj]);
        if (reset_time[j] >= t - kDateTol) {
            reset_is_future[k] = 1;
            reset_coeffs[k] = params.zcb_coeffs(t, reset_time[j]);
        }
    }
    std::vector<HullWhiteParams::ZcbCoeffs> fixing_coeffs(n_pay);
    for (std::size_t j = 0; j < n_pay; ++j)
        fixing_coeffs[j] = params.zcb_coeffs(reset_time[j], pay[j]);

    WealthPath wp;
    wp.value = PathMatrix(n_paths, n_nodes);
    wp.cash = PathMatrix(n_paths, n_nodes);

    std::vector<std::pair<std::size_t, std::vector<double>>> deposits(n_pay);
    for (std::size_t j = 0; j < n_pay; ++j)
        deposits[j] = {pay_node[j], std::vector<double>(n_paths, 0.0)};

    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        std::vector<double> fixing(n_pay);
        for (std::size_t i = beg; i < end; ++i) {
            const double* r = paths.rate.row(i);
            for (std::size_t j = 0; j < n_pay; ++j) {
                const double p = fixing_coeffs[j].price(r[reset_node[j]]);
                fixing[j] = (1.0 / p - 1.0) / delta[j];
            }
            double* value = wp.value.row(i);
            for (std::size_t k = 0; k < n_nodes; ++k) {
                const std::size_t j0 = first_period[k];
                if (j0 == n_pay) {
                    value[k] = 0.0;
                    continue;
                }
                double v = 0.0;
                double p_prev = reset_is_future[k] ? reset_coeffs[k].price(r[k]) : 0.0;
                for (std::size_t jj = j0; jj < n_pay; ++jj) {
                    const double p_next = pay_coeffs[k][jj - j0].price(r[k]);
                    const double fixed_leg = spec.strike * delta[jj] * p_next;
                    double floating_leg;
                    if (jj == j0 && !reset_is_future[k])
                        floating_leg = fixing[jj] * delta[jj] * p_next;  // fixing already set
                    else
                        floating_leg = p_prev - p_next;
                    v += notional[jj] * (fixed_leg - floating_leg);
                    p_prev = p_next;
                }
                value[k] = sign * v;
            }
        }
    });
    for (std::size_t j = 0; j < n_pay; ++j) {
        auto& dep = deposits[j].second;
        for (std::size_t i = 0; i < n_paths; ++i) {
            const double p = fixing_coeffs[j].price(paths.rate(i, reset_node[j]));
            const double fixing = (1.0 / p - 1.0) / delta[j];
            dep[i] = sign * notional[j] * (spec.strike - fixing) * delta[j];
        }
    }
    accrue_cash(wp.cash, paths, deposits);
    return wp;
}

WealthPath swaption_wealth(const InstrumentSpec& spec, const PathSet& paths,
                           const HullWhiteParams& params) {
    spec.validate();
    if (!is_swaption(spec.kind))
        throw std::invalid_argument("swaption_wealth: instrument is not a swaption");
    const bool receiver = spec.kind == InstrumentKind::ReceiverSwaption;
    const TimeGrid& grid = paths.grid;
    const std::size_t n_nodes = grid.size();
    const std::size_t n_paths = paths.n_paths();
    const double t_expiry = spec.maturity;
    const double t_end = spec.payment_dates.front();
    const double delta = t_end - t_expiry;
    const double scale = 1.0 + spec.strike * delta;
    const double bond_strike = 1.0 / scale;
    const std::size_t expiry_node = grid.index_of(t_expiry);

    // A single-period receiver (payer) swaption is a scaled call (put) on
    // the bond maturing at the payment date, struck at 1/(1 + K*delta).
    struct NodeOpt {
        HullWhiteParams::ZcbCoeffs to_expiry, to_end;
        double sd = 0.0;
    };
    std::vector<NodeOpt> node_opt(expiry_node);
    for (std::size_t k = 0; k < expiry_node; ++k) {
        const double t = grid.time(k);
        node_opt[k].to_expiry = params.zcb_coeffs(t, t_expiry);
        node_opt[k].to_end = params.zcb_coeffs(t, t_end);
        node_opt[k].sd = params.volatility() *
                         std::sqrt((1.0 - std::exp(-2.0 * params.mean_reversion() * (t_expiry - t))) /
                                   (2.0 * params.mean_reversion())) *
                         params.bond_duration(t_expiry, t_end);
    }
    const auto settle_coeffs = params.zcb_coeffs(t_expiry, t_end);

    WealthPath wp;
    wp.value = PathMatrix(n_paths, n_nodes);
    wp.cash = PathMatrix(n_paths, n_nodes);
    std::vector<std::pair<std::size_t, std::vector<double>>> deposits(1);
    deposits[0] = {expiry_node, std::vector<double>(n_paths, 0.0)};
    auto& payoff = deposits[0].second;

    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            const double* r = paths.rate.row(i);
            double* value = wp.value.row(i);
            for (std::size_t k = 0; k < expiry_node; ++k) {
                const NodeOpt& no = node_opt[k];
                const double p_exp = no.to_expiry.price(r[k]);
                const double p_end = no.to_end.price(r[k]);
                double opt;
                if (no.sd < 1e-14) {
                    const double intrinsic = p_end - bond_strike * p_exp;
                    opt = receiver ? std::max(intrinsic, 0.0) : std::max(-intrinsic, 0.0);
                } else {
                    const double d1 = std::log(p_end / (p_exp * bond_strike)) / no.sd + 0.5 * no.sd;
                    const double d2 = d1 - no.sd;
                    opt = receiver ? p_end * norm_cdf(d1) - bond_strike * p_exp * norm_cdf(d2)
                                   : bond_strike * p_exp * norm_cdf(-d2) - p_end * norm_cdf(-d1);
                }
                value[k] = spec.notional * scale * opt;
            }
            const double p_settle = settle_coeffs.price(r[expiry_node]);
            const double intrinsic = scale * p_settle - 1.0;
            payoff[i] = spec.notional * (receiver ? std::max(intrinsic, 0.0) : std::max(-intrinsic, 0.0));
        }
    });
    accrue_cash(wp.cash, paths, deposits);
    return wp;
}

WealthPath instrument_wealth(const InstrumentSpec& spec, const PathSet& paths,
                             const HullWhiteParams& params) {
    return is_swap(spec.kind) ? swap_wealth(spec, paths, params)
                              : swaption_wealth(spec, paths, params);
}

WealthPath epo_wealth(const LsmResult& epo_values, const PathMatrix& cashflows,
                      const PathSet& paths, const MortgageSpec& spec) {
    const std::size_t n_paths = paths.n_paths();
    const std::size_t n_nodes = paths.n_nodes();
    epo_values.value.require_shape(n_paths, n_nodes, "epo_wealth: values");
    cashflows.require_shape(n_paths, spec.payment_dates.size(), "epo_wealth: cashflows");

    std::vector<std::size_t> pay_node(spec.payment_dates.size());
    for (std::size_t j = 0; j < pay_node.size(); ++j)
        pay_node[j] = paths.grid.index_of(spec.payment_dates[j]);

    WealthPath wp;
    wp.value = epo_values.value;
    wp.cash = PathMatrix(n_paths, n_nodes);
    std::vector<std::pair<std::size_t, std::vector<double>>> deposits(pay_node.size());
    for (std::size_t j = 0; j < pay_node.size(); ++j) {
        deposits[j] = {pay_node[j], std::vector<double>(n_paths)};
        for (std::size_t i = 0; i < n_paths; ++i) deposits[j].second[i] = cashflows(i, j);
        // interior payment-node values carry the flow being paid; move it to cash
        if (pay_node[j] != epo_values.last_node)
            for (std::size_t i = 0; i < n_paths; ++i) wp.value(i, pay_node[j]) -= cashflows(i, j);
    }
    accrue_cash(wp.cash, paths, deposits);
    return wp;
}

} // namespace epo
