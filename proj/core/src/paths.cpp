#include "epo/paths.hpp"

#include "epo/parallel.hpp"
#include "epo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace epo {

void OUParams::validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("OUParams: alpha must be positive");
    if (vol < 0.0) throw std::invalid_argument("OUParams: vol must be nonnegative");
}

OUParams girsanov_map(const OUParams& real_world, const MarketPriceOfRisk& mpr) {
    real_world.validate();
    if (real_world.measure != Measure::RealWorld)
        throw std::invalid_argument("girsanov_map: input must be real-world parameters");
    const double alpha_q = real_world.alpha + real_world.vol * mpr.lambda1;
    if (alpha_q <= 0.0)
        throw std::invalid_argument("girsanov_map: inadmissible lambda1, pricing mean reversion <= 0");
    OUParams out = real_world;
    out.alpha = alpha_q;
    out.mean = (real_world.alpha * real_world.mean - real_world.vol * mpr.lambda0) / alpha_q;
    out.measure = Measure::RiskNeutral;
    return out;
}

MarketPriceOfRisk girsanov_invert(const OUParams& real_world, double alpha_q, double mean_q) {
    real_world.validate();
    if (real_world.vol == 0.0)
        throw std::invalid_argument("girsanov_invert: zero vol admits no drift change");
    if (alpha_q <= 0.0)
        throw std::invalid_argument("girsanov_invert: pricing mean reversion must be positive");
    MarketPriceOfRisk mpr;
    mpr.lambda1 = (alpha_q - real_world.alpha) / real_world.vol;
    mpr.lambda0 = (real_world.alpha * real_world.mean - alpha_q * mean_q) / real_world.vol;
    return mpr;
}

namespace {

struct StepCoefs {
    std::vector<double> dt, decay_r, decay_b, l11, l21, l22;
    std::vector<double> shift; // per node
};

StepCoefs step_coefs(const HullWhiteParams& hw, const OUParams& ou, double rho,
                     const TimeGrid& grid) {
    const std::size_t n = grid.size();
    StepCoefs c;
    c.dt.resize(n - 1);
    c.decay_r.resize(n - 1);
    c.decay_b.resize(n - 1);
    c.l11.resize(n - 1);
    c.l21.resize(n - 1);
    c.l22.resize(n - 1);
    c.shift.resize(n);
    for (std::size_t k = 0; k < n; ++k) c.shift[k] = hw.shift(grid.time(k));
    const double ar = hw.mean_reversion(), ab = ou.alpha;
    const double vr = hw.volatility(), vb = ou.vol;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = grid.time(k + 1) - grid.time(k);
        c.dt[k] = dt;
        c.decay_r[k] = std::exp(-ar * dt);
        c.decay_b[k] = std::exp(-ab * dt);
        const double var_r = vr * vr * (1.0 - std::exp(-2.0 * ar * dt)) / (2.0 * ar);
        const double var_b = vb * vb * (1.0 - std::exp(-2.0 * ab * dt)) / (2.0 * ab);
        const double cov = rho * vr * vb * (1.0 - std::exp(-(ar + ab) * dt)) / (ar + ab);
        const double l11 = std::sqrt(var_r);
        const double l21 = l11 > 0.0 ? cov / l11 : 0.0;
        const double rem = var_b - l21 * l21;
        c.l11[k] = l11;
        c.l21[k] = l21;
        c.l22[k] = rem > 0.0 ? std::sqrt(rem) : 0.0;
    }
    return c;
}

} // namespace

PathSet simulate_paths(const HullWhiteParams& hw, const OUParams& ou, double rho,
                       const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
    ou.validate();
    if (std::abs(rho) > 1.0) throw std::invalid_argument("simulate_paths: |rho| must be <= 1");
    if (n_paths < 1) throw std::invalid_argument("simulate_paths: need at least one path");

    const std::size_t n_nodes = grid.size();
    PathSet ps{grid, PathMatrix(n_paths, n_nodes), PathMatrix(n_paths, n_nodes),
               PathMatrix(n_paths, n_nodes), seed, rho};
    const StepCoefs c = step_coefs(hw, ou, rho, grid);

    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            double* r = ps.rate.row(i);
            double* b = ps.behavior.row(i);
            double* m = ps.money_account.row(i);
            r[0] = hw.r0();
            b[0] = ou.b0;
            double log_m = 0.0;
            m[0] = 1.0;
            for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
                const auto [z1, z2] = CounterRng::normal_pair(seed, i, k);
                r[k + 1] = c.shift[k + 1] + (r[k] - c.shift[k]) * c.decay_r[k] + c.l11[k] * z1;
                b[k + 1] = ou.mean + (b[k] - ou.mean) * c.decay_b[k] + c.l21[k] * z1 + c.l22[k] * z2;
                log_m += 0.5 * (r[k] + r[k + 1]) * c.dt[k];
                m[k + 1] = std::exp(log_m);
            }
        }
    });
    return ps;
}

PathSet resimulate_behavior(const PathSet& base, const HullWhiteParams& hw, const OUParams& ou) {
    ou.validate();
    PathSet ps{base.grid, base.rate, PathMatrix(base.n_paths(), base.n_nodes()),
               base.money_account, base.seed, base.correlation};
    const StepCoefs c = step_coefs(hw, ou, base.correlation, base.grid);
    const std::size_t n_nodes = base.n_nodes();
    parallel_blocks(base.n_paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            double* b = ps.behavior.row(i);
            b[0] = ou.b0;
            for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
                const auto [z1, z2] = CounterRng::normal_pair(base.seed, i, k);
                b[k + 1] = ou.mean + (b[k] - ou.mean) * c.decay_b[k] + c.l21[k] * z1 + c.l22[k] * z2;
            }
        }
    });
    return ps;
}

} // namespace epo
