#include <doctest.h>

#include "test_util.hpp"

#include "epo/parallel.hpp"
#include "epo/paths.hpp"

#include <cmath>

using namespace epo;

TEST_CASE("girsanov_map") {
    const OUParams p = fixtures::behavior_p();
    SUBCASE("zero market price of risk is the identity up to the measure tag") {
        const OUParams q = girsanov_map(p, {0.0, 0.0});
        CHECK(q.alpha == p.alpha);
        CHECK(q.mean == p.mean);
        CHECK(q.vol == p.vol);
        CHECK(q.b0 == p.b0);
        CHECK(q.measure == Measure::RiskNeutral);
    }
    SUBCASE("Table-1 parameters with lambda1 = 1") {
        const OUParams q = girsanov_map(p, {0.0, 1.0});
        CHECK(q.alpha == doctest::Approx(2.114).epsilon(1e-12));
        CHECK(q.mean == doctest::Approx(2.099 * (-0.002) / 2.114).epsilon(1e-12));
        CHECK(q.mean == doctest::Approx(-0.0019858).epsilon(1e-4));
    }
    SUBCASE("pure level shift moves the long-run mean") {
        const OUParams q = girsanov_map(p, {0.1, 0.0});
        CHECK(q.alpha == p.alpha);
        CHECK(q.mean == doctest::Approx(-0.002 - 0.0015 / 2.099).epsilon(1e-12));
        CHECK(q.mean == doctest::Approx(-0.0027146).epsilon(1e-4));
    }
    SUBCASE("inadmissible lambda1 rejected") {
        CHECK_THROWS_AS(girsanov_map(p, {0.0, -p.alpha / p.vol}), std::invalid_argument);
    }
    SUBCASE("round-trip through the inverse map") {
        for (int i = 0; i < 40; ++i) {
            const double l0 = fixtures::uniform(21, i, 0, -20.0, 20.0);
            const double l1 = fixtures::uniform(21, i, 1, -100.0, 500.0);
            const OUParams q = girsanov_map(p, {l0, l1});
            const MarketPriceOfRisk back = girsanov_invert(p, q.alpha, q.mean);
            CHECK(std::abs(back.lambda0 - l0) < 1e-12 * std::max(1.0, std::abs(l0)));
            CHECK(std::abs(back.lambda1 - l1) < 1e-12 * std::max(1.0, std::abs(l1)));
        }
    }
}

TEST_CASE("trapezoid rule") {
    const std::vector<double> times = {0.0, 0.25, 0.5, 0.8, 1.0};
    SUBCASE("constant integrand") {
        const std::vector<double> vals(times.size(), 3.5);
        CHECK(trapezoid(vals, times, 0.0, 1.0) == doctest::Approx(3.5).epsilon(1e-15));
    }
    SUBCASE("exact on linear functions") {
        std::vector<double> vals;
        for (double t : times) vals.push_back(2.0 * t - 1.0);
        CHECK(trapezoid(vals, times, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(trapezoid(vals, times, 0.25, 0.8) ==
              doctest::Approx((0.8 * 0.8 - 0.25 * 0.25) - (0.8 - 0.25)).epsilon(1e-12));
    }
    SUBCASE("matches a refined sum over the piecewise-linear interpolant") {
        std::vector<double> vals;
        for (std::size_t i = 0; i < times.size(); ++i)
            vals.push_back(fixtures::uniform(22, i, 0, -1.0, 1.0));
        double refined = 0.0;
        const int m = 1000;
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            const double dt = (times[k + 1] - times[k]) / m;
            for (int j = 0; j < m; ++j) {
                const double w = (j + 0.5) / m;
                refined += ((1.0 - w) * vals[k] + w * vals[k + 1]) * dt;
            }
        }
        CHECK(trapezoid(vals, times, 0.0, 1.0) == doctest::Approx(refined).epsilon(1e-12));
    }
    SUBCASE("off-grid endpoints rejected") {
        const std::vector<double> vals(times.size(), 1.0);
        CHECK_THROWS_AS(trapezoid(vals, times, 0.1, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(trapezoid(vals, times, 0.0, 0.9), std::invalid_argument);
    }
}

TEST_CASE("simulate_paths") {
    const auto hw = fixtures::hw3();
    const auto grid = fixtures::grid10();
    const OUParams ou = fixtures::behavior_p();

    SUBCASE("input validation") {
        CHECK_THROWS_AS(simulate_paths(hw, ou, 1.5, grid, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(simulate_paths(hw, ou, 0.0, grid, 0, 1), std::invalid_argument);
    }

    SUBCASE("zero noise reduces to the deterministic mean path") {
        const auto hw0 = fit_theta(fixtures::flat3(), 0.023, 0.0);
        OUParams ou0 = ou;
        ou0.vol = 0.0;
        ou0.b0 = 0.01;
        const PathSet ps = simulate_paths(hw0, ou0, 0.0, grid, 3, 5);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid.time(k);
            const double expect_b = ou0.mean + (ou0.b0 - ou0.mean) * std::exp(-ou0.alpha * t);
            CHECK(ps.behavior(0, k) == doctest::Approx(expect_b).epsilon(1e-12));
            CHECK(ps.rate(0, k) == doctest::Approx(0.03).epsilon(1e-9));
        }
    }

    SUBCASE("behavioral factor matches analytic one-year moments") {
        const PathSet ps = simulate_paths(hw, ou, 0.0, grid, 100000, 31);
        const std::size_t k1 = grid.index_of(1.0);
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < ps.n_paths(); ++i) {
            sum += ps.behavior(i, k1);
            sum_sq += ps.behavior(i, k1) * ps.behavior(i, k1);
        }
        const double n = static_cast<double>(ps.n_paths());
        const double mean = sum / n;
        const double var = sum_sq / n - mean * mean;
        const double expect_mean = ou.mean + (ou.b0 - ou.mean) * std::exp(-ou.alpha);
        const double expect_var = ou.vol * ou.vol * (1.0 - std::exp(-2.0 * ou.alpha)) / (2.0 * ou.alpha);
        const double se_mean = std::sqrt(expect_var / n);
        const double se_var = expect_var * std::sqrt(2.0 / n);
        CHECK(std::abs(mean - expect_mean) < 3.0 * se_mean);
        CHECK(std::abs(var - expect_var) < 3.0 * se_var);
    }

    SUBCASE("per-step shocks carry the configured correlation") {
        const PathSet ps = simulate_paths(hw, ou, 0.44, grid, 100000, 77);
        // recover the shocks from the exact transitions
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        const double dt = grid.time(1) - grid.time(0);
        const double er = std::exp(-hw.mean_reversion() * dt);
        const double eb = std::exp(-ou.alpha * dt);
        for (std::size_t i = 0; i < ps.n_paths(); ++i) {
            for (std::size_t k = 0; k < 3; ++k) {
                const double sr = ps.rate(i, k + 1) - hw.shift(grid.time(k + 1)) -
                                  (ps.rate(i, k) - hw.shift(grid.time(k))) * er;
                const double sb = ps.behavior(i, k + 1) - ou.mean - (ps.behavior(i, k) - ou.mean) * eb;
                sxy += sr * sb;
                sxx += sr * sr;
                syy += sb * sb;
            }
        }
        const double corr = sxy / std::sqrt(sxx * syy);
        CHECK(std::abs(corr - 0.44) < 0.02);
    }

    SUBCASE("martingale check: E[1/M(T)] equals the model bond") {
        const PathSet ps = simulate_paths(hw, ou, 0.44, grid, 100000, 13);
        for (double maturity : {1.0, 5.0, 10.0}) {
            const std::size_t k = grid.index_of(maturity);
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t i = 0; i < ps.n_paths(); ++i) {
                const double x = 1.0 / ps.money_account(i, k);
                sum += x;
                sum_sq += x * x;
            }
            const double n = static_cast<double>(ps.n_paths());
            const double mean = sum / n;
            const double se = std::sqrt((sum_sq / n - mean * mean) / n);
            CHECK(std::abs(mean - hw.zcb(0.0, maturity, hw.r0())) < 3.0 * se);
        }
    }

    SUBCASE("bit-identical across repeated calls and thread counts") {
        set_worker_threads(1);
        const PathSet a = simulate_paths(hw, ou, 0.44, grid, 4000, 123);
        const PathSet b = simulate_paths(hw, ou, 0.44, grid, 4000, 123);
        set_worker_threads(4);
        const PathSet c = simulate_paths(hw, ou, 0.44, grid, 4000, 123);
        set_worker_threads(1);
        CHECK(a.rate.data() == b.rate.data());
        CHECK(a.behavior.data() == b.behavior.data());
        CHECK(a.money_account.data() == b.money_account.data());
        CHECK(a.rate.data() == c.rate.data());
        CHECK(a.behavior.data() == c.behavior.data());
    }

    SUBCASE("path i is stable under the path count") {
        const PathSet small = simulate_paths(hw, ou, 0.44, grid, 100, 9);
        const PathSet big = simulate_paths(hw, ou, 0.44, grid, 5000, 9);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(small.rate(57, k) == big.rate(57, k));
            CHECK(small.behavior(57, k) == big.behavior(57, k));
        }
    }

    SUBCASE("money account starts at one and compounds positive rates upward") {
        const PathSet ps = simulate_paths(hw, ou, 0.44, grid, 200, 3);
        for (std::size_t i = 0; i < ps.n_paths(); ++i) {
            CHECK(ps.money_account(i, 0) == 1.0);
            for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
                CHECK(ps.money_account(i, k) > 0.0);
                if (ps.rate(i, k) >= 0.0 && ps.rate(i, k + 1) >= 0.0)
                    CHECK(ps.money_account(i, k + 1) >= ps.money_account(i, k));
            }
        }
    }

    SUBCASE("resimulate_behavior shares rate paths and reuses shocks") {
        const PathSet base = simulate_paths(hw, ou, 0.44, grid, 500, 11);
        OUParams q = ou;
        q.measure = Measure::RiskNeutral;
        const PathSet same = resimulate_behavior(base, hw, q);
        CHECK(same.behavior.data() == base.behavior.data());
        CHECK(same.rate.data() == base.rate.data());
        OUParams q2 = q;
        q2.alpha = 8.0;
        const PathSet moved = resimulate_behavior(base, hw, q2);
        CHECK(moved.rate.data() == base.rate.data());
        CHECK(moved.behavior.data() != base.behavior.data());
        // same shocks, faster reversion: tighter one-year distribution
        const std::size_t k1 = grid.index_of(1.0);
        double var_base = 0.0, var_moved = 0.0;
        for (std::size_t i = 0; i < base.n_paths(); ++i) {
            var_base += base.behavior(i, k1) * base.behavior(i, k1);
            var_moved += moved.behavior(i, k1) * moved.behavior(i, k1);
        }
        CHECK(var_moved < var_base);
    }
}
