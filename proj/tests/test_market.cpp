#include <doctest.h>

#include "test_util.hpp"

#include "epo/paths.hpp"

#include <cmath>

using namespace epo;

TEST_CASE("fit_theta reproduces the input curve at t=0") {
    SUBCASE("flat 3% curve, Table-1 dynamics") {
        const auto hw = fixtures::hw3();
        CHECK(hw.zcb(0.0, 10.0, hw.r0()) == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));
        CHECK(std::abs(hw.zcb(0.0, 10.0, hw.r0()) - std::exp(-0.3)) < 1e-10);
    }
    SUBCASE("zero volatility on a flat curve gives a constant reversion level") {
        const double rate = 0.027;
        const auto hw = fit_theta(YieldCurve::flat(rate), 0.5, 0.0);
        CHECK(hw.r0() == doctest::Approx(rate).epsilon(1e-9));
        for (double t : {0.0, 1.3, 5.0, 9.9})
            CHECK(hw.theta(t) == doctest::Approx(rate).epsilon(1e-6));
    }
    SUBCASE("two-pillar curve matches discount factors at the pillars") {
        const YieldCurve curve({{2.0, 0.02}, {7.0, 0.035}});
        const auto hw = fit_theta(curve, 0.1, 0.008);
        for (double t : {2.0, 7.0})
            CHECK(std::abs(hw.zcb(0.0, t, hw.r0()) - curve.discount(t)) < 1e-10);
    }
    SUBCASE("non-positive mean reversion rejected") {
        CHECK_THROWS_AS(fit_theta(fixtures::flat3(), 0.0, 0.006), std::invalid_argument);
        CHECK_THROWS_AS(fit_theta(fixtures::flat3(), -1.0, 0.006), std::invalid_argument);
    }
}

TEST_CASE("zcb_price basics") {
    const auto hw = fixtures::hw3();
    CHECK(hw.zcb(3.0, 3.0, 0.05) == 1.0);
    CHECK(hw.zcb(0.0, 10.0, hw.r0()) == doctest::Approx(0.740818).epsilon(1e-6));
    CHECK_THROWS_AS(hw.zcb(2.0, 1.0, 0.03), std::invalid_argument);

    SUBCASE("strictly decreasing in maturity on a flat positive curve") {
        for (int i = 0; i < 50; ++i) {
            const double t = fixtures::uniform(11, i, 0, 0.0, 5.0);
            const double m1 = t + fixtures::uniform(11, i, 1, 0.01, 10.0);
            const double m2 = m1 + fixtures::uniform(11, i, 2, 0.01, 5.0);
            const double r = fixtures::uniform(11, i, 3, 0.0, 0.08);
            CHECK(hw.zcb(t, m2, r) < hw.zcb(t, m1, r));
        }
    }
}

TEST_CASE("zcb_price matches Monte Carlo discounting") {
    // mean of M(5)/M(10) over paths equals P(5,10) in expectation only when
    // conditioned per path; here we check E[1/M(T)] = P(0,T) and the
    // conditional version via the tower property at t=5.
    const auto hw = fixtures::hw3();
    const auto grid = fixtures::grid10();
    const OUParams ou = fixtures::behavior_p();
    const PathSet ps = simulate_paths(hw, ou, 0.0, grid, 50000, 99);
    const std::size_t k5 = grid.index_of(5.0);
    const std::size_t k10 = grid.index_of(10.0);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < ps.n_paths(); ++i) {
        // pathwise discount over (5, 10] re-centred by the analytic bond at 5
        const double x = ps.money_account(i, k5) / ps.money_account(i, k10) -
                         hw.zcb(5.0, 10.0, ps.rate(i, k5));
        sum += x;
        sum_sq += x * x;
    }
    const double n = static_cast<double>(ps.n_paths());
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("forward_rate") {
    const auto hw = fixtures::hw3();
    SUBCASE("equal bond prices give a zero rate") {
        // a degenerate check through the definition: P(t,t1)=P(t,t2) cannot
        // happen on a positive curve, so verify via the identity instead
        for (int i = 0; i < 30; ++i) {
            const double t = fixtures::uniform(12, i, 0, 0.0, 4.0);
            const double t1 = t + fixtures::uniform(12, i, 1, 0.1, 3.0);
            const double t2 = t1 + fixtures::uniform(12, i, 2, 0.1, 3.0);
            const double r = fixtures::uniform(12, i, 3, 0.0, 0.06);
            const double p1 = hw.zcb(t, t1, r), p2 = hw.zcb(t, t2, r);
            const double expect = (p1 - p2) / ((t2 - t1) * p2);
            CHECK(hw.forward_rate(t, t1, t2, r) == expect);  // bit-exact identity
            if (p1 == p2) CHECK(expect == 0.0);
        }
    }
    SUBCASE("flat 3% curve first-year simple forward") {
        CHECK(hw.forward_rate(0.0, 0.0, 1.0, hw.r0()) ==
              doctest::Approx(std::exp(0.03) - 1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(hw.forward_rate(0.0, 1.0, 1.0, 0.03), std::invalid_argument);
}

TEST_CASE("zcb_option_price") {
    const auto hw = fixtures::hw3();
    SUBCASE("zero volatility degenerates to discounted intrinsic") {
        const auto hw0 = fit_theta(fixtures::flat3(), 0.023, 0.0);
        const double p_fwd = hw0.zcb(0.0, 10.0, hw0.r0()) / hw0.zcb(0.0, 9.0, hw0.r0());
        const double strike = 0.99;
        const double call = hw0.zcb_option(0.0, 9.0, 10.0, strike, OptionKind::Call, hw0.r0());
        const double put = hw0.zcb_option(0.0, 9.0, 10.0, strike, OptionKind::Put, hw0.r0());
        const double disc = hw0.zcb(0.0, 9.0, hw0.r0());
        CHECK(call == doctest::Approx(std::max(p_fwd - strike, 0.0) * disc).epsilon(1e-12));
        CHECK(put == doctest::Approx(std::max(strike - p_fwd, 0.0) * disc).epsilon(1e-12));
    }
    SUBCASE("put-call parity under randomized inputs") {
        for (int i = 0; i < 60; ++i) {
            const double t = fixtures::uniform(13, i, 0, 0.0, 3.0);
            const double expiry = t + fixtures::uniform(13, i, 1, 0.2, 5.0);
            const double mat = expiry + fixtures::uniform(13, i, 2, 0.2, 5.0);
            const double strike = fixtures::uniform(13, i, 3, 0.7, 1.05);
            const double r = fixtures::uniform(13, i, 4, -0.01, 0.07);
            const double call = hw.zcb_option(t, expiry, mat, strike, OptionKind::Call, r);
            const double put = hw.zcb_option(t, expiry, mat, strike, OptionKind::Put, r);
            const double parity = hw.zcb(t, mat, r) - strike * hw.zcb(t, expiry, r);
            CHECK(std::abs(call - put - parity) < 1e-10);
            CHECK(call >= 0.0);
            CHECK(put >= 0.0);
        }
    }
    SUBCASE("monotone in rate volatility at the forward strike") {
        double prev_call = -1.0, prev_put = -1.0;
        for (double vol : {0.001, 0.004, 0.008, 0.012}) {
            const auto hwv = fit_theta(fixtures::flat3(), 0.023, vol);
            const double strike = hwv.zcb(0.0, 10.0, hwv.r0()) / hwv.zcb(0.0, 9.0, hwv.r0());
            const double call = hwv.zcb_option(0.0, 9.0, 10.0, strike, OptionKind::Call, hwv.r0());
            const double put = hwv.zcb_option(0.0, 9.0, 10.0, strike, OptionKind::Put, hwv.r0());
            CHECK(call > prev_call);
            CHECK(put > prev_put);
            prev_call = call;
            prev_put = put;
        }
    }
    SUBCASE("option value matches Monte Carlo payoff") {
        const auto grid = fixtures::grid10();
        const PathSet ps = simulate_paths(hw, fixtures::behavior_p(), 0.0, grid, 50000, 7);
        const std::size_t k9 = grid.index_of(9.0);
        const double strike = 0.97;
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < ps.n_paths(); ++i) {
            const double payoff =
                std::max(hw.zcb(9.0, 10.0, ps.rate(i, k9)) - strike, 0.0) / ps.money_account(i, k9);
            sum += payoff;
            sum_sq += payoff * payoff;
        }
        const double n = static_cast<double>(ps.n_paths());
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        const double analytic = hw.zcb_option(0.0, 9.0, 10.0, strike, OptionKind::Call, hw.r0());
        CHECK(std::abs(mean - analytic) < 3.0 * se);
    }
    CHECK_THROWS_AS(hw.zcb_option(5.0, 4.0, 10.0, 1.0, OptionKind::Call, 0.03),
                    std::invalid_argument);
}
