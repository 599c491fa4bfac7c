#include <doctest.h>

#include "test_util.hpp"

#include "epo/prepay.hpp"

#include <cmath>

using namespace epo;

TEST_CASE("contractual_notional") {
    SUBCASE("bullet holds the full notional until the last payment") {
        const auto spec = fixtures::bullet10();
        CHECK(contractual_notional(spec, 9.99) == 10000.0);
        CHECK(contractual_notional(spec, 10.0) == 0.0);
        CHECK(contractual_notional(spec, 0.0) == 10000.0);
    }
    SUBCASE("linear three-payment unit mortgage") {
        MortgageSpec spec = MortgageSpec::annual(1.0, 0.03, 0.0, 3, Amortization::Linear);
        CHECK(contractual_notional(spec, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(contractual_notional(spec, 0.5) == 1.0);
        CHECK(contractual_notional(spec, 3.0) == 0.0);
    }
    SUBCASE("linear ten-year schedule mid-period") {
        const auto spec = fixtures::linear10();
        CHECK(contractual_notional(spec, 5.5) == doctest::Approx(5000.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(contractual_notional(fixtures::bullet10(), -0.5), std::invalid_argument);
}

TEST_CASE("swap_rate_annuity") {
    const auto hw = fixtures::hw3();
    SUBCASE("single remaining period reduces to the simple forward") {
        const auto spec = fixtures::bullet10();
        const double t = 9.0, r = 0.034;
        const auto sr = swap_rate_annuity(t, r, spec, hw);
        CHECK(sr.swap_rate == doctest::Approx(hw.forward_rate(t, 9.0, 10.0, r)).epsilon(1e-13));
    }
    SUBCASE("constant notional on the flat curve telescopes") {
        const auto spec = fixtures::bullet10();
        const auto sr = swap_rate_annuity(0.0, hw.r0(), spec, hw);
        double annuity = 0.0;
        for (int j = 1; j <= 10; ++j) annuity += std::exp(-0.03 * j);
        CHECK(sr.swap_rate ==
              doctest::Approx((1.0 - std::exp(-0.3)) / annuity).epsilon(1e-10));
        CHECK(sr.annuity == doctest::Approx(10000.0 * annuity).epsilon(1e-10));
    }
    SUBCASE("amortizing schedule matches a brute-force sum") {
        const auto spec = fixtures::linear10();
        for (int i = 0; i < 20; ++i) {
            const double t = fixtures::uniform(31, i, 0, 0.0, 9.5);
            const double r = fixtures::uniform(31, i, 1, 0.0, 0.06);
            const auto sr = swap_rate_annuity(t, r, spec, hw);
            double num = 0.0, ann = 0.0;
            for (std::size_t j = 0; j < spec.payment_dates.size(); ++j) {
                const double tj = spec.payment_dates[j];
                if (tj <= t + 1e-12) continue;
                const double tp = j == 0 ? spec.issue : spec.payment_dates[j - 1];
                const double notional = contractual_notional(spec, tp);
                num += notional * (hw.zcb_unchecked(t, tp, r) - hw.zcb_unchecked(t, tj, r));
                ann += notional * (tj - tp) * hw.zcb_unchecked(t, tj, r);
            }
            CHECK(sr.swap_rate == doctest::Approx(num / ann).epsilon(1e-13));
            CHECK(sr.annuity == doctest::Approx(ann).epsilon(1e-13));
            CHECK(sr.annuity > 0.0);
        }
    }
    SUBCASE("no remaining payments is an error") {
        CHECK_THROWS_AS(swap_rate_annuity(10.0, 0.03, fixtures::bullet10(), hw),
                        std::invalid_argument);
    }
}

TEST_CASE("prepayment_rate") {
    const auto hw = fixtures::hw3();
    const auto spec = fixtures::bullet10();
    SUBCASE("midpoint at a vanishing perceived incentive") {
        const SigmoidParams sig = fixtures::empirical_sigmoid();
        // choose behavior to cancel the incentive exactly
        const auto sr = swap_rate_annuity(2.0, 0.03, spec, hw);
        const double b = sr.swap_rate - spec.fixed_rate;
        CHECK(prepayment_rate(2.0, 0.03, b, spec, sig, hw) ==
              doctest::Approx(0.5 * (sig.lower + sig.upper)).epsilon(1e-12));
    }
    SUBCASE("rational response is a step to the upper bound") {
        const SigmoidParams sig = fixtures::rational_sigmoid();
        const auto sr = swap_rate_annuity(3.0, 0.03, spec, hw);
        const double b_for = sr.swap_rate - spec.fixed_rate;  // perceived incentive zero here
        CHECK(prepayment_rate(3.0, 0.03, b_for + 0.01, spec, sig, hw) == 0.0447);
        CHECK(prepayment_rate(3.0, 0.03, b_for - 0.01, spec, sig, hw) == 0.0);
        CHECK(prepayment_rate(3.0, 0.03, b_for, spec, sig, hw) ==
              doctest::Approx(0.5 * 0.0447).epsilon(1e-12));
    }
    SUBCASE("empirical parameters at a one-percent incentive") {
        const SigmoidParams sig = fixtures::empirical_sigmoid();
        // epsilon + b = 0.01 by construction
        const auto sr = swap_rate_annuity(1.0, 0.03, spec, hw);
        const double b = 0.01 - (spec.fixed_rate - sr.swap_rate);
        const double expect = 0.0231 + 0.0108 * (std::tanh(0.84) + 1.0);
        CHECK(prepayment_rate(1.0, 0.03, b, spec, sig, hw) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(expect == doctest::Approx(0.04131).epsilon(1e-3));
    }
    SUBCASE("monotone in the behavioral spread") {
        const SigmoidParams sig = fixtures::empirical_sigmoid();
        double prev = -1.0;
        for (double b = -0.05; b <= 0.05; b += 0.005) {
            const double rate = prepayment_rate(4.0, 0.03, b, spec, sig, hw);
            CHECK(rate >= prev);
            CHECK(rate >= sig.lower);
            CHECK(rate <= sig.upper);
            prev = rate;
        }
    }
}

TEST_CASE("notional_paths") {
    const auto hw = fixtures::hw3();
    const auto grid = fixtures::grid10();
    const auto ps = simulate_paths(hw, fixtures::behavior_p(), 0.44, grid, 2000, 17);

    SUBCASE("no prepayment when both bounds vanish") {
        const SigmoidParams sig{0.0, 0.0, 84.0, false};
        const auto np = notional_paths(fixtures::bullet10(), sig, ps, hw);
        for (std::size_t i = 0; i < 50; ++i)
            for (std::size_t k = 0; k < grid.size(); ++k) {
                CHECK(np.prepayment(i, k) == 0.0);
                CHECK(np.realized(i, k) == np.contractual[k]);
            }
    }

    SUBCASE("identity contractual = realized + prepayment") {
        const auto np = notional_paths(fixtures::linear10(), fixtures::empirical_sigmoid(), ps, hw);
        for (std::size_t i = 0; i < ps.n_paths(); i += 97)
            for (std::size_t k = 0; k < grid.size(); ++k) {
                CHECK(np.realized(i, k) >= 0.0);
                CHECK(np.prepayment(i, k) >= 0.0);
                CHECK(std::abs(np.contractual[k] - np.realized(i, k) - np.prepayment(i, k)) < 1e-12);
            }
    }

    SUBCASE("forced half prepayment by the first payment date") {
        // sigmoid pinned at 1/2 per year makes the cumulative integral 1/2 at t1
        MortgageSpec spec = MortgageSpec::annual(1.0, 0.03, 0.0, 3, Amortization::Linear);
        const TimeGrid g3 = TimeGrid::regular(0.0, 3.0, 12, spec.reset_dates(), spec.payment_dates);
        const auto ps3 = simulate_paths(hw, fixtures::behavior_p(), 0.0, g3, 10, 3);
        const SigmoidParams sig{0.5, 0.5, 1.0, false};
        const auto np = notional_paths(spec, sig, ps3, hw);
        const std::size_t k1 = g3.index_of(1.0);
        CHECK(np.realized(0, k1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(np.prepayment(0, k1) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("saturated prepayment terminates the contract early") {
        const SigmoidParams sig{2.0, 2.0, 1.0, false};
        const auto np = notional_paths(fixtures::bullet10(), sig, ps, hw);
        const std::size_t k6 = grid.index_of(6.0);
        for (std::size_t i = 0; i < 20; ++i) {
            CHECK(np.realized(i, k6) == 0.0);
            CHECK(np.prepayment(i, k6) == np.contractual[k6]);
        }
    }

    SUBCASE("grid must cover the mortgage horizon") {
        const TimeGrid short_grid = TimeGrid::regular(0.0, 5.0, 12, {0.0}, {1.0, 2.0});
        const auto ps5 = simulate_paths(hw, fixtures::behavior_p(), 0.0, short_grid, 10, 3);
        CHECK_THROWS_AS(notional_paths(fixtures::bullet10(), fixtures::empirical_sigmoid(), ps5, hw),
                        std::invalid_argument);
    }

    SUBCASE("reset-lump mode with full availability never exhausts the bullet notional") {
        // upper bound at the availability limit 1/n
        const SigmoidParams sig{0.0, 0.0447, 0.0, true};
        const auto np =
            notional_paths(fixtures::bullet10(), sig, ps, hw, PrepaymentMode::ResetLump);
        const std::size_t last = grid.size() - 1;
        for (std::size_t i = 0; i < ps.n_paths(); i += 53) {
            for (std::size_t k = 0; k < last; ++k) CHECK(np.realized(i, k) > 0.0);
            // lumps are multiples of u * N0 on the yearly schedule
            const double lump = 0.0447 * 1e4;
            const double prepaid = np.prepayment(i, grid.index_of(5.0));
            const double ratio = prepaid / lump;
            CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
        }
    }
}

TEST_CASE("epo_cashflow") {
    const auto hw = fixtures::hw3();
    const auto grid = fixtures::grid10();
    const auto ps = simulate_paths(hw, fixtures::behavior_p(), 0.44, grid, 500, 19);
    const auto spec = fixtures::bullet10();

    SUBCASE("zero notional in the period gives a zero flow") {
        const SigmoidParams sig{0.0, 0.0, 1.0, false};
        const auto np = notional_paths(spec, sig, ps, hw);
        const auto cf = epo_cashflow(ps, np, spec, hw, 4);
        for (double c : cf) CHECK(c == 0.0);
    }

    SUBCASE("constant notional over one year pays spread times notional") {
        const auto np = notional_paths(spec, fixtures::empirical_sigmoid(), ps, hw);
        // rebuild the flow by hand for a few paths
        for (std::size_t i = 0; i < 5; ++i) {
            const std::size_t j = 7;
            const double t_reset = spec.payment_dates[j - 1];
            const double t_pay = spec.payment_dates[j];
            const std::size_t k_reset = grid.index_of(t_reset);
            const double fixing =
                hw.forward_rate(t_reset, t_reset, t_pay, ps.rate(i, k_reset));
            std::vector<double> notional_row(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k) notional_row[k] = np.prepayment(i, k);
            const double integral = trapezoid(notional_row, grid.times(), t_reset, t_pay);
            const auto cf = epo_cashflow(ps, np, spec, hw, j);
            CHECK(cf[i] == doctest::Approx((spec.fixed_rate - fixing) * integral).epsilon(1e-12));
        }
    }

    SUBCASE("flow vanishes when the fixing equals the contract rate") {
        // flat zero-vol world struck exactly at the realized fixing
        const auto hw0 = fit_theta(fixtures::flat3(), 0.023, 0.0);
        const auto ps0 = simulate_paths(hw0, fixtures::behavior_p(), 0.0, grid, 10, 3);
        MortgageSpec atm = spec;
        atm.fixed_rate = hw0.forward_rate(1.0, 1.0, 2.0, ps0.rate(0, grid.index_of(1.0)));
        const auto np = notional_paths(atm, fixtures::empirical_sigmoid(), ps0, hw0);
        const auto cf = epo_cashflow(ps0, np, atm, hw0, 1);
        for (double c : cf) CHECK(std::abs(c) < 1e-12);
    }

    CHECK_THROWS_AS(epo_cashflow(ps, notional_paths(spec, fixtures::empirical_sigmoid(), ps, hw),
                                 spec, hw, 10),
                    std::out_of_range);
}
