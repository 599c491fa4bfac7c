#include "epo/experiments.hpp"
#include "epo/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

// Exit codes: 1 config/usage, 2 numerical failure, 3 I/O.
enum ExitCode { kOk = 0, kConfigError = 1, kNumericalError = 2, kIoError = 3 };

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    long long seed = -1;
    long long paths = -1;
    int steps_per_year = -1;
    int threads = -1;
};

epo::RunConfig load_config(const GlobalOpts& g) {
    epo::RunConfig cfg =
        g.config_path.empty() ? epo::RunConfig{} : epo::RunConfig::load(g.config_path);
    if (g.seed >= 0) cfg.simulation.seed = static_cast<std::uint64_t>(g.seed);
    if (g.paths > 0) cfg.simulation.paths = static_cast<std::size_t>(g.paths);
    if (g.steps_per_year > 0) cfg.simulation.steps_per_year = g.steps_per_year;
    if (g.threads > 0) cfg.simulation.threads = g.threads;
    cfg.validate();
    return cfg;
}

void add_globals(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--config", g.config_path, "run configuration file (JSON)");
    cmd->add_option("--out-dir", g.out_dir, "output directory for CSV artifacts");
    cmd->add_option("--seed", g.seed, "Monte Carlo seed override");
    cmd->add_option("--paths", g.paths, "path count override");
    cmd->add_option("--steps-per-year", g.steps_per_year, "grid resolution override");
    cmd->add_option("--threads", g.threads, "worker thread count");
}

int cmd_simulate(const GlobalOpts& g, int sample_paths) {
    const epo::RunConfig cfg = load_config(g);
    epo::set_worker_threads(cfg.simulation.threads);
    const epo::HullWhiteParams hw = cfg.make_hull_white();
    const epo::TimeGrid grid = cfg.make_grid();
    const epo::OUParams pricing = epo::girsanov_map(cfg.behavior, cfg.mpr);
    const epo::PathSet paths = epo::simulate_paths(hw, pricing, cfg.correlation, grid,
                                                   cfg.simulation.paths, cfg.simulation.seed);
    std::filesystem::create_directories(g.out_dir);

    epo::Table summary;
    summary.comments = epo::provenance(cfg);
    summary.columns = {"time", "mean_r", "var_r", "mean_b", "var_b", "mean_inv_money", "zcb_model"};
    const std::size_t n = paths.n_paths();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double sr = 0, srr = 0, sb = 0, sbb = 0, sm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sr += paths.rate(i, k);
            srr += paths.rate(i, k) * paths.rate(i, k);
            sb += paths.behavior(i, k);
            sbb += paths.behavior(i, k) * paths.behavior(i, k);
            sm += 1.0 / paths.money_account(i, k);
        }
        const double dn = static_cast<double>(n);
        summary.add_row({epo::Cell(grid.time(k)), epo::Cell(sr / dn),
                         epo::Cell(srr / dn - sr / dn * sr / dn), epo::Cell(sb / dn),
                         epo::Cell(sbb / dn - sb / dn * sb / dn), epo::Cell(sm / dn),
                         epo::Cell(hw.zcb(0.0, grid.time(k), hw.r0()))});
    }
    epo::emit_csv(summary, (std::filesystem::path(g.out_dir) / "simulate_summary.csv").string());

    epo::Table sample;
    sample.comments = epo::provenance(cfg);
    sample.columns = {"path", "time", "rate", "behavior", "money"};
    const std::size_t n_show = std::min<std::size_t>(n, static_cast<std::size_t>(sample_paths));
    for (std::size_t i = 0; i < n_show; ++i)
        for (std::size_t k = 0; k < grid.size(); ++k)
            sample.add_row({epo::Cell(static_cast<double>(i)), epo::Cell(grid.time(k)),
                            epo::Cell(paths.rate(i, k)), epo::Cell(paths.behavior(i, k)),
                            epo::Cell(paths.money_account(i, k))});
    epo::emit_csv(sample, (std::filesystem::path(g.out_dir) / "simulate_paths.csv").string());
    std::cout << "wrote simulate_summary.csv, simulate_paths.csv\n";
    return kOk;
}

int cmd_price(const GlobalOpts& g, bool full_values) {
    const epo::RunConfig cfg = load_config(g);
    const epo::BuiltScenario sc = epo::build_scenario(cfg, false);
    std::filesystem::create_directories(g.out_dir);
    epo::Table t;
    t.comments = epo::provenance(cfg);
    t.columns = {"v0", "v0_bps", "stderr", "stderr_bps", "discounted_mean", "paths"};
    t.add_row({epo::Cell(sc.price.value), epo::Cell(epo::to_bps(cfg, sc.price.value)),
               epo::Cell(sc.price.stderr_), epo::Cell(epo::to_bps(cfg, sc.price.stderr_)),
               epo::Cell(sc.price.discounted_mean),
               epo::Cell(static_cast<double>(cfg.simulation.paths))});
    epo::emit_csv(t, (std::filesystem::path(g.out_dir) / "epo_price.csv").string());
    if (full_values) {
        epo::Table v;
        v.comments = epo::provenance(cfg);
        v.columns = {"path", "time", "value"};
        for (std::size_t i = 0; i < sc.paths.n_paths(); ++i)
            for (std::size_t k = 0; k < sc.grid.size(); ++k)
                v.add_row({epo::Cell(static_cast<double>(i)), epo::Cell(sc.grid.time(k)),
                           epo::Cell(sc.lsm.value(i, k))});
        epo::emit_csv(v, (std::filesystem::path(g.out_dir) / "epo_values.csv").string());
    }
    std::printf("V(0) = %.6f (%.4f bps), stderr = %.6f\n", sc.price.value,
                epo::to_bps(cfg, sc.price.value), sc.price.stderr_);
    return kOk;
}

int cmd_hedge(const GlobalOpts& g, const std::string& roster, int p, double q, double k,
              std::vector<double> window) {
    epo::RunConfig cfg = load_config(g);
    cfg.loss.p = p;
    cfg.loss.q = q;
    cfg.loss.shortfall_weight = k;
    if (window.size() == 2) {
        cfg.loss.window_begin = window[0];
        cfg.loss.window_end = window[1];
    }
    std::vector<std::size_t> subset;
    for (char c : roster) {
        if (c == ',') continue;
        const std::size_t idx = static_cast<std::size_t>(c - '1');
        if (idx >= cfg.instruments.size())
            throw std::invalid_argument("--roster: instrument index out of range");
        subset.push_back(idx);
    }
    if (subset.empty())
        for (std::size_t s = 0; s < cfg.instruments.size(); ++s) subset.push_back(s);

    const epo::BuiltScenario sc = epo::build_scenario(cfg, true);
    std::vector<epo::WealthPath> chosen;
    for (std::size_t idx : subset) chosen.push_back(sc.hedge_wealth[idx]);
    const epo::TimeWeight alpha;
    const epo::QuadraticCoefficients qc = epo::quadratic_coefficients(
        sc.exposure_wealth, chosen, sc.grid, alpha, cfg.loss.window_begin, cfg.loss.window_end);
    epo::HedgeSolution sol = epo::solve_quadratic(qc.cross, qc.target, qc.exposure);
    if (k > 0.0)
        sol = epo::solve_general(sc.exposure_wealth, chosen, sc.grid, cfg.make_loss_config(),
                                 sol.allocations);

    std::filesystem::create_directories(g.out_dir);
    epo::Table t;
    t.comments = epo::provenance(cfg);
    t.columns = {"instrument", "allocation", "value0"};
    for (std::size_t s = 0; s < subset.size(); ++s)
        t.add_row({epo::Cell(static_cast<double>(subset[s] + 1)),
                   epo::Cell(sol.allocations(static_cast<Eigen::Index>(s))),
                   epo::Cell(chosen[s].value(0, 0))});
    epo::emit_csv(t, (std::filesystem::path(g.out_dir) / "hedge_allocations.csv").string());

    const epo::PathMatrix d = epo::signed_distance(sc.exposure_wealth, chosen, sol.allocations);
    epo::LossConfig lc = cfg.make_loss_config();
    const epo::LossBreakdown bd = epo::loss(d, sc.grid, lc);
    epo::Table lt;
    lt.comments = epo::provenance(cfg);
    lt.columns = {"loss_total", "loss_moment", "loss_es", "no_hedge_loss"};
    lt.add_row({epo::Cell(bd.total), epo::Cell(bd.moment), epo::Cell(bd.shortfall),
                epo::Cell(qc.exposure)});
    epo::emit_csv(lt, (std::filesystem::path(g.out_dir) / "hedge_losses.csv").string());

    const auto id = epo::integrated_distance(d, sc.grid, cfg.loss.window_begin, cfg.loss.window_end);
    epo::Table it;
    it.comments = epo::provenance(cfg);
    it.columns = {"path", "integrated_distance"};
    for (std::size_t i = 0; i < id.size(); ++i)
        it.add_row({epo::Cell(static_cast<double>(i)), epo::Cell(id[i])});
    epo::emit_csv(it, (std::filesystem::path(g.out_dir) / "hedge_distance.csv").string());
    std::cout << "hedge loss " << bd.total << " vs no-hedge " << qc.exposure << "\n";
    return kOk;
}

int cmd_robust(const GlobalOpts& g, std::vector<double> alpha_range, std::vector<double> theta_range,
               std::vector<int> grid_shape, const std::string& roster) {
    epo::RunConfig cfg = load_config(g);
    if (g.paths > 0) cfg.robust.paths = static_cast<std::size_t>(g.paths);
    if (alpha_range.size() == 2) {
        cfg.robust.alpha_min = alpha_range[0];
        cfg.robust.alpha_max = alpha_range[1];
    }
    if (theta_range.size() == 2) {
        cfg.robust.theta_min = theta_range[0];
        cfg.robust.theta_max = theta_range[1];
    }
    if (grid_shape.size() == 2) {
        cfg.robust.grid_alpha = grid_shape[0];
        cfg.robust.grid_theta = grid_shape[1];
    }
    if (!roster.empty()) {
        cfg.robust.roster.clear();
        for (char c : roster) {
            if (c == ',') continue;
            cfg.robust.roster.push_back(static_cast<std::size_t>(c - '1'));
        }
    }
    cfg.validate();
    for (const auto& f : epo::run_experiment("robust", cfg, g.out_dir)) std::cout << "wrote " << f << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prepayment-option pricing and static hedging toolkit"};
    app.require_subcommand(1);

    GlobalOpts g_sim, g_price, g_hedge, g_robust, g_exp;
    int sample_paths = 100;
    bool full_values = false;
    std::string roster;
    int loss_p = 2;
    double loss_q = 0.9, loss_k = 0.0;
    std::vector<double> window, alpha_range, theta_range;
    std::vector<int> grid_shape;
    std::string experiment_id;

    auto* sim = app.add_subcommand("simulate", "simulate joint factor paths");
    add_globals(sim, g_sim);
    sim->add_option("--sample-paths", sample_paths, "number of paths to dump");

    auto* price = app.add_subcommand("price-epo", "value the embedded prepayment option");
    add_globals(price, g_price);
    price->add_flag("--full-values", full_values, "also dump the full value matrix");

    auto* hedge = app.add_subcommand("hedge", "conditional static hedge");
    add_globals(hedge, g_hedge);
    hedge->add_option("--roster", roster, "instrument indices, e.g. 1,2,3");
    hedge->add_option("--p", loss_p, "moment order");
    hedge->add_option("--q", loss_q, "shortfall level");
    hedge->add_option("--k", loss_k, "shortfall weight");
    hedge->add_option("--window", window, "monitoring window begin end")->expected(2);

    auto* robust = app.add_subcommand("robust", "robust (min-max) hedge search");
    add_globals(robust, g_robust);
    std::string robust_roster;
    robust->add_option("--alpha-range", alpha_range, "pricing mean-reversion range")->expected(2);
    robust->add_option("--theta-range", theta_range, "pricing mean range")->expected(2);
    robust->add_option("--grid", grid_shape, "nodal grid shape")->expected(2);
    robust->add_option("--roster", robust_roster, "instrument indices, e.g. 1 or 1,2,3");

    auto* exp = app.add_subcommand("experiment", "run a named experiment preset");
    add_globals(exp, g_exp);
    exp->add_option("id", experiment_id, "preset id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(g_sim, sample_paths);
        if (price->parsed()) return cmd_price(g_price, full_values);
        if (hedge->parsed()) return cmd_hedge(g_hedge, roster, loss_p, loss_q, loss_k, window);
        if (robust->parsed()) return cmd_robust(g_robust, alpha_range, theta_range, grid_shape, robust_roster);
        if (exp->parsed()) {
            const epo::RunConfig cfg = load_config(g_exp);
            for (const auto& f : epo::run_experiment(experiment_id, cfg, g_exp.out_dir))
                std::cout << "wrote " << f << "\n";
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.find("cannot open") != std::string::npos ||
                       what.find("write failed") != std::string::npos
                   ? kIoError
                   : kNumericalError;
    }
    return kConfigError;
}
