#include "epo/experiments.hpp"

#include "epo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace epo {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

std::vector<std::string> provenance(const RunConfig& cfg) {
    return {"config_hash=" + cfg.canonical_hash(), "seed=" + std::to_string(cfg.simulation.seed)};
}

double to_bps(const RunConfig& cfg, double value) {
    return value / cfg.mortgage.notional0 * 1e4;
}

BuiltScenario build_scenario(const RunConfig& cfg, bool with_hedges) {
    cfg.validate();
    set_worker_threads(cfg.simulation.threads);
    HullWhiteParams hw = cfg.make_hull_white();
    TimeGrid grid = cfg.make_grid();
    const OUParams pricing = girsanov_map(cfg.behavior, cfg.mpr);
    PathSet paths = simulate_paths(hw, pricing, cfg.correlation, grid, cfg.simulation.paths,
                                   cfg.simulation.seed);
    BuiltScenario sc(std::move(hw), std::move(grid), std::move(paths));
    sc.notionals = notional_paths(cfg.mortgage, cfg.sigmoid, sc.paths, sc.hw, cfg.prepayment_mode);
    sc.lsm = price_epo(sc.paths, sc.notionals, cfg.mortgage, sc.hw, cfg.lsm);
    sc.price = price_epo_at_zero(sc.paths, sc.notionals, cfg.mortgage, sc.hw, cfg.lsm);
    const PathMatrix cfs = epo_cashflows(sc.paths, sc.notionals, cfg.mortgage, sc.hw);
    sc.exposure_wealth = epo_wealth(sc.lsm, cfs, sc.paths, cfg.mortgage);
    if (with_hedges)
        for (const auto& inst : cfg.instruments)
            sc.hedge_wealth.push_back(instrument_wealth(inst, sc.paths, sc.hw));
    return sc;
}

PriceAtZero price_run(const RunConfig& cfg) {
    cfg.validate();
    set_worker_threads(cfg.simulation.threads);
    const HullWhiteParams hw = cfg.make_hull_white();
    const TimeGrid grid = cfg.make_grid();
    const OUParams pricing = girsanov_map(cfg.behavior, cfg.mpr);
    const PathSet paths = simulate_paths(hw, pricing, cfg.correlation, grid, cfg.simulation.paths,
                                         cfg.simulation.seed);
    const NotionalPaths notionals =
        notional_paths(cfg.mortgage, cfg.sigmoid, paths, hw, cfg.prepayment_mode);
    return price_epo_at_zero(paths, notionals, cfg.mortgage, hw, cfg.lsm);
}

namespace {

const std::vector<double> kEtaSweep = {0.0, 0.005, 0.01, 0.015, 0.02};

std::vector<std::string> run_fig4a(const RunConfig& base, const std::string& out_dir) {
    Table t;
    t.comments = provenance(base);
    t.columns = {"scheme", "sigmoid", "eta_b", "v0_bps", "stderr_bps"};
    for (const char* scheme : {"bullet", "linear"}) {
        for (const char* sig : {"rational", "empirical"}) {
            for (double eta : kEtaSweep) {
                RunConfig cfg = base;
                cfg.mortgage.amortization =
                    std::string(scheme) == "bullet" ? Amortization::Bullet : Amortization::Linear;
                if (std::string(sig) == "rational") {
                    cfg.sigmoid.lower = 0.0;
                    cfg.sigmoid.rational = true;
                }
                cfg.behavior.vol = eta;
                const PriceAtZero p = price_run(cfg);
                t.add_row({Cell(scheme), Cell(sig), Cell(eta), Cell(to_bps(cfg, p.value)),
                           Cell(to_bps(cfg, p.stderr_))});
            }
        }
    }
    const std::string path = join(out_dir, "fig4a.csv");
    emit_csv(t, path);
    return {path};
}

std::vector<std::string> run_fig4b(const RunConfig& base, const std::string& out_dir) {
    Table t;
    t.comments = provenance(base);
    t.columns = {"lambda0", "lambda1", "eta_b", "v0_bps", "stderr_bps"};
    const std::vector<std::pair<double, double>> lambdas = {
        {0.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}, {-2.0, 0.0}, {-4.0, 0.0},
        {0.0, 50.0}, {0.0, 100.0}, {0.0, -50.0}, {0.0, -100.0}};
    for (const auto& [l0, l1] : lambdas) {
        for (double eta : kEtaSweep) {
            RunConfig cfg = base;
            cfg.mortgage.amortization = Amortization::Bullet;
            cfg.behavior.vol = eta;
            cfg.mpr = {l0, l1};
            if (eta > 0.0 && cfg.behavior.alpha + eta * l1 <= 0.0) continue;  // inadmissible
            const PriceAtZero p = price_run(cfg);
            t.add_row({Cell(l0), Cell(l1), Cell(eta), Cell(to_bps(cfg, p.value)),
                       Cell(to_bps(cfg, p.stderr_))});
        }
    }
    const std::string path = join(out_dir, "fig4b.csv");
    emit_csv(t, path);
    return {path};
}

// The seven replicating portfolios of the conditional-hedge table, as
// index subsets of the configured three-instrument roster.
const std::vector<std::vector<std::size_t>> kRosterSubsets = {
    {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};

std::string subset_label(const std::vector<std::size_t>& subset) {
    std::string s = "w";
    for (std::size_t idx : subset) s += std::to_string(idx + 1);
    return s;
}

struct HedgeTableRow {
    std::string label;
    std::array<double, 3> alloc{0.0, 0.0, 0.0};
    std::array<bool, 3> used{false, false, false};
    double loss_abs = 0.0;
    double loss_rel = 0.0;
    double initial_cost = 0.0;
};

std::vector<HedgeTableRow> conditional_hedge_rows(const RunConfig& cfg, const BuiltScenario& sc) {
    if (cfg.instruments.size() != 3)
        throw std::invalid_argument("table4: needs the three-instrument roster");
    const TimeWeight alpha;
    const QuadraticCoefficients full =
        quadratic_coefficients(sc.exposure_wealth, sc.hedge_wealth, sc.grid, alpha,
                               cfg.loss.window_begin, cfg.loss.window_end);
    std::vector<HedgeTableRow> rows;
    {
        HedgeTableRow zero;
        zero.label = "zero";
        zero.loss_abs = full.exposure;
        zero.loss_rel = 1.0;
        rows.push_back(zero);
    }
    for (const auto& subset : kRosterSubsets) {
        const Eigen::Index m = static_cast<Eigen::Index>(subset.size());
        Eigen::MatrixXd x(m, m);
        Eigen::VectorXd y(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            y(a) = full.target(static_cast<Eigen::Index>(subset[a]));
            for (Eigen::Index b = 0; b < m; ++b)
                x(a, b) = full.cross(static_cast<Eigen::Index>(subset[a]),
                                     static_cast<Eigen::Index>(subset[b]));
        }
        const HedgeSolution sol = solve_quadratic(x, y, full.exposure);
        HedgeTableRow row;
        row.label = subset_label(subset);
        row.loss_abs = sol.loss_value;
        row.loss_rel = sol.loss_value / full.exposure;
        for (Eigen::Index a = 0; a < m; ++a) {
            row.alloc[subset[a]] = sol.allocations(a);
            row.used[subset[a]] = true;
            row.initial_cost += sol.allocations(a) * sc.hedge_wealth[subset[a]].value(0, 0);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::string> run_table4(const RunConfig& cfg, const std::string& out_dir) {
    const BuiltScenario sc = build_scenario(cfg, true);
    const auto rows = conditional_hedge_rows(cfg, sc);
    Table t;
    t.comments = provenance(cfg);
    t.columns = {"portfolio", "rec_swap", "rec_swaption", "pay_swaption",
                 "loss_m2", "loss_m2_pct", "initial_cost"};
    for (const auto& r : rows) {
        std::vector<Cell> cells{Cell(r.label)};
        for (int s = 0; s < 3; ++s)
            cells.push_back(r.used[s] ? Cell(r.alloc[s]) : Cell(""));
        cells.push_back(Cell(r.loss_abs));
        cells.push_back(Cell(r.loss_rel * 100.0));
        cells.push_back(Cell(r.initial_cost));
        t.add_row(std::move(cells));
    }
    const std::string path = join(out_dir, "table4.csv");
    emit_csv(t, path);
    return {path};
}

std::vector<std::string> run_table5(const RunConfig& cfg, const std::string& out_dir) {
    const BuiltScenario sc = build_scenario(cfg, true);
    Table t;
    t.comments = provenance(cfg);
    t.columns = {"k", "rec_swap", "rec_swaption", "pay_swaption", "loss_m2", "loss_es", "initial_cost"};
    const TimeWeight alpha;
    const QuadraticCoefficients full =
        quadratic_coefficients(sc.exposure_wealth, sc.hedge_wealth, sc.grid, alpha,
                               cfg.loss.window_begin, cfg.loss.window_end);
    const HedgeSolution quad = solve_quadratic(full.cross, full.target, full.exposure);
    for (double k : {0.0, 10.0, 20.0}) {
        LossConfig lc = cfg.make_loss_config();
        lc.shortfall_weight = k;
        HedgeSolution sol;
        if (k == 0.0) {
            sol = quad;
            const PathMatrix d = signed_distance(sc.exposure_wealth, sc.hedge_wealth, quad.allocations);
            const LossBreakdown bd = loss(d, sc.grid, lc);
            sol.moment_part = bd.moment;
            sol.shortfall_part = bd.shortfall;
        } else {
            sol = solve_general(sc.exposure_wealth, sc.hedge_wealth, sc.grid, lc, quad.allocations);
        }
        double cost = 0.0;
        for (Eigen::Index s = 0; s < sol.allocations.size(); ++s)
            cost += sol.allocations(s) * sc.hedge_wealth[s].value(0, 0);
        t.add_row({Cell(k), Cell(sol.allocations(0)), Cell(sol.allocations(1)),
                   Cell(sol.allocations(2)), Cell(sol.moment_part), Cell(sol.shortfall_part),
                   Cell(cost)});
    }
    const std::string path = join(out_dir, "table5.csv");
    emit_csv(t, path);
    return {path};
}

std::vector<std::string> run_fig5(const RunConfig& cfg, const std::string& out_dir) {
    const BuiltScenario sc = build_scenario(cfg, true);
    const auto rows = conditional_hedge_rows(cfg, sc);
    Table t;
    t.comments = provenance(cfg);
    t.columns = {"path"};
    std::vector<std::vector<double>> ids;
    for (const auto& r : rows) {
        Eigen::VectorXd w(3);
        w << r.alloc[0], r.alloc[1], r.alloc[2];
        const PathMatrix d = signed_distance(sc.exposure_wealth, sc.hedge_wealth, w);
        ids.push_back(integrated_distance(d, sc.grid, cfg.loss.window_begin, cfg.loss.window_end));
        t.columns.push_back("id_" + r.label);
    }
    for (std::size_t i = 0; i < sc.paths.n_paths(); ++i) {
        std::vector<Cell> cells{Cell(static_cast<double>(i))};
        for (const auto& v : ids) cells.push_back(Cell(v[i]));
        t.add_row(std::move(cells));
    }
    const std::string path = join(out_dir, "fig5.csv");
    emit_csv(t, path);
    return {path};
}

std::vector<std::string> run_fig6(const RunConfig& cfg, const std::string& out_dir) {
    const BuiltScenario sc = build_scenario(cfg, true);
    const TimeWeight alpha;
    const QuadraticCoefficients full =
        quadratic_coefficients(sc.exposure_wealth, sc.hedge_wealth, sc.grid, alpha,
                               cfg.loss.window_begin, cfg.loss.window_end);
    const HedgeSolution quad = solve_quadratic(full.cross, full.target, full.exposure);
    Table t;
    t.comments = provenance(cfg);
    t.columns = {"path"};
    std::vector<std::vector<double>> ids;
    for (double k : {0.0, 10.0, 20.0}) {
        Eigen::VectorXd w;
        if (k == 0.0) {
            w = quad.allocations;
        } else {
            LossConfig lc = cfg.make_loss_config();
            lc.shortfall_weight = k;
            w = solve_general(sc.exposure_wealth, sc.hedge_wealth, sc.grid, lc, quad.allocations)
                    .allocations;
        }
        const PathMatrix d = signed_distance(sc.exposure_wealth, sc.hedge_wealth, w);
        ids.push_back(integrated_distance(d, sc.grid, cfg.loss.window_begin, cfg.loss.window_end));
        t.columns.push_back("id_k" + std::to_string(static_cast<int>(k)));
    }
    for (std::size_t i = 0; i < sc.paths.n_paths(); ++i) {
        std::vector<Cell> cells{Cell(static_cast<double>(i))};
        for (const auto& v : ids) cells.push_back(Cell(v[i]));
        t.add_row(std::move(cells));
    }
    const std::string path = join(out_dir, "fig6.csv");
    emit_csv(t, path);
    return {path};
}

RobustScenario robust_scenario_from(const RunConfig& cfg, const std::vector<InstrumentSpec>& roster) {
    RobustScenario sc{cfg.make_hull_white(), cfg.behavior, cfg.correlation, cfg.mortgage,
                      cfg.sigmoid, cfg.prepayment_mode, roster, cfg.lsm, TimeWeight{},
                      2, cfg.loss.window_begin, cfg.loss.window_end, cfg.robust.paths,
                      cfg.simulation.seed, cfg.simulation.steps_per_year};
    return sc;
}

std::vector<std::string> run_robust(const RunConfig& cfg, const std::string& out_dir) {
    set_worker_threads(cfg.simulation.threads);
    MprDomain domain_spec{cfg.robust.alpha_min, cfg.robust.alpha_max, cfg.robust.theta_min,
                          cfg.robust.theta_max, cfg.behavior};
    const DomainGeometry domain = build_domain(domain_spec);
    std::vector<InstrumentSpec> roster;
    for (std::size_t idx : cfg.robust.roster) roster.push_back(cfg.instruments[idx]);
    const RobustScenario sc = robust_scenario_from(cfg, roster);
    const NodalTables tables =
        evaluate_nodal_grid(domain, cfg.robust.grid_alpha, cfg.robust.grid_theta, sc);
    const SplineSurface surface = fit_spline(tables);
    const auto candidates = find_critical_points(surface, domain);
    const SaddleReport report = classify_and_boundary(candidates, surface, domain);
    const ProjectedLoss pl = make_projected_loss(surface);

    std::vector<std::string> written;
    {
        Table t;
        t.comments = provenance(cfg);
        t.columns = {"alpha", "theta", "lambda0", "lambda1", "z"};
        for (std::size_t s = 0; s < roster.size(); ++s)
            t.columns.push_back("y" + std::to_string(s + 1));
        t.columns.push_back("loss");
        t.columns.push_back("grad_alpha");
        t.columns.push_back("grad_theta");
        const int n_eval = 60;
        for (int i = 0; i <= n_eval; ++i) {
            for (int j = 0; j <= n_eval; ++j) {
                const double a = cfg.robust.alpha_min +
                                 (cfg.robust.alpha_max - cfg.robust.alpha_min) * i / n_eval;
                const double th = cfg.robust.theta_min +
                                  (cfg.robust.theta_max - cfg.robust.theta_min) * j / n_eval;
                const auto lam = domain.to_lambda(a, th);
                const Eigen::Vector2d g = pl.gradient(a, th);
                std::vector<Cell> cells{Cell(a), Cell(th), Cell(lam[0]), Cell(lam[1]),
                                        Cell(surface.exposure.value(a, th))};
                for (const auto& ysurf : surface.target) cells.push_back(Cell(ysurf.value(a, th)));
                cells.push_back(Cell(pl.value(a, th)));
                cells.push_back(Cell(g(0)));
                cells.push_back(Cell(g(1)));
                t.add_row(std::move(cells));
            }
        }
        const std::string path = join(out_dir, "robust_surface.csv");
        emit_csv(t, path);
        written.push_back(path);
    }
    {
        Table t;
        t.comments = provenance(cfg);
        t.columns = {"type", "edge", "alpha", "theta", "lambda0", "lambda1",
                     "classification", "eig1", "eig2", "inward_derivative", "robust", "loss"};
        for (std::size_t s = 0; s < roster.size(); ++s)
            t.columns.push_back("w" + std::to_string(s + 1));
        auto kind_str = [](CriticalKind k) {
            switch (k) {
                case CriticalKind::Saddle: return "saddle";
                case CriticalKind::Minimum: return "min";
                case CriticalKind::Indefinite: return "indefinite";
                default: return "unclassified";
            }
        };
        for (const auto& c : report.critical_points) {
            std::vector<Cell> cells{Cell("interior"), Cell(""), Cell(c.alpha), Cell(c.theta),
                                    Cell(c.lambda0), Cell(c.lambda1), Cell(kind_str(c.kind)),
                                    Cell(c.eigenvalues[0]), Cell(c.eigenvalues[1]), Cell(""),
                                    Cell(""), Cell(c.loss)};
            for (Eigen::Index s = 0; s < c.allocations.size(); ++s)
                cells.push_back(Cell(c.allocations(s)));
            t.add_row(std::move(cells));
        }
        for (const auto& b : report.boundary) {
            std::vector<Cell> cells{Cell("boundary"), Cell(static_cast<double>(b.edge)),
                                    Cell(b.alpha), Cell(b.theta), Cell(b.lambda0), Cell(b.lambda1),
                                    Cell(""), Cell(""), Cell(""), Cell(b.inward_derivative),
                                    Cell(b.robust ? "yes" : "no"), Cell(b.loss)};
            for (Eigen::Index s = 0; s < b.allocations.size(); ++s)
                cells.push_back(Cell(b.allocations(s)));
            t.add_row(std::move(cells));
        }
        const std::string path = join(out_dir, "robust_saddle.csv");
        emit_csv(t, path);
        written.push_back(path);
    }
    {
        Table t;
        t.comments = provenance(cfg);
        t.columns = {"trajectory", "step", "alpha", "theta", "loss"};
        int id = 0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double a = cfg.robust.alpha_min +
                                 (cfg.robust.alpha_max - cfg.robust.alpha_min) * (0.2 + 0.3 * i);
                const double th = cfg.robust.theta_min +
                                  (cfg.robust.theta_max - cfg.robust.theta_min) * (0.2 + 0.3 * j);
                const auto traj = ascent_trajectory(surface, domain, a, th);
                for (std::size_t s = 0; s < traj.size(); ++s)
                    t.add_row({Cell(static_cast<double>(id)), Cell(static_cast<double>(s)),
                               Cell(traj[s][0]), Cell(traj[s][1]), Cell(traj[s][2])});
                ++id;
            }
        }
        const std::string path = join(out_dir, "robust_trajectories.csv");
        emit_csv(t, path);
        written.push_back(path);
    }
    return written;
}

} // namespace

std::vector<std::string> experiment_ids() {
    return {"fig4a", "fig4b", "table4", "table5", "fig5", "fig6", "robust"};
}

std::vector<std::string> run_experiment(const std::string& id, const RunConfig& cfg,
                                        const std::string& out_dir) {
    cfg.validate();
    set_worker_threads(cfg.simulation.threads);
    std::filesystem::create_directories(out_dir);
    if (id == "fig4a") return run_fig4a(cfg, out_dir);
    if (id == "fig4b") return run_fig4b(cfg, out_dir);
    if (id == "table4") return run_table4(cfg, out_dir);
    if (id == "table5") return run_table5(cfg, out_dir);
    if (id == "fig5") return run_fig5(cfg, out_dir);
    if (id == "fig6") return run_fig6(cfg, out_dir);
    if (id == "robust") return run_robust(cfg, out_dir);
    std::string known;
    for (const auto& e : experiment_ids()) known += (known.empty() ? "" : ", ") + e;
    throw std::invalid_argument("unknown experiment id: " + id + " (known: " + known + ")");
}

} // namespace epo
