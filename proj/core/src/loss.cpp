#include "epo/loss.hpp"

#include "epo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

double expected_shortfall(const std::vector<double>& sample, double q, TailSide side) {
    if (sample.empty()) throw std::invalid_argument("expected_shortfall: empty sample");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("expected_shortfall: q must be in (0,1)");
    const std::size_t n = sample.size();
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    const double quantile = sorted[std::min(rank, n) - 1];
    double sum = 0.0;
    std::size_t count = 0;
    if (side == TailSide::Upper) {
        for (double x : sorted)
            if (x > quantile) {
                sum += x;
                ++count;
            }
    } else {
        for (double x : sorted)
            if (x < quantile) {
                sum += x;
                ++count;
            }
    }
    return count == 0 ? quantile : sum / static_cast<double>(count);
}

void LossConfig::validate() const {
    if (p < 1) throw std::invalid_argument("LossConfig: moment order must be >= 1");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("LossConfig: q must be in (0,1)");
    if (shortfall_weight < 0.0) throw std::invalid_argument("LossConfig: shortfall weight must be >= 0");
    if (!(window_end > window_begin)) throw std::invalid_argument("LossConfig: empty monitoring window");
}

void LossConfig::validate_on_grid(const TimeGrid& grid) const {
    validate();
    const std::size_t a = grid.index_of(window_begin);
    const std::size_t b = grid.index_of(window_end);
    double integral = 0.0;
    for (std::size_t k = a; k < b; ++k) {
        const double t0 = grid.time(k), t1 = grid.time(k + 1);
        integral += 0.5 * (alpha(t0) + alpha(t1)) * (t1 - t0);
    }
    if (std::abs(integral - (window_end - window_begin)) > 1e-9)
        throw std::invalid_argument("LossConfig: alpha weight is not normalized on the grid");
}

PathMatrix signed_distance(const WealthPath& epo, const std::vector<WealthPath>& instruments,
                           const Eigen::VectorXd& allocations) {
    if (static_cast<std::size_t>(allocations.size()) != instruments.size())
        throw std::invalid_argument("signed_distance: allocations/instruments size mismatch");
    const std::size_t n_paths = epo.value.paths();
    const std::size_t n_nodes = epo.value.nodes();
    for (const auto& inst : instruments) {
        inst.value.require_shape(n_paths, n_nodes, "signed_distance");
        inst.cash.require_shape(n_paths, n_nodes, "signed_distance");
    }
    PathMatrix d(n_paths, n_nodes);
    parallel_blocks(n_paths, kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i) {
            double* out = d.row(i);
            const double* ev = epo.value.row(i);
            const double* ec = epo.cash.row(i);
            for (std::size_t k = 0; k < n_nodes; ++k) out[k] = ev[k] + ec[k];
            for (std::size_t idx = 0; idx < instruments.size(); ++idx) {
                const double w = allocations(static_cast<Eigen::Index>(idx));
                const double* iv = instruments[idx].value.row(i);
                const double* ic = instruments[idx].cash.row(i);
                for (std::size_t k = 0; k < n_nodes; ++k) out[k] -= w * (iv[k] + ic[k]);
            }
        }
    });
    return d;
}

namespace {

double moment_of(const std::vector<double>& col, int p) {
    double acc = 0.0;
    for (double x : col) {
        double ax = std::abs(x);
        double m = ax;
        for (int e = 1; e < p; ++e) m *= ax;
        acc += m;
    }
    return acc / static_cast<double>(col.size());
}

// Upper ES via partial selection; matches the sort-based definition.
double upper_es_inplace(std::vector<double>& col, double q) {
    const std::size_t n = col.size();
    const std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    auto nth = col.begin() + static_cast<std::ptrdiff_t>(std::min(rank, n) - 1);
    std::nth_element(col.begin(), nth, col.end());
    const double quantile = *nth;
    double sum = 0.0;
    std::size_t count = 0;
    for (auto it = nth + 1; it != col.end(); ++it)
        if (*it > quantile) {
            sum += *it;
            ++count;
        }
    return count == 0 ? quantile : sum / static_cast<double>(count);
}

} // namespace

LossBreakdown loss(const PathMatrix& distance, const TimeGrid& grid, const LossConfig& config) {
    config.validate_on_grid(grid);
    const std::size_t a = grid.index_of(config.window_begin);
    const std::size_t b = grid.index_of(config.window_end);
    const std::size_t n_paths = distance.paths();
    if (distance.nodes() != grid.size())
        throw std::invalid_argument("loss: distance/grid node mismatch");

    const std::size_t n_win = b - a + 1;
    std::vector<double> moment_node(n_win, 0.0), es_node(n_win, 0.0);
    parallel_blocks(n_win, 8, [&](std::size_t beg, std::size_t end) {
        std::vector<double> col(n_paths);
        for (std::size_t kk = beg; kk < end; ++kk) {
            const std::size_t k = a + kk;
            for (std::size_t i = 0; i < n_paths; ++i) col[i] = distance(i, k);
            moment_node[kk] = moment_of(col, config.p);
            es_node[kk] = upper_es_inplace(col, config.q);
        }
    });

    LossBreakdown out;
    for (std::size_t kk = 0; kk + 1 < n_win; ++kk) {
        const double t0 = grid.time(a + kk), t1 = grid.time(a + kk + 1);
        const double dt = t1 - t0;
        out.moment += 0.5 * (config.alpha(t0) * moment_node[kk] + config.alpha(t1) * moment_node[kk + 1]) * dt;
        out.shortfall += 0.5 * (config.alpha(t0) * es_node[kk] + config.alpha(t1) * es_node[kk + 1]) * dt;
    }
    out.total = out.moment + config.shortfall_weight * out.shortfall;
    return out;
}

std::vector<double> integrated_distance(const PathMatrix& distance, const TimeGrid& grid,
                                        double window_begin, double window_end) {
    const std::size_t a = grid.index_of(window_begin);
    const std::size_t b = grid.index_of(window_end);
    std::vector<double> out(distance.paths());
    parallel_blocks(distance.paths(), kPathBlock, [&](std::size_t beg, std::size_t end) {
        for (std::size_t i = beg; i < end; ++i)
            out[i] = trapezoid_idx(distance.row(i), grid.times(), a, b);
    });
    return out;
}

} // namespace epo
