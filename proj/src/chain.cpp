#include "ipr/chain.hpp"

#include <algorithm>
#include <cmath>

#include "ipr/parallel.hpp"

namespace ipr {

namespace {

const double kSqrtPi = std::sqrt(std::acos(-1.0));

double growth_const(const ValueSurface& s) {
    double worst = 0.0;
    const double dz = s.z_max / s.J;
    for (int ip = 0; ip < s.grid.points; ++ip) {
        const double denom_pi = 1.0 + std::abs(s.grid.value(ip));
        for (int h = 1; h <= s.H - 1; ++h) {
            for (int j = 0; j <= s.J; ++j) {
                worst = std::max(worst, std::abs(s.at(ip, h, j)) / (denom_pi + j * dz));
            }
        }
    }
    return worst;
}

}  // namespace

InflationGrid InflationGrid::coverage(const ModelParams& mp, double z_max, int points) {
    const InflationParams& ip = mp.inflation;
    const double half = 6.0 * ip.v + std::abs(ip.beta) * (mp.jumps.r_hi + z_max);
    InflationGrid g;
    g.pi_min = ip.pi_star - half;
    g.pi_max = ip.pi_star + half;
    g.points = points;
    if (points < 2) throw ConfigError("inflation grid needs at least 2 points");
    return g;
}

double interp_pi(const InflationGrid& grid, const double* v, std::ptrdiff_t stride, double pi) {
    const int n = grid.points;
    const double dpi = grid.step();
    double slot = (pi - grid.pi_min) / dpi;
    int i = static_cast<int>(std::floor(slot));
    // Linear extrapolation keeps using the first/last segment.
    i = std::clamp(i, 0, n - 2);
    const double frac = slot - i;
    return v[i * stride] * (1.0 - frac) + v[(i + 1) * stride] * frac;
}

Lattice ValueSurface::slice_at(double pi) const {
    Lattice out(H, J, pi);
    const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(slice_size());
    for (std::size_t q = 0; q < slice_size(); ++q) {
        out.values[q] = interp_pi(grid, values.data() + q, stride, pi);
    }
    return out;
}

double convolve_inflation_shock(const std::function<double(double)>& f, double pi, double r,
                                double z, const ModelParams& mp, const GaussHermiteRule& rule) {
    if (rule.size() < 2) throw ConfigError("convolve_inflation_shock: need at least 2 quadrature points");
    const double mean = next_inflation_mean(pi, r, z, mp.inflation);
    const double scale = std::sqrt(2.0) * mp.inflation.v;
    double acc = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
        acc += rule.w[k] * f(mean + scale * rule.x[k]);
    }
    return acc / kSqrtPi;
}

ValueSurface convolve_surface(const ValueSurface& phi, const Grid& grid, const ModelParams& mp,
                              const GaussHermiteRule& rule, int threads) {
    if (rule.size() < 2) throw ConfigError("convolve_surface: need at least 2 quadrature points");
    ValueSurface out = phi;  // copies geometry; values overwritten below
    const int n_pi = phi.grid.points;
    const double scale = std::sqrt(2.0) * mp.inflation.v;
    const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(phi.slice_size());

    parallel_for(grid.rows(), threads, [&](int row) {
        const int h = row + 1;
        const double r_h = rate_level(grid, mp, h);
        std::vector<double> slice(n_pi);
        for (int j = 0; j <= grid.J; ++j) {
            const double z_j = j * grid.dz();
            const double* base = phi.values.data() +
                                 static_cast<std::size_t>(h - 1) * (grid.J + 1) + j;
            for (int ip = 0; ip < n_pi; ++ip) slice[ip] = base[ip * stride];
            for (int ip = 0; ip < n_pi; ++ip) {
                const double mean = next_inflation_mean(phi.grid.value(ip), r_h, z_j, mp.inflation);
                double acc = 0.0;
                for (int k = 0; k < rule.size(); ++k) {
                    acc += rule.w[k] * interp_pi(phi.grid, slice.data(), 1, mean + scale * rule.x[k]);
                }
                out.at(ip, h, j) = acc / kSqrtPi;
            }
        }
    });
    return out;
}

ValueSurface chain(const PayoffFn& payoff, const InflationGrid& pig, const Grid& grid,
                   const ModelParams& mp, const ChainOptions& opt, ChainStats* stats) {
    const int M = mp.inflation.M;
    if (M < 1) throw ConfigError("chain: M must be >= 1");
    const GaussHermiteRule rule = GaussHermiteRule::make(opt.quad_points);
    const IntervalSolver solver(grid, mp, mp.inflation.theta);

    ValueSurface psi;
    psi.grid = pig;
    psi.H = grid.H;
    psi.J = grid.J;
    psi.obs_index = M;
    psi.r_lo = mp.jumps.r_lo;
    psi.delta = mp.jumps.delta;
    psi.z_max = grid.z_max;
    psi.values.assign(static_cast<std::size_t>(pig.points) * psi.slice_size(), 0.0);

    // Terminal datum: the convolved payoff, evaluated on the payoff callable
    // directly (no pi-grid interpolation at this stage).
    parallel_for(pig.points, opt.threads, [&](int ip) {
        const double pi = pig.value(ip);
        for (int h = 1; h <= grid.H - 1; ++h) {
            const double r_h = rate_level(grid, mp, h);
            for (int j = 0; j <= grid.J; ++j) {
                const double z_j = j * grid.dz();
                psi.at(ip, h, j) = convolve_inflation_shock(
                    [&](double x) { return payoff(x, r_h, z_j); }, pi, r_h, z_j, mp, rule);
            }
        }
    });
    if (stats) stats->terminal_growth_const = growth_const(psi);

    ValueSurface phi = psi;  // same shape
    std::vector<SolveStats> per_pi(pig.points);
    for (int i = M - 1; i >= 0; --i) {
        parallel_for(pig.points, opt.threads, [&](int ip) {
            Lattice terminal(grid.H, grid.J, pig.value(ip));
            std::copy(psi.slice(ip), psi.slice(ip) + psi.slice_size(), terminal.values.data());
            const Lattice solved =
                solver.solve(terminal, pig.value(ip), grid.N, stats ? &per_pi[ip] : nullptr);
            std::copy(solved.values.begin(), solved.values.end(), phi.slice(ip));
        });
        phi.obs_index = i;
        if (opt.progress) opt.progress(i);
        if (i > 0) {
            psi = convolve_surface(phi, grid, mp, rule, opt.threads);
            psi.obs_index = i;
        }
    }
    if (stats) {
        for (const SolveStats& s : per_pi) {
            stats->solve.max_residual_ratio =
                std::max(stats->solve.max_residual_ratio, s.max_residual_ratio);
            stats->solve.min_dominance_margin =
                std::min(stats->solve.min_dominance_margin, s.min_dominance_margin);
            stats->solve.steps += s.steps;
        }
        stats->final_growth_const = growth_const(phi);
    }
    return phi;
}

Lattice solve_single_horizon(const PayoffFn& payoff, const Grid& grid, const ModelParams& mp,
                             double pi, SolveStats* stats) {
    const int M = mp.inflation.M;
    Grid long_grid = grid;
    long_grid.N = grid.N * M;
    const IntervalSolver solver(long_grid, mp, mp.inflation.theta * M);
    Lattice terminal(grid.H, grid.J, pi);
    for (int h = 1; h <= grid.H - 1; ++h) {
        const double r_h = rate_level(grid, mp, h);
        for (int j = 0; j <= grid.J; ++j) {
            terminal.at(h, j) = payoff(pi, r_h, j * grid.dz());
        }
    }
    return solver.solve(terminal, pi, long_grid.N, stats);
}

double price_at(const ValueSurface& surface, double pi, double r, double z, bool* clamped) {
    bool clip = false;
    // r lives on the exact jump lattice: snap to the nearest level.
    int h = static_cast<int>(std::lround((r - surface.r_lo) / surface.delta));
    if (h < 1 || h > surface.H - 1) {
        clip = true;
        h = std::clamp(h, 1, surface.H - 1);
    }
    if (pi < surface.grid.pi_min || pi > surface.grid.pi_max) {
        clip = true;
        pi = std::clamp(pi, surface.grid.pi_min, surface.grid.pi_max);
    }
    const double dz = surface.z_max / surface.J;
    if (z < 0.0 || z > surface.z_max) {
        clip = true;
        z = std::clamp(z, 0.0, surface.z_max);
    }
    const double zslot = z / dz;
    int j = std::clamp(static_cast<int>(std::floor(zslot)), 0, surface.J - 1);
    const double zfrac = zslot - j;

    const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(surface.slice_size());
    const double* lo = surface.values.data() + static_cast<std::size_t>(h - 1) * (surface.J + 1) + j;
    const double v_lo = interp_pi(surface.grid, lo, stride, pi);
    const double v_hi = interp_pi(surface.grid, lo + 1, stride, pi);
    if (clamped) *clamped = clip;
    return v_lo * (1.0 - zfrac) + v_hi * zfrac;
}

}  // namespace ipr
