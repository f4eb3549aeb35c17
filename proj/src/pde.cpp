#include "ipr/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace ipr {

namespace {

std::string location_msg(const char* what, int h, int j) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s at (h=%d, j=%d); refine the grid", what, h, j);
    return buf;
}

double row0_margin(const SchemeCoefficients& c, int h) {
    // |diag| - (|-4 conv0| + |conv0|) for the one-sided boundary row
    return c.diag_at(h, 0) - 5.0 * std::abs(c.conv_at(h, 0));
}

double interior_margin(const SchemeCoefficients& c, int h, int j) {
    return c.diag_at(h, j) - std::abs(c.lower_at(h, j)) - std::abs(c.upper_at(h, j));
}

}  // namespace

Grid Grid::make(const ModelParams& mp, double z_max, int N, int J) {
    const int H = static_cast<int>((mp.jumps.r_hi - mp.jumps.r_lo) / mp.jumps.delta);
    return make(mp, z_max, N, J, H);
}

Grid Grid::make(const ModelParams& mp, double z_max, int N, int J, int H) {
    if (!(z_max > 0.0)) throw ConfigError("grid: z_max must be > 0");
    if (J < 3) throw ConfigError("grid: J must be >= 3 (boundary stencil needs z index 2)");
    if (N < 0) throw ConfigError("grid: N must be >= 0");
    if (H < 2) throw ConfigError("grid: need at least one interior policy-rate level");
    if (H * mp.jumps.delta > mp.jumps.r_hi - mp.jumps.r_lo + 1e-12)
        throw ConfigError("grid: H exceeds (r_hi - r_lo)/delta");
    Grid g;
    g.H = H;
    g.J = J;
    g.N = N;
    g.z_max = z_max;
    return g;
}

double rate_level(const Grid&, const ModelParams& mp, int h) {
    return mp.jumps.r_lo + h * mp.jumps.delta;
}

SchemeCoefficients build_coefficients(const Grid& grid, const ModelParams& mp) {
    return build_coefficients(grid, mp, mp.inflation.theta);
}

SchemeCoefficients build_coefficients(const Grid& grid, const ModelParams& mp,
                                      double interval_length) {
    if (grid.N < 1) throw ConfigError("build_coefficients: N must be >= 1");
    SchemeCoefficients c;
    c.H = grid.H;
    c.J = grid.J;
    c.dtau = interval_length / grid.N;
    c.dz = grid.dz();
    const std::size_t count = static_cast<std::size_t>(grid.rows()) * grid.J;
    c.conv.assign(count, 0.0);
    c.diff.assign(count, 0.0);
    c.lower.assign(count, 0.0);
    c.upper.assign(count, 0.0);
    c.diag.assign(count, 0.0);
    c.disc.assign(count, 0.0);

    const double k_sh = mp.short_rate.k_sh;
    for (int h = 1; h <= grid.H - 1; ++h) {
        const double r_h = rate_level(grid, mp, h);
        const double b = reversion_level(r_h, mp.short_rate);
        for (int j = 0; j < grid.J; ++j) {
            const double z_j = j * c.dz;
            const std::size_t i = c.idx(h, j);
            c.conv[i] = k_sh * (b - z_j) * c.dtau / (4.0 * c.dz);
            if (j == 0) {
                // Hyperbolic boundary row: one-sided stencil, no diffusion,
                // no discounting (z = 0).
                c.diff[i] = 0.75 * k_sh * b * c.dtau / c.dz;
                c.diag[i] = 1.0 + c.diff[i];
                continue;
            }
            const double spread = r_h - z_j;
            c.diff[i] = z_j * mp.short_rate.sigma_bar_sq(spread * spread) * c.dtau /
                        (4.0 * c.dz * c.dz);
            // Percent -> decimal conversion of the discount term happens here
            // and nowhere else in the PDE.
            c.disc[i] = 0.5 * c.dtau * z_j;  // EXPERIMENT: no percent->decimal conversion
            c.lower[i] = c.conv[i] - c.diff[i];
            c.upper[i] = c.diff[i] + c.conv[i];
            c.diag[i] = 2.0 * c.diff[i] + c.disc[i] + 1.0;
        }
    }
    return c;
}

DominanceCheck check_dominance(const SchemeCoefficients& c) {
    DominanceCheck out;
    for (int h = 1; h <= c.H - 1; ++h) {
        for (int j = 0; j < c.J; ++j) {
            const double margin = (j == 0) ? row0_margin(c, h) : interior_margin(c, h, j);
            if (margin < out.min_margin) {
                out.min_margin = margin;
                out.h = h;
                out.j = j;
            }
        }
    }
    out.ok = out.min_margin > 0.0;
    return out;
}

JumpWeights build_jump_weights(const Grid& grid, const ModelParams& mp, double pi, double dtau) {
    JumpWeights jw;
    jw.H = grid.H;
    jw.m = mp.jumps.m;
    jw.w.assign(static_cast<std::size_t>(grid.rows()) * (2 * jw.m + 1), 0.0);
    jw.total.assign(grid.rows(), 0.0);
    for (int h = 1; h <= grid.H - 1; ++h) {
        const double r_h = rate_level(grid, mp, h);
        const double lam = mp.jumps.lambda(pi, r_h);
        double total = 0.0;
        for (int k = jw.k_lo(h); k <= jw.k_hi(h); ++k) {
            if (k == 0) continue;
            const double wk = dtau * lam * mp.jumps.p(pi, r_h, k);
            jw.w[static_cast<std::size_t>(h - 1) * (2 * jw.m + 1) + k + jw.m] = wk;
            total += wk;
        }
        jw.total[h - 1] = total;
    }
    return jw;
}

void ImplicitSystem::factor() {
    const double tiny = 1e-300;
    corner_mult = 0.0;
    diag0_mod = diag[0];
    sup0_mod = sup[0];
    if (corner != 0.0) {
        if (std::abs(sup[1]) < tiny) {
            throw NumericalError(location_msg("pde solver: cannot eliminate the corner entry", h, 1));
        }
        corner_mult = corner / sup[1];
        diag0_mod = diag[0] - corner_mult * sub[1];
        sup0_mod = sup[0] - corner_mult * diag[1];
    }
    cstar.assign(n, 0.0);
    pivot.assign(n, 0.0);
    pivot[0] = diag0_mod;
    if (std::abs(pivot[0]) < tiny) throw NumericalError(location_msg("pde solver: zero pivot", h, 0));
    cstar[0] = sup0_mod / pivot[0];
    for (int i = 1; i < n; ++i) {
        pivot[i] = diag[i] - sub[i] * cstar[i - 1];
        if (std::abs(pivot[i]) < tiny)
            throw NumericalError(location_msg("pde solver: zero pivot", h, i));
        if (i < n - 1) cstar[i] = sup[i] / pivot[i];
    }
}

void ImplicitSystem::solve(const double* rhs, double* x, double* work) const {
    work[0] = (rhs[0] - corner_mult * rhs[1]) / pivot[0];
    for (int i = 1; i < n; ++i) {
        work[i] = (rhs[i] - sub[i] * work[i - 1]) / pivot[i];
    }
    x[n - 1] = work[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        x[i] = work[i] - cstar[i] * x[i + 1];
    }
}

double ImplicitSystem::residual_inf(const double* x, const double* rhs) const {
    double worst = std::abs(diag[0] * x[0] + sup[0] * x[1] + corner * x[2] - rhs[0]);
    for (int i = 1; i < n; ++i) {
        double r = sub[i] * x[i - 1] + diag[i] * x[i] - rhs[i];
        if (i < n - 1) r += sup[i] * x[i + 1];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

ImplicitSystem assemble_row_system(const SchemeCoefficients& c, int h) {
    ImplicitSystem s;
    s.n = c.J;
    s.h = h;
    s.sub.assign(s.n, 0.0);
    s.diag.assign(s.n, 0.0);
    s.sup.assign(s.n, 0.0);
    if (row0_margin(c, h) <= 0.0) {
        throw NumericalError(location_msg("pde solver: diagonal dominance violated", h, 0));
    }
    s.diag[0] = c.diag_at(h, 0);  // 1 + diff0
    s.sup[0] = -4.0 * c.conv_at(h, 0);
    s.corner = c.conv_at(h, 0);
    for (int j = 1; j < c.J; ++j) {
        if (interior_margin(c, h, j) <= 0.0) {
            throw NumericalError(location_msg("pde solver: diagonal dominance violated", h, j));
        }
        s.sub[j] = c.lower_at(h, j);
        s.diag[j] = c.diag_at(h, j);
        if (j < c.J - 1) {
            s.sup[j] = -c.upper_at(h, j);
        } else {
            s.diag[j] -= c.upper_at(h, j);  // Neumann condition absorbed
        }
    }
    return s;
}

namespace {

void fill_explicit_rhs(const Lattice& lattice, const SchemeCoefficients& c,
                       const JumpWeights& jumps, double* out) {
    const int J = c.J;
    for (int h = 1; h <= c.H - 1; ++h) {
        const double* psi = lattice.row(h);
        double* q = out + static_cast<std::size_t>(h - 1) * J;
        const double conv0 = c.conv_at(h, 0);
        q[0] = psi[0] + conv0 * (-psi[2] + 4.0 * psi[1] - 3.0 * psi[0]);
        for (int j = 1; j < J; ++j) {
            const std::size_t i = c.idx(h, j);
            q[j] = psi[j] + c.conv[i] * (psi[j + 1] - psi[j - 1]) +
                   c.diff[i] * (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) - c.disc[i] * psi[j];
        }
        const double total = jumps.total[h - 1];
        if (total != 0.0) {
            for (int j = 0; j < J; ++j) q[j] -= total * psi[j];
        }
        for (int k = jumps.k_lo(h); k <= jumps.k_hi(h); ++k) {
            if (k == 0) continue;
            const double wk = jumps.at(h, k);
            if (wk == 0.0) continue;
            const double* neighbor = lattice.row(h + k);
            for (int j = 0; j < J; ++j) q[j] += wk * neighbor[j];
        }
    }
}

void check_residual(const ImplicitSystem& sys, const double* x, const double* rhs,
                    SolveStats* stats) {
    double scale = 0.0;
    for (int i = 0; i < sys.n; ++i) scale = std::max(scale, std::abs(rhs[i]));
    const double resid = sys.residual_inf(x, rhs);
    if (scale == 0.0) {
        if (resid != 0.0) throw NumericalError(location_msg("pde solver: nonzero residual on zero rhs", sys.h, 0));
        return;
    }
    const double ratio = resid / scale;
    if (stats) stats->max_residual_ratio = std::max(stats->max_residual_ratio, ratio);
    if (ratio > 1e-10) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "pde solver: residual %.3e exceeds 1e-10 * ||rhs|| at row h=%d", ratio, sys.h);
        throw NumericalError(buf);
    }
}

}  // namespace

std::vector<double> build_explicit_rhs(const Lattice& lattice, const SchemeCoefficients& coeffs,
                                       const Grid& grid, const ModelParams& mp, double pi) {
    return build_explicit_rhs(lattice, coeffs, build_jump_weights(grid, mp, pi, coeffs.dtau));
}

std::vector<double> build_explicit_rhs(const Lattice& lattice, const SchemeCoefficients& coeffs,
                                       const JumpWeights& jumps) {
    std::vector<double> out(static_cast<std::size_t>(coeffs.H - 1) * coeffs.J, 0.0);
    fill_explicit_rhs(lattice, coeffs, jumps, out.data());
    return out;
}

IntervalSolver::IntervalSolver(const Grid& grid, const ModelParams& mp, double interval_length)
    : grid_(grid), mp_(mp), coeffs_(build_coefficients(grid, mp, interval_length)) {
    dominance_ = check_dominance(coeffs_);
    systems_.reserve(grid.rows());
    for (int h = 1; h <= grid.H - 1; ++h) {
        systems_.push_back(assemble_row_system(coeffs_, h));
        systems_.back().factor();
    }
}

Lattice IntervalSolver::solve(const Lattice& terminal, double pi, int steps,
                              SolveStats* stats) const {
    if (terminal.H != grid_.H || terminal.J != grid_.J)
        throw ConfigError("IntervalSolver: terminal lattice does not match the grid");
    Lattice cur = terminal;
    cur.pi = pi;
    if (steps == 0) return cur;
    const JumpWeights jumps = build_jump_weights(grid_, mp_, pi, coeffs_.dtau);
    Lattice next(grid_.H, grid_.J, pi);
    std::vector<double> rhs(static_cast<std::size_t>(grid_.rows()) * grid_.J);
    std::vector<double> work(grid_.J);
    if (stats) stats->min_dominance_margin = std::min(stats->min_dominance_margin, dominance_.min_margin);
    for (int n = 0; n < steps; ++n) {
        fill_explicit_rhs(cur, coeffs_, jumps, rhs.data());
        for (int h = 1; h <= grid_.H - 1; ++h) {
            const double* q = rhs.data() + static_cast<std::size_t>(h - 1) * grid_.J;
            double* x = next.row(h);
            systems_[h - 1].solve(q, x, work.data());
            check_residual(systems_[h - 1], x, q, stats);
            x[grid_.J] = x[grid_.J - 1];  // Neumann copy
        }
        std::swap(cur, next);
        if (stats) ++stats->steps;
    }
    return cur;
}

Lattice step(const Lattice& lattice_n, const SchemeCoefficients& coeffs, const Grid& grid,
             const ModelParams& mp, double pi, SolveStats* stats) {
    const JumpWeights jumps = build_jump_weights(grid, mp, pi, coeffs.dtau);
    std::vector<double> rhs = build_explicit_rhs(lattice_n, coeffs, jumps);
    Lattice out(grid.H, grid.J, pi);
    std::vector<double> work(grid.J);
    for (int h = 1; h <= grid.H - 1; ++h) {
        ImplicitSystem sys = assemble_row_system(coeffs, h);
        sys.factor();
        const double* q = rhs.data() + static_cast<std::size_t>(h - 1) * grid.J;
        double* x = out.row(h);
        sys.solve(q, x, work.data());
        check_residual(sys, x, q, stats);
        x[grid.J] = x[grid.J - 1];
    }
    if (stats) {
        ++stats->steps;
        const DominanceCheck dom = check_dominance(coeffs);
        stats->min_dominance_margin = std::min(stats->min_dominance_margin, dom.min_margin);
    }
    return out;
}

Lattice solve_interval(const Lattice& terminal, const Grid& grid, const ModelParams& mp,
                       double pi, SolveStats* stats) {
    if (grid.N == 0) {
        Lattice out = terminal;
        out.pi = pi;
        return out;
    }
    IntervalSolver solver(grid, mp, mp.inflation.theta);
    return solver.solve(terminal, pi, grid.N, stats);
}

}  // namespace ipr
