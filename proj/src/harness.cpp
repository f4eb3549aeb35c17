#include "ipr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "ipr/cir.hpp"
#include "ipr/csv.hpp"

namespace ipr {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

InflationGrid make_inflation_grid(const RunConfig& cfg) {
    InflationGrid pig = InflationGrid::coverage(cfg.model, cfg.grid.z_max, cfg.inflation_grid.points);
    if (cfg.inflation_grid.pi_min) pig.pi_min = *cfg.inflation_grid.pi_min;
    if (cfg.inflation_grid.pi_max) pig.pi_max = *cfg.inflation_grid.pi_max;
    if (!(pig.pi_min < pig.pi_max)) throw ConfigError("config: inflation grid span is empty");
    return pig;
}

std::vector<Probe> effective_probes(const RunConfig& cfg) {
    if (!cfg.probes.empty()) return cfg.probes;
    return {{1.05, 1.4}, {2.05, 2.1}, {3.05, 3.5}};
}

void mode_price_pde(const RunConfig& cfg, RunResult& res) {
    const Grid grid = Grid::make(cfg.model, cfg.grid.z_max, cfg.grid.N, cfg.grid.J);
    const InflationGrid pig = make_inflation_grid(cfg);
    ChainOptions opt;
    opt.quad_points = cfg.quad_points;
    opt.threads = cfg.threads;
    ChainStats stats;
    const ValueSurface surface = chain(cfg.make_payoff(), pig, grid, cfg.model, opt, &stats);

    bool clamped = false;
    res.pde_price = price_at(surface, cfg.initial.pi, cfg.initial.r, cfg.initial.z, &clamped);

    write_surface_csv(join(cfg.output_dir, "surface.csv"), surface);
    write_lattice_csv(join(cfg.output_dir, "slice.csv"), surface.slice_at(cfg.initial.pi),
                      cfg.model.jumps.r_lo, cfg.model.jumps.delta, grid.z_max);

    std::ostringstream os;
    os << "mode: price-pde\n";
    os << "grid: N=" << grid.N << " J=" << grid.J << " H=" << grid.H << " z_max=" << grid.z_max
       << " pi points=" << pig.points << "\n";
    os << "T=" << format_double(cfg.T) << " intervals=" << cfg.intervals() << "\n";
    os << "price(pi=" << format_double(cfg.initial.pi) << ", r=" << format_double(cfg.initial.r)
       << ", z=" << format_double(cfg.initial.z) << ") = " << format_double(res.pde_price)
       << (clamped ? "  [query clamped to the surface hull]" : "") << "\n";
    os << "max solver residual ratio: " << format_double(stats.solve.max_residual_ratio) << "\n";
    os << "min dominance margin: " << format_double(stats.solve.min_dominance_margin) << "\n";
    res.summary = os.str();
}

void mode_price_mc(const RunConfig& cfg, RunResult& res) {
    res.mc = mc_price(cfg.model, cfg.initial, cfg.make_payoff(), cfg.T, cfg.mc.dt, cfg.mc.n_paths,
                      cfg.mc.seed, cfg.threads);
    write_mc_csv(join(cfg.output_dir, "mc.csv"), res.mc);
    std::ostringstream os;
    os << "mode: price-mc\n";
    os << "price,std_error,n_paths,dt,seed\n";
    os << format_double(res.mc.price) << ',' << format_double(res.mc.std_error) << ','
       << res.mc.n_paths << ',' << format_double(res.mc.dt) << ',' << res.mc.seed << "\n";
    res.summary = os.str();
}

void mode_convergence(const RunConfig& cfg, RunResult& res) {
    if (cfg.ladder.size() < 2) throw ConfigError("convergence: ladder needs at least 2 rungs");
    const InflationGrid pig = make_inflation_grid(cfg);
    ChainOptions opt;
    opt.quad_points = cfg.quad_points;
    opt.threads = cfg.threads;

    // Every rung error compares (N,J) against (2N,2J); cache slices by rung.
    std::vector<int> needed;
    for (int rung : cfg.ladder) {
        needed.push_back(rung);
        needed.push_back(2 * rung);
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    std::map<int, Lattice> slices;
    for (int rung : needed) {
        const Grid grid = Grid::make(cfg.model, cfg.grid.z_max, rung, rung);
        const ValueSurface surface = chain(cfg.make_payoff(), pig, grid, cfg.model, opt);
        slices.emplace(rung, surface.slice_at(cfg.initial.pi));
    }

    for (int rung : cfg.ladder) {
        ErrorRung er = relative_errors(slices.at(rung), slices.at(2 * rung));
        er.N = rung;
        er.J = rung;
        res.errors.rungs.push_back(std::move(er));
    }
    // Orders between consecutive ladder rungs, labeled by the coarser rung
    // and normalized by the actual refinement ratio (log2 form when the
    // rungs double).
    for (std::size_t i = 0; i + 1 < res.errors.rungs.size(); ++i) {
        ErrorRung& cur = res.errors.rungs[i];
        const ErrorRung& next = res.errors.rungs[i + 1];
        const double ratio = double(next.N) / cur.N;
        cur.order1 = convergence_order(cur.e1, next.e1, ratio);
        cur.orderinf = convergence_order(cur.einf, next.einf, ratio);
        cur.has_order = std::isfinite(cur.order1) || std::isfinite(cur.orderinf);
    }

    write_errors_csv(join(cfg.output_dir, "errors.csv"), res.errors);
    const int profile = cfg.profile_rung;
    const auto prof_it =
        std::find_if(res.errors.rungs.begin(), res.errors.rungs.end(),
                     [&](const ErrorRung& r) { return r.N == profile; });
    const ErrorRung& prof = prof_it != res.errors.rungs.end() ? *prof_it : res.errors.rungs.front();
    write_profile_csv(join(cfg.output_dir, "error_profile.csv"), prof, cfg.model.jumps.r_lo,
                      cfg.model.jumps.delta);

    std::ostringstream os;
    os << "mode: convergence\n";
    os << "T=" << format_double(cfg.T) << " intervals=" << cfg.intervals()
       << " pi points=" << pig.points << " z_max=" << format_double(cfg.grid.z_max) << "\n";
    os << "rung,e1,order1,einf,orderinf\n";
    for (const ErrorRung& r : res.errors.rungs) {
        os << r.N << 'x' << r.J << ',' << format_double(r.e1) << ','
           << (r.has_order ? format_double(r.order1) : "-") << ',' << format_double(r.einf) << ','
           << (r.has_order ? format_double(r.orderinf) : "-");
        if (r.degenerate) os << ",degenerate";
        os << "\n";
    }
    os << "profile rung: " << prof.N << 'x' << prof.J << "\n";
    res.summary = os.str();
}

void mode_cross_check(const RunConfig& cfg, RunResult& res) {
    const Grid grid = Grid::make(cfg.model, cfg.grid.z_max, cfg.grid.N, cfg.grid.J);
    const InflationGrid pig = make_inflation_grid(cfg);
    ChainOptions opt;
    opt.quad_points = cfg.quad_points;
    opt.threads = cfg.threads;
    const PayoffFn payoff = cfg.make_payoff();
    const ValueSurface surface = chain(payoff, pig, grid, cfg.model, opt);

    const std::vector<Probe> probes = effective_probes(cfg);
    std::ostringstream rows;
    rows << "r,z,pde,mc,std_error,abs_diff,se_ratio\n";
    for (std::size_t i = 0; i < probes.size(); ++i) {
        CrossCheckRow row;
        row.r = probes[i].r;
        row.z = probes[i].z;
        row.pde = price_at(surface, cfg.initial.pi, row.r, row.z);
        const InitialState s0{cfg.initial.pi, row.r, row.z};
        const McEstimate est = mc_price(cfg.model, s0, payoff, cfg.T, cfg.mc.dt, cfg.mc.n_paths,
                                        cfg.mc.seed + i, cfg.threads);
        row.mc = est.price;
        row.std_error = est.std_error;
        row.abs_diff = std::abs(row.pde - row.mc);
        row.se_ratio = row.std_error > 0.0 ? row.abs_diff / row.std_error
                                           : (row.abs_diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        res.cross_worst_se_ratio = std::max(res.cross_worst_se_ratio, row.se_ratio);
        res.cross_rows.push_back(row);
        rows << format_double(row.r) << ',' << format_double(row.z) << ','
             << format_double(row.pde) << ',' << format_double(row.mc) << ','
             << format_double(row.std_error) << ',' << format_double(row.abs_diff) << ','
             << format_double(row.se_ratio) << '\n';
    }
    res.cross_ok = res.cross_worst_se_ratio <= 3.0;
    write_text_file(join(cfg.output_dir, "cross_check.csv"), rows.str());

    std::ostringstream os;
    os << "mode: cross-check\n";
    os << "pde grid: N=" << grid.N << " J=" << grid.J << "; mc: n_paths=" << cfg.mc.n_paths
       << " dt=" << format_double(cfg.mc.dt) << " seed=" << cfg.mc.seed << "\n";
    os << rows.str();
    os << "worst |pde-mc|/std_error = " << format_double(res.cross_worst_se_ratio)
       << (res.cross_ok ? " (within 3 standard errors)\n" : " (EXCEEDS 3 standard errors)\n");
    res.summary = os.str();
    if (!res.cross_ok) res.exit_code = 2;
}

void mode_cir_oracle(const RunConfig& cfg, RunResult& res) {
    // Jump intensity off, unit payoff, one observation interval: each
    // policy-rate row reduces to a square-root bond problem with frozen
    // reversion level b(r_h).
    RunConfig local = cfg;
    local.model.jumps.lambda = constant_intensity(0.0);
    const Grid grid = Grid::make(local.model, local.grid.z_max, local.grid.N, local.grid.J);
    Lattice terminal(grid.H, grid.J, cfg.initial.pi);
    for (double& v : terminal.values) v = 1.0;
    SolveStats stats;
    const Lattice lattice = solve_interval(terminal, grid, local.model, cfg.initial.pi, &stats);

    const double theta_len = cfg.model.inflation.theta;
    std::ostringstream rows;
    rows << "h,r_h,j,z_j,pde,closed_form,abs_dev\n";
    double max_dev_interior = 0.0;
    for (int h = 1; h <= grid.H - 1; ++h) {
        const double r_h = rate_level(grid, local.model, h);
        // Percent model -> decimal bond problem: level and state divide by
        // 100, the diffusion scale by 10.
        const double kappa = cfg.model.short_rate.k_sh;
        const double mean_level = reversion_level(r_h, cfg.model.short_rate) / 100.0;
        const double sigma = cfg.sigma_bar_value / 10.0;
        for (int j = 0; j <= grid.J; ++j) {
            const double z_j = j * grid.dz();
            const double closed = cir_bond_price(kappa, mean_level, sigma, z_j / 100.0, theta_len);
            const double dev = std::abs(lattice.at(h, j) - closed);
            if (j >= 1 && j <= grid.J - 1) max_dev_interior = std::max(max_dev_interior, dev);
            rows << h << ',' << format_double(r_h) << ',' << j << ',' << format_double(z_j) << ','
                 << format_double(lattice.at(h, j)) << ',' << format_double(closed) << ','
                 << format_double(dev) << '\n';
        }
    }
    res.cir_max_abs_dev_interior = max_dev_interior;
    write_text_file(join(cfg.output_dir, "cir_oracle.csv"), rows.str());
    write_lattice_csv(join(cfg.output_dir, "lattice.csv"), lattice, local.model.jumps.r_lo,
                      local.model.jumps.delta, grid.z_max);

    std::ostringstream os;
    os << "mode: cir-oracle\n";
    os << "grid: N=" << grid.N << " J=" << grid.J << " H=" << grid.H << "\n";
    os << "max |pde - closed_form| over interior z nodes = " << format_double(max_dev_interior)
       << "\n";
    res.summary = os.str();
}

}  // namespace

RunMode parse_mode(const std::string& name) {
    if (name == "price-pde") return RunMode::price_pde;
    if (name == "price-mc") return RunMode::price_mc;
    if (name == "convergence") return RunMode::convergence;
    if (name == "cross-check") return RunMode::cross_check;
    if (name == "cir-oracle") return RunMode::cir_oracle;
    throw ConfigError("unknown mode '" + name + "'");
}

RunResult run(const RunConfig& cfg_in, RunMode mode) {
    RunResult res;
    RunConfig cfg = cfg_in;
    cfg.model.inflation.M = cfg.intervals();  // maturity drives the interval count

    const ValidationReport report = validate(cfg.model);
    res.validation = report.str();
    if (!report.ok()) {
        res.exit_code = 1;
        res.summary = "model validation failed\n" + res.validation;
        return res;
    }

    fs::create_directories(cfg.output_dir);
    switch (mode) {
        case RunMode::price_pde: mode_price_pde(cfg, res); break;
        case RunMode::price_mc: mode_price_mc(cfg, res); break;
        case RunMode::convergence: mode_convergence(cfg, res); break;
        case RunMode::cross_check: mode_cross_check(cfg, res); break;
        case RunMode::cir_oracle: mode_cir_oracle(cfg, res); break;
    }
    if (!report.clean()) {
        res.summary += "validation warnings:\n" + res.validation;
    }
    write_text_file(join(cfg.output_dir, "summary.txt"), res.summary);
    return res;
}

}  // namespace ipr
