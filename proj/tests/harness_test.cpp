#include "ipr/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipr/cir.hpp"
#include "ipr/csv.hpp"
#include "ipr/simulate.hpp"
#include "test_util.hpp"

using namespace ipr;
using testutil::baseline_params;

namespace {

namespace fs = std::filesystem;

std::string baseline_json(const std::string& extra = "") {
    std::string body = R"({
      "model": {
        "alpha": 0.8, "k_pi": 3.0, "pi_star": 2.0, "beta": 1.2, "v": 0.1,
        "theta": 0.25, "M": 4,
        "lambda": 10.0, "p": "uniform", "lambda_bar": 10.0,
        "delta": 0.25, "m": 4, "r_lo": 0.05, "r_hi": 4.25,
        "k_sh": 2.0, "b0": 0.0, "b1": 1.0, "sigma_bar": 0.23
      },
      "initial": { "pi": 1.52, "r": 2.05, "z": 2.1 },
      "grid": { "z_max": 7.0, "N": 50, "J": 50 },
      "T": 1.0)";
    if (!extra.empty()) body += ",\n" + extra;
    body += "\n}";
    return body;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("ipr_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST(Config, ParsesBaselineFields) {
    const RunConfig cfg = parse_config(baseline_json());
    EXPECT_DOUBLE_EQ(cfg.model.inflation.alpha, 0.8);
    EXPECT_DOUBLE_EQ(cfg.model.inflation.k_pi, 3.0);
    EXPECT_DOUBLE_EQ(cfg.model.jumps.delta, 0.25);
    EXPECT_EQ(cfg.model.jumps.m, 4);
    EXPECT_DOUBLE_EQ(cfg.model.jumps.lambda_bar, 10.0);
    EXPECT_DOUBLE_EQ(cfg.model.short_rate.k_sh, 2.0);
    EXPECT_DOUBLE_EQ(cfg.model.jumps.lambda(1.0, 2.0), 10.0);
    EXPECT_DOUBLE_EQ(cfg.model.short_rate.sigma_bar_sq(5.0), 0.23 * 0.23);
    EXPECT_DOUBLE_EQ(cfg.initial.pi, 1.52);
    EXPECT_EQ(cfg.intervals(), 4);
    EXPECT_EQ(cfg.model.inflation.M, 4);  // derived from T
    // uniform law over admissible multiples at an interior level
    EXPECT_DOUBLE_EQ(cfg.model.jumps.p(1.52, 2.05, 1), 0.125);
    EXPECT_DOUBLE_EQ(cfg.model.jumps.p(1.52, 2.05, 0), 0.0);
}

TEST(Config, MaturityDrivesIntervalCount) {
    RunConfig cfg = parse_config(baseline_json());
    cfg.T = 2.0;
    EXPECT_EQ(cfg.intervals(), 8);
    cfg.T = 0.26;
    EXPECT_THROW(cfg.intervals(), ConfigError);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(parse_config("{"), ConfigError);
    EXPECT_THROW(parse_config("{}"), ConfigError);  // missing model fields
    EXPECT_THROW(parse_config(baseline_json(R"("payoff": {"name": "nope"})")), ConfigError);
    EXPECT_THROW(parse_config(baseline_json(R"("ladder": [30, 30, 50])")), ConfigError);
    EXPECT_THROW(parse_config(baseline_json(R"("ladder": [50, 30])")), ConfigError);
}

TEST(Config, PayoffBuiltins) {
    RunConfig cfg = parse_config(baseline_json(R"("payoff": {"name": "iis", "pi0": 2.0, "notional": 3.0})"));
    EXPECT_DOUBLE_EQ(cfg.make_payoff()(4.0, 0.0, 0.0), 3.0 * (4.0 / 2.0 - 1.0));
    cfg.payoff.name = "bond";
    EXPECT_DOUBLE_EQ(cfg.make_payoff()(4.0, 1.0, 2.0), 1.0);
    cfg.payoff.name = "constant";
    cfg.payoff.value = -2.5;
    EXPECT_DOUBLE_EQ(cfg.make_payoff()(4.0, 1.0, 2.0), -2.5);
}

TEST(RelativeErrors, RestrictionOfFineGridIsExactlyZero) {
    Lattice fine(6, 8);
    for (int h = 1; h <= 5; ++h) {
        for (int j = 0; j <= 8; ++j) fine.at(h, j) = std::sin(h + 0.3 * j) + 2.0;
    }
    Lattice coarse(6, 4);
    for (int h = 1; h <= 5; ++h) {
        for (int j = 0; j <= 4; ++j) coarse.at(h, j) = fine.at(h, 2 * j);
    }
    const ErrorRung rung = relative_errors(coarse, fine);
    EXPECT_EQ(rung.e1, 0.0);
    EXPECT_EQ(rung.einf, 0.0);
    EXPECT_FALSE(rung.degenerate);
}

TEST(RelativeErrors, KnownHandValue) {
    // One row, J = 2: coarse (1, 1, 1) vs fine nodes (0.5, 1, 1, 1, 2).
    Lattice coarse(2, 2), fine(2, 4);
    coarse.at(1, 0) = 1.0;
    coarse.at(1, 1) = 1.0;
    coarse.at(1, 2) = 1.0;
    fine.at(1, 0) = 0.5;
    fine.at(1, 1) = 1.0;
    fine.at(1, 2) = 1.0;
    fine.at(1, 3) = 1.0;
    fine.at(1, 4) = 2.0;
    const ErrorRung rung = relative_errors(coarse, fine);
    // l1: (0.5 + 0 + 1) / (0.5 + 1 + 2) = 3/7; linf: 1 / 2
    EXPECT_NEAR(rung.e1, 1.5 / 3.5, 1e-15);
    EXPECT_NEAR(rung.einf, 0.5, 1e-15);
}

TEST(RelativeErrors, ZeroDenominatorFlagsDegenerate) {
    Lattice coarse(3, 2), fine(3, 4);
    coarse.at(1, 0) = 1.0;
    const ErrorRung rung = relative_errors(coarse, fine);
    EXPECT_TRUE(rung.degenerate);
}

TEST(RelativeErrors, MismatchedShapesRejected) {
    Lattice coarse(3, 4), fine(3, 6);
    EXPECT_THROW(relative_errors(coarse, fine), ConfigError);
}

TEST(ConvergenceOrder, ExactRatios) {
    EXPECT_DOUBLE_EQ(convergence_order(0.02, 0.01), 1.0);
    EXPECT_DOUBLE_EQ(convergence_order(0.04, 0.01), 2.0);
    EXPECT_TRUE(std::isnan(convergence_order(0.0, 0.01)));
    EXPECT_TRUE(std::isnan(convergence_order(0.01, 0.0)));
    // Non-doubling rungs use the actual refinement ratio.
    const double e30 = 0.0117, e50 = 0.0069;
    EXPECT_NEAR(convergence_order(e30, e50, 50.0 / 30.0), 1.034, 5e-3);
}

TEST(CirOracle, UnitPriceAtZeroMaturity) {
    EXPECT_DOUBLE_EQ(cir_bond_price(2.0, 0.02, 0.023, 0.05, 0.0), 1.0);
}

TEST(CirOracle, DegenerateDiffusionMatchesDeterministicDiscount) {
    const double kappa = 2.0, theta = 0.02, z0 = 0.035, tau = 0.25;
    const double integral = theta * tau + (z0 - theta) * (1.0 - std::exp(-kappa * tau)) / kappa;
    EXPECT_NEAR(cir_bond_price(kappa, theta, 0.0, z0, tau), std::exp(-integral), 1e-15);
    // Small sigma converges to the degenerate limit.
    EXPECT_NEAR(cir_bond_price(kappa, theta, 1e-5, z0, tau), std::exp(-integral), 1e-9);
}

TEST(CirOracle, AgreesWithMonteCarlo) {
    ModelParams mp = baseline_params();
    mp.jumps.lambda = constant_intensity(0.0);
    mp.jumps.lambda_bar = 1e-9;
    mp.short_rate.b0 = 2.0;
    mp.short_rate.b1 = 0.0;
    const double z0 = 2.5, T = 0.25;
    const McEstimate est = mc_price(mp, {1.52, 2.05, z0}, [](double, double, double) { return 1.0; },
                                    T, 1e-3, 20000, 4242);
    const double closed = cir_bond_price(2.0, 2.0 / 100.0, 0.23 / 10.0, z0 / 100.0, T);
    EXPECT_NEAR(est.price, closed, 3.0 * est.std_error + 1e-6);
}

TEST(Run, ModeDispatchAndValidationGate) {
    TempDir dir("dispatch");
    RunConfig cfg = parse_config(baseline_json());
    cfg.output_dir = dir.str();
    cfg.model.strictness = Strictness::strict;  // baseline violates the reversion band
    const RunResult res = run(cfg, RunMode::price_mc);
    EXPECT_EQ(res.exit_code, 1);
    EXPECT_NE(res.summary.find("validation"), std::string::npos);
}

TEST(Run, PriceMcWritesCsvRow) {
    TempDir dir("mc");
    RunConfig cfg = parse_config(baseline_json());
    cfg.output_dir = dir.str();
    cfg.mc.n_paths = 2000;
    cfg.mc.dt = 5e-3;
    const RunResult res = run(cfg, RunMode::price_mc);
    EXPECT_EQ(res.exit_code, 0);
    const std::string csv = read_file(dir.str() + "/mc.csv");
    EXPECT_NE(csv.find("price,std_error,n_paths,dt,seed"), std::string::npos);
    EXPECT_NE(csv.find("2000"), std::string::npos);
    EXPECT_GT(res.mc.std_error, 0.0);
}

TEST(Run, CirOracleModeMatchesClosedForm) {
    TempDir dir("cir");
    RunConfig cfg = parse_config(baseline_json());
    cfg.output_dir = dir.str();
    cfg.grid.N = 80;
    cfg.grid.J = 80;
    const RunResult res = run(cfg, RunMode::cir_oracle);
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_LT(res.cir_max_abs_dev_interior, 1e-3);
    EXPECT_TRUE(fs::exists(dir.path / "cir_oracle.csv"));
    EXPECT_TRUE(fs::exists(dir.path / "lattice.csv"));
    const std::string lattice = read_file(dir.str() + "/lattice.csv");
    EXPECT_EQ(lattice.rfind("h,r_h,j,z_j,value", 0), 0u);
}

TEST(Run, PricePdeProducesSurfaceAndPrice) {
    TempDir dir("pde");
    RunConfig cfg = parse_config(baseline_json());
    cfg.output_dir = dir.str();
    cfg.grid.N = 12;
    cfg.grid.J = 12;
    cfg.inflation_grid.points = 51;
    const RunResult res = run(cfg, RunMode::price_pde);
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_TRUE(std::isfinite(res.pde_price));
    const std::string surface = read_file(dir.str() + "/surface.csv");
    EXPECT_EQ(surface.rfind("pi,r,z,value", 0), 0u);
    EXPECT_TRUE(fs::exists(dir.path / "slice.csv"));
    EXPECT_TRUE(fs::exists(dir.path / "summary.txt"));
}

// Identical configurations must give byte-identical artifacts.
TEST(Run, ConvergenceOutputsAreByteIdentical) {
    TempDir dir_a("det_a"), dir_b("det_b");
    RunConfig cfg = parse_config(baseline_json());
    cfg.ladder = {6, 8};
    cfg.profile_rung = 6;
    cfg.inflation_grid.points = 31;
    cfg.T = 0.5;

    cfg.output_dir = dir_a.str();
    const RunResult ra = run(cfg, RunMode::convergence);
    cfg.output_dir = dir_b.str();
    cfg.threads = 2;  // thread count must not change the bytes
    const RunResult rb = run(cfg, RunMode::convergence);
    EXPECT_EQ(ra.exit_code, 0);
    EXPECT_EQ(rb.exit_code, 0);
    for (const char* name : {"errors.csv", "error_profile.csv"}) {
        const std::string a = read_file((dir_a.path / name).string());
        const std::string b = read_file((dir_b.path / name).string());
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, b) << name;
    }
    ASSERT_EQ(ra.errors.rungs.size(), 2u);
    EXPECT_TRUE(ra.errors.rungs[0].has_order);
    EXPECT_FALSE(ra.errors.rungs[1].has_order);
}

TEST(Run, CrossCheckReportsWorstRatio) {
    TempDir dir("cross");
    RunConfig cfg = parse_config(baseline_json());
    cfg.output_dir = dir.str();
    cfg.T = 0.25;
    cfg.grid.N = 60;
    cfg.grid.J = 60;
    cfg.inflation_grid.points = 61;
    cfg.mc.n_paths = 4000;
    cfg.mc.dt = 2e-3;
    cfg.probes = {{2.05, 2.1}};
    const RunResult res = run(cfg, RunMode::cross_check);
    ASSERT_EQ(res.cross_rows.size(), 1u);
    EXPECT_TRUE(std::isfinite(res.cross_worst_se_ratio));
    EXPECT_TRUE(fs::exists(dir.path / "cross_check.csv"));
}

TEST(ParseMode, KnownNamesOnly) {
    EXPECT_EQ(parse_mode("price-pde"), RunMode::price_pde);
    EXPECT_EQ(parse_mode("cir-oracle"), RunMode::cir_oracle);
    EXPECT_THROW(parse_mode("frobnicate"), ConfigError);
}

TEST(FormatDouble, RoundTrips) {
    for (double x : {0.0, 1.0 / 3.0, -2.43233e-5, 1e17}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}
