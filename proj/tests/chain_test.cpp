#include "ipr/chain.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "ipr/analysis.hpp"
#include "test_util.hpp"

using namespace ipr;
using testutil::baseline_params;

namespace {

// Brute-force oracle for the Gaussian expectation: trapezoid over
// [mean - 8v, mean + 8v] with a dense grid.
double trapezoid_expectation(const std::function<double(double)>& f, double mean, double v,
                             int points = 100000) {
    const double lo = mean - 8.0 * v, hi = mean + 8.0 * v;
    const double h = (hi - lo) / (points - 1);
    const double norm = 1.0 / (std::sqrt(2.0 * std::acos(-1.0)) * v);
    double acc = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + i * h;
        const double weight = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        acc += weight * f(x) * std::exp(-0.5 * (x - mean) * (x - mean) / (v * v));
    }
    return acc * h * norm;
}

}  // namespace

TEST(GaussHermite, MassAndMoments) {
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    for (int K : {2, 5, 20, 21, 40}) {
        const GaussHermiteRule rule = GaussHermiteRule::make(K);
        double mass = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0;
        for (int i = 0; i < K; ++i) {
            mass += rule.w[i];
            m1 += rule.w[i] * rule.x[i];
            m2 += rule.w[i] * rule.x[i] * rule.x[i];
            m4 += rule.w[i] * std::pow(rule.x[i], 4);
        }
        EXPECT_NEAR(mass, sqrt_pi, 1e-13 * sqrt_pi) << "K=" << K;
        EXPECT_NEAR(m1, 0.0, 1e-13) << "K=" << K;
        EXPECT_NEAR(m2, sqrt_pi / 2.0, 1e-12) << "K=" << K;
        if (K >= 3) EXPECT_NEAR(m4, 0.75 * sqrt_pi, 1e-11) << "K=" << K;
    }
    EXPECT_THROW(GaussHermiteRule::make(1), std::invalid_argument);
}

TEST(Convolution, ExactOnConstant) {
    const ModelParams mp = baseline_params();
    const GaussHermiteRule rule = GaussHermiteRule::make(20);
    const double c = 3.25;
    const double out = convolve_inflation_shock([c](double) { return c; }, 1.52, 2.0, 1.0, mp, rule);
    EXPECT_NEAR(out, c, 1e-13 * std::abs(c));
}

TEST(Convolution, FirstAndSecondMoments) {
    const ModelParams mp = baseline_params();
    const GaussHermiteRule rule = GaussHermiteRule::make(20);
    for (double pi : {-2.0, 1.52, 6.0}) {
        for (double r : {0.55, 2.05}) {
            const double z = 1.3;
            const double mean = next_inflation_mean(pi, r, z, mp.inflation);
            const double first =
                convolve_inflation_shock([](double x) { return x; }, pi, r, z, mp, rule);
            EXPECT_NEAR(first, mean, 1e-12 * (1.0 + std::abs(mean)));
            const double second =
                convolve_inflation_shock([](double x) { return x * x; }, pi, r, z, mp, rule);
            const double v2 = mp.inflation.v * mp.inflation.v;
            EXPECT_NEAR(second, mean * mean + v2, 1e-10);
        }
    }
}

TEST(Convolution, MatchesBruteForceOnSinusoid) {
    const ModelParams mp = baseline_params();
    const GaussHermiteRule rule = GaussHermiteRule::make(20);
    const auto f = [](double x) { return std::sin(1.3 * x) + 0.1 * x; };
    for (double pi : {0.0, 1.52}) {
        const double mean = next_inflation_mean(pi, 2.05, 1.4, mp.inflation);
        const double quad = convolve_inflation_shock(f, pi, 2.05, 1.4, mp, rule);
        const double brute = trapezoid_expectation(f, mean, mp.inflation.v);
        EXPECT_NEAR(quad, brute, 1e-6);
    }
}

TEST(Convolution, LinearAndPositive) {
    const ModelParams mp = baseline_params();
    const GaussHermiteRule rule = GaussHermiteRule::make(20);
    const auto f = [](double x) { return std::cos(x); };
    const auto g = [](double x) { return x * x; };
    const double a = 2.0, b = -0.7;
    const auto combo = [&](double x) { return a * f(x) + b * g(x); };
    const double lhs = convolve_inflation_shock(combo, 1.0, 2.0, 1.0, mp, rule);
    const double rhs = a * convolve_inflation_shock(f, 1.0, 2.0, 1.0, mp, rule) +
                       b * convolve_inflation_shock(g, 1.0, 2.0, 1.0, mp, rule);
    EXPECT_NEAR(lhs, rhs, 1e-12);
    // Positive integrand, positive weights: the expectation stays positive.
    const double pos = convolve_inflation_shock([](double x) { return x * x + 0.1; }, 1.0, 2.0,
                                                1.0, mp, rule);
    EXPECT_GT(pos, 0.0);
}

TEST(Convolution, RejectsTinyRule) {
    const ModelParams mp = baseline_params();
    GaussHermiteRule rule;  // empty
    EXPECT_THROW(convolve_inflation_shock([](double) { return 1.0; }, 1.0, 2.0, 1.0, mp, rule),
                 ConfigError);
}

TEST(InflationGridCoverage, SpansHeuristicInterval) {
    const ModelParams mp = baseline_params();
    const InflationGrid g = InflationGrid::coverage(mp, 7.0, 201);
    // pi_star +- (6v + |beta| (r_hi + z_max)) = 2 +- (0.6 + 1.2 * 11.25)
    EXPECT_NEAR(g.pi_min, 2.0 - 14.1, 1e-12);
    EXPECT_NEAR(g.pi_max, 2.0 + 14.1, 1e-12);
    EXPECT_EQ(g.points, 201);
}

TEST(SurfaceInterp, LinearSliceIsExact) {
    InflationGrid g{-2.0, 2.0, 9};
    std::vector<double> vals(9);
    for (int i = 0; i < 9; ++i) vals[i] = 3.0 * g.value(i) - 1.0;
    // on-grid, between nodes, and extrapolated queries
    for (double pi : {-2.0, -1.3, 0.0, 0.77, 2.0, 3.5, -4.0}) {
        EXPECT_NEAR(interp_pi(g, vals.data(), 1, pi), 3.0 * pi - 1.0, 1e-12);
    }
}

// With payoff, intensity and jump law all independent of inflation, the
// chained M-interval solve must agree with one solve over the whole horizon.
TEST(Chain, ShortcutEquivalenceForPiIndependentData) {
    ModelParams mp = baseline_params();
    mp.inflation.M = 2;
    const Grid grid = Grid::make(mp, 7.0, 16, 16);
    const InflationGrid pig{-5.0, 5.0, 7};
    const PayoffFn bond = [](double, double, double) { return 1.0; };
    ChainOptions opt;
    opt.threads = 1;
    const ValueSurface chained = chain(bond, pig, grid, mp, opt);
    const Lattice direct = solve_single_horizon(bond, grid, mp, 1.52);
    double worst = 0.0;
    for (int ip = 0; ip < pig.points; ++ip) {
        for (int h = 1; h <= grid.H - 1; ++h) {
            for (int j = 0; j <= grid.J; ++j) {
                worst = std::max(worst, std::abs(chained.at(ip, h, j) - direct.at(h, j)));
            }
        }
    }
    EXPECT_LE(worst, 1e-8);
}

// M = 1 with payoff pi: the chained price is one interval solve whose
// terminal is the convolved payoff, i.e. the next-inflation mean.
TEST(Chain, SingleIntervalLinearPayoff) {
    ModelParams mp = baseline_params();
    mp.inflation.M = 1;
    const Grid grid = Grid::make(mp, 7.0, 12, 12);
    const InflationGrid pig{-16.0, 16.0, 41};
    ChainOptions opt;
    opt.threads = 1;
    const ValueSurface surf = chain([](double pi, double, double) { return pi; }, pig, grid, mp, opt);

    const double query_pi = 1.52;
    Lattice terminal(grid.H, grid.J, query_pi);
    for (int h = 1; h <= grid.H - 1; ++h) {
        for (int j = 0; j <= grid.J; ++j) {
            terminal.at(h, j) = next_inflation_mean(query_pi, rate_level(grid, mp, h),
                                                    j * grid.dz(), mp.inflation);
        }
    }
    const Lattice expected = solve_interval(terminal, grid, mp, query_pi);
    const Lattice got = surf.slice_at(query_pi);
    for (int h = 1; h <= grid.H - 1; ++h) {
        for (int j = 0; j <= grid.J; ++j) {
            EXPECT_NEAR(got.at(h, j), expected.at(h, j), 1e-9) << h << "," << j;
        }
    }
}

TEST(Chain, GrowthConstantsRecordedAndFinite) {
    ModelParams mp = baseline_params();
    mp.inflation.M = 2;
    const Grid grid = Grid::make(mp, 7.0, 10, 10);
    const InflationGrid pig = InflationGrid::coverage(mp, 7.0, 41);
    ChainOptions opt;
    ChainStats stats;
    chain([](double pi, double, double) { return pi - 1.0; }, pig, grid, mp, opt, &stats);
    EXPECT_TRUE(std::isfinite(stats.terminal_growth_const));
    EXPECT_TRUE(std::isfinite(stats.final_growth_const));
    EXPECT_GT(stats.terminal_growth_const, 0.0);
    EXPECT_LE(stats.solve.max_residual_ratio, 1e-10);
}

TEST(PriceAt, NodeConstantAndLinearQueries) {
    ValueSurface s;
    s.grid = InflationGrid{0.0, 2.0, 3};
    s.H = 4;
    s.J = 4;
    s.r_lo = 0.05;
    s.delta = 0.25;
    s.z_max = 2.0;
    s.values.assign(3 * s.slice_size(), 0.0);
    // value = 10*pi + z (linear in both interpolated directions)
    for (int ip = 0; ip < 3; ++ip) {
        for (int h = 1; h <= 3; ++h) {
            for (int j = 0; j <= 4; ++j) {
                s.at(ip, h, j) = 10.0 * s.grid.value(ip) + j * 0.5;
            }
        }
    }
    bool clamped = false;
    EXPECT_DOUBLE_EQ(price_at(s, 1.0, 0.30, 1.0, &clamped), 11.0);
    EXPECT_FALSE(clamped);
    EXPECT_NEAR(price_at(s, 0.77, 0.55, 1.3, &clamped), 7.7 + 1.3, 1e-12);
    EXPECT_FALSE(clamped);
    // r snaps to the nearest delta multiple
    EXPECT_NEAR(price_at(s, 1.0, 0.62, 1.0, &clamped), 11.0, 1e-12);
    // out-of-hull queries clamp and report it
    price_at(s, 5.0, 0.30, 1.0, &clamped);
    EXPECT_TRUE(clamped);
    price_at(s, 1.0, 0.30, 9.0, &clamped);
    EXPECT_TRUE(clamped);
    price_at(s, 1.0, 8.00, 1.0, &clamped);
    EXPECT_TRUE(clamped);
}

// Doubling the inflation-grid density moves the baseline price by less than
// the self-convergence error at the same resolution.
TEST(Chain, PiGridRefinementStaysWithinSchemeError) {
    const ModelParams mp = baseline_params();  // M = 4 from the fixture
    const PayoffFn iis = [](double pi, double, double) { return pi - 1.0; };
    const Grid coarse = Grid::make(mp, 7.0, 30, 30);
    const Grid fine = Grid::make(mp, 7.0, 60, 60);
    ChainOptions opt;
    const InflationGrid pig101 = InflationGrid::coverage(mp, 7.0, 101);
    const InflationGrid pig201 = InflationGrid::coverage(mp, 7.0, 201);
    const ValueSurface s101 = chain(iis, pig101, coarse, mp, opt);
    const ValueSurface s201 = chain(iis, pig201, coarse, mp, opt);
    const ValueSurface f101 = chain(iis, pig101, fine, mp, opt);
    const ErrorRung rung = relative_errors(s101, f101, 1.52);
    const double p_coarse = price_at(s101, 1.52, 2.05, 2.1);
    const double p_dense = price_at(s201, 1.52, 2.05, 2.1);
    EXPECT_LE(std::abs(p_dense - p_coarse), rung.e1 * std::abs(p_coarse));
}
