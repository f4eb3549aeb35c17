#include "ipr/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ipr/parallel.hpp"

namespace ipr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct PathTerminal {
    double pi{}, r{}, z{};
    double discount_integral{};
};

// Core event loop shared by the recording and the estimation entry points.
// Events inside a grid cell cut the Euler step; on an exact tie a jump is
// applied before the inflation observation.
template <bool Record>
PathTerminal run_path(const ModelParams& mp, const InitialState& s0, double T, double dt,
                      std::mt19937_64& rng, Path* out) {
    const InflationParams& infl = mp.inflation;
    if (!(dt > 0.0)) throw ConfigError("simulate_path: dt must be > 0");
    if (dt > infl.theta / 10.0 + 1e-12) throw ConfigError("simulate_path: need dt <= theta/10");
    const double obs_count = T / infl.theta;
    const long n_obs = std::lround(obs_count);
    if (n_obs < 1 || std::abs(obs_count - n_obs) > 1e-9)
        throw ConfigError("simulate_path: T must be a positive multiple of theta");
    const double step_count = T / dt;
    const long n_steps = std::lround(step_count);
    if (std::abs(step_count - n_steps) > 1e-6)
        throw ConfigError("simulate_path: T must be a multiple of dt");
    if (!(mp.jumps.lambda_bar > 0.0))
        throw ConfigError("simulate_path: lambda_bar must be > 0");

    std::exponential_distribution<double> exp_wait(mp.jumps.lambda_bar);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    double t = 0.0;
    double r = s0.r;
    double y = s0.z;  // auxiliary short-rate state; samples are max(y, 0)
    double pi = s0.pi;
    double discount = 0.0;

    if constexpr (Record) {
        out->jump_times.clear();
        out->ecb_levels.assign(1, r);
        out->inflation_values.assign(1, pi);
        out->short_rate_samples.assign(1, std::max(y, 0.0));
        out->short_rate_samples.reserve(n_steps + 1);
    }

    const double k_sh = mp.short_rate.k_sh;
    auto advance = [&](double h) {
        if (h <= 0.0) return;
        const double y_plus = std::max(y, 0.0);
        const double drift = k_sh * (reversion_level(r, mp.short_rate) - y_plus);
        const double spread = r - y_plus;
        const double vol =
            std::sqrt(mp.short_rate.sigma_bar_sq(spread * spread)) * std::sqrt(y_plus);
        const double y_next = y + drift * h + vol * std::sqrt(h) * normal(rng);
        // Trapezoid on the truncated samples; the /100 converts the percent
        // rate to a decimal discount rate (the only conversion in the
        // simulator).
        discount += 0.5 * (y_plus + std::max(y_next, 0.0)) * h / 100.0;
        y = y_next;
    };

    double next_jump = exp_wait(rng);
    long grid_i = 1;
    long obs_i = 1;
    while (grid_i <= n_steps) {
        const double t_grid = grid_i * dt;
        const double t_obs =
            (obs_i <= n_obs) ? obs_i * infl.theta : std::numeric_limits<double>::infinity();
        const double target = std::min({t_grid, t_obs, next_jump});
        advance(target - t);
        t = target;
        if (next_jump <= t_grid && next_jump <= t_obs) {
            const double u = unif(rng);
            const double jump = jump_from_uniform(pi, r, u, mp);
            if (jump != 0.0) {
                r += jump;
                if constexpr (Record) {
                    out->jump_times.push_back(t);
                    out->ecb_levels.push_back(r);
                }
            }
            next_jump = t + exp_wait(rng);
            continue;
        }
        if (t_obs <= t_grid) {
            pi = next_inflation_mean(pi, r, std::max(y, 0.0), infl) + infl.v * normal(rng);
            if constexpr (Record) out->inflation_values.push_back(pi);
            ++obs_i;
            continue;
        }
        if constexpr (Record) out->short_rate_samples.push_back(std::max(y, 0.0));
        ++grid_i;
    }

    PathTerminal res;
    res.pi = pi;
    res.r = r;
    res.z = std::max(y, 0.0);
    res.discount_integral = discount;
    if constexpr (Record) {
        out->discount_integral = discount;
        out->terminal_r = r;
        out->terminal_z = res.z;
    }
    return res;
}

}  // namespace

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index) {
    std::uint64_t state = seed + 0x9E3779B97F4A7C15ull * (path_index + 1);
    const std::uint64_t a = splitmix64(state);
    const std::uint64_t b = splitmix64(state);
    const std::uint64_t c = splitmix64(state);
    const std::uint64_t d = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    return std::mt19937_64(seq);
}

Path simulate_path(const ModelParams& mp, const InitialState& s0, double T, double dt,
                   std::mt19937_64& rng) {
    Path path;
    run_path<true>(mp, s0, T, dt, rng, &path);
    return path;
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

McEstimate mc_price(const ModelParams& mp, const InitialState& s0, const PayoffFn& payoff,
                    double T, double dt, long n_paths, std::uint64_t seed, int threads) {
    if (n_paths < 1) throw ConfigError("mc_price: n_paths must be >= 1");
    std::vector<double> discounted(n_paths);
    const int workers = resolve_threads(threads);
    const long chunk = std::max<long>(1, n_paths / (workers * 8) + 1);
    const int n_chunks = static_cast<int>((n_paths + chunk - 1) / chunk);
    parallel_for(n_chunks, workers, [&](int ci) {
        const long lo = ci * chunk;
        const long hi = std::min(n_paths, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            std::mt19937_64 rng = path_stream(seed, static_cast<std::uint64_t>(i));
            const PathTerminal end = run_path<false>(mp, s0, T, dt, rng, nullptr);
            discounted[i] =
                std::exp(-end.discount_integral) * payoff(end.pi, end.r, end.z);
        }
    });
    McEstimate est;
    est.n_paths = n_paths;
    est.dt = dt;
    est.seed = seed;
    est.price = pairwise_sum(discounted.data(), discounted.size()) / n_paths;
    if (n_paths > 1) {
        std::vector<double> sq(n_paths);
        for (long i = 0; i < n_paths; ++i) {
            const double d = discounted[i] - est.price;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq.data(), sq.size()) / (n_paths - 1);
        est.std_error = std::sqrt(var / n_paths);
    }
    return est;
}

}  // namespace ipr
