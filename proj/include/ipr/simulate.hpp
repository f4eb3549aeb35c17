#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ipr/errors.hpp"
#include "ipr/model.hpp"

// Path construction for (Pi, R, R^sh): the policy rate from a thinned
// Poisson clock, the short rate by full-truncation Euler between event
// times, inflation refreshed at the observation dates.

namespace ipr {

struct InitialState {
    double pi{}, r{}, z{};
};

struct Path {
    std::vector<double> jump_times;          // accepted jumps, increasing
    std::vector<double> ecb_levels;          // levels; front = R(0), then one per jump
    std::vector<double> inflation_values;    // Pi at t_i = i*theta, i = 0..M
    std::vector<double> short_rate_samples;  // truncated samples on the uniform dt grid
    double discount_integral{};              // int_0^T R^sh(s) ds in decimal units
    double terminal_r{}, terminal_z{};
};

struct McEstimate {
    double price{};
    double std_error{};
    long n_paths{};
    double dt{};
    std::uint64_t seed{};
};

// Independent per-path stream derived from (seed, path index) by SplitMix64
// whitening, so parallel runs are order-independent.
std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index);

// One trajectory over [0, T]. Preconditions: T a multiple of theta,
// 0 < dt <= theta/10, T a multiple of dt; violations raise ConfigError.
Path simulate_path(const ModelParams& mp, const InitialState& s0, double T, double dt,
                   std::mt19937_64& rng);

// Mean discounted payoff over n_paths trajectories with per-path streams and
// a fixed-tree pairwise reduction: bit-identical for any thread count.
McEstimate mc_price(const ModelParams& mp, const InitialState& s0, const PayoffFn& payoff,
                    double T, double dt, long n_paths, std::uint64_t seed, int threads = 0);

// Numerically robust fixed-tree sum used by the estimator (exposed for tests).
double pairwise_sum(const double* v, std::size_t n);

}  // namespace ipr
