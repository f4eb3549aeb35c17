#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ipr/model.hpp"
#include "ipr/simulate.hpp"

namespace ipr {

struct GridConfig {
    double z_max{7.0};
    int N{50};
    int J{50};
};

struct InflationGridConfig {
    int points{201};
    std::optional<double> pi_min, pi_max;  // default: coverage heuristic
};

struct PayoffConfig {
    std::string name{"iis"};  // builtins: iis, bond, constant
    double pi0{1.0};
    double notional{1.0};
    double value{0.0};  // for the constant payoff
};

struct McConfig {
    long n_paths{100000};
    double dt{1e-3};
    std::uint64_t seed{42};
};

struct Probe {
    double r{}, z{};
};

struct RunConfig {
    ModelParams model;
    // scalar sources of the model handles, kept for derived configurations
    double lambda_value{};
    double sigma_bar_value{};
    std::string p_kind{"uniform"};

    InitialState initial{};
    GridConfig grid;
    InflationGridConfig inflation_grid;
    PayoffConfig payoff;
    double T{1.0};
    McConfig mc;
    std::vector<int> ladder{30, 50, 70, 100, 150};
    int profile_rung{50};  // rung whose per-row profile goes to error_profile.csv
    std::vector<Probe> probes;
    std::string output_dir{"out"};
    int quad_points{20};
    int threads{0};

    PayoffFn make_payoff() const;  // ConfigError for an unknown builtin
    int intervals() const;         // observation intervals to T (= T/theta)
};

// Parses the JSON configuration file; field names mirror the model symbols
// (alpha, k_pi, pi_star, beta, v, theta, M, lambda, p, lambda_bar, delta, m,
// r_lo, r_hi, k_sh, b0, b1, sigma_bar). Throws ConfigError on any problem.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace ipr
