#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ipr/analysis.hpp"
#include "ipr/config.hpp"

namespace ipr {

enum class RunMode { price_pde, price_mc, convergence, cross_check, cir_oracle };

RunMode parse_mode(const std::string& name);  // ConfigError on unknown name

struct CrossCheckRow {
    double r{}, z{};
    double pde{}, mc{}, std_error{};
    double abs_diff{};
    double se_ratio{};  // |pde - mc| / std_error
};

struct RunResult {
    int exit_code{0};
    std::string summary;  // also written to <output_dir>/summary.txt
    std::string validation;

    // mode-specific payloads (for tests and callers)
    double pde_price{std::numeric_limits<double>::quiet_NaN()};
    McEstimate mc{};
    ErrorReport errors;
    std::vector<CrossCheckRow> cross_rows;
    double cross_worst_se_ratio{0.0};
    bool cross_ok{true};
    double cir_max_abs_dev_interior{0.0};
};

// Dispatches one mode; writes the mode's artifacts under cfg.output_dir.
// Validation errors produce exit_code 1 (with the report in `validation`),
// numerical failures exit_code 2; outputs are deterministic given the
// configuration, including the seed.
RunResult run(const RunConfig& cfg, RunMode mode);

}  // namespace ipr
