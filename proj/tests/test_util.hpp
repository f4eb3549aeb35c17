#pragma once

#include "ipr/model.hpp"

// Shared fixtures for the test suites: the baseline parameter set used by
// the reference experiments (constant intensity 10, uniform jump law over
// the admissible multiples, constant diffusion scale 0.23).

namespace ipr::testutil {

inline ModelParams baseline_params() {
    ModelParams mp;
    mp.inflation.alpha = 0.8;
    mp.inflation.k_pi = 3.0;
    mp.inflation.pi_star = 2.0;
    mp.inflation.beta = 1.2;
    mp.inflation.v = 0.1;
    mp.inflation.theta = 0.25;
    mp.inflation.M = 4;
    mp.jumps.lambda = constant_intensity(10.0);
    mp.jumps.lambda_bar = 10.0;
    mp.jumps.delta = 0.25;
    mp.jumps.m = 4;
    mp.jumps.r_lo = 0.05;
    mp.jumps.r_hi = 4.25;
    mp.jumps.p = uniform_admissible_jump_probs(0.25, 4, 0.05, 4.25);
    mp.short_rate.k_sh = 2.0;
    mp.short_rate.b0 = 0.0;
    mp.short_rate.b1 = 1.0;
    mp.short_rate.sigma_bar_sq = constant_sigma_bar_sq(0.23);
    mp.strictness = Strictness::lenient;
    return mp;
}

// Variant with no jumps, no diffusion and a constant reversion level: the
// short rate then follows the deterministic path b0 + (z0-b0)e^{-k t}.
inline ModelParams deterministic_params(double b0 = 2.0) {
    ModelParams mp = baseline_params();
    mp.jumps.lambda = constant_intensity(0.0);
    mp.jumps.lambda_bar = 1e-9;  // no arrivals, so no event cuts in the Euler grid
    mp.short_rate.b0 = b0;
    mp.short_rate.b1 = 0.0;
    mp.short_rate.sigma_bar_sq = constant_sigma_bar_sq(0.0);
    return mp;
}

}  // namespace ipr::testutil
