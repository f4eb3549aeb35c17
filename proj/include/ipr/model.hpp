#pragma once

#include <functional>
#include <string>
#include <vector>

// Model core: parameters of the three-factor model (inflation, policy rate,
// short rate) and the closed-form maps shared by the Monte Carlo simulator
// and the PDE solver.
//
// Unit convention: every rate-like quantity (pi, r, z, delta, r_lo, r_hi,
// b0, b(r), z_max) is stored in percent. Discounting converts percent to
// decimal exactly once, at the discount-accumulation sites (see
// build_coefficients in pde.cpp and the integral update in simulate.cpp).

namespace ipr {

using IntensityFn = std::function<double(double pi, double r)>;
using JumpProbFn = std::function<double(double pi, double r, int k)>;
using VarianceFn = std::function<double(double q)>;
using PayoffFn = std::function<double(double pi, double r, double z)>;

struct InflationParams {
    double alpha{};    // weight of the previous inflation value
    double k_pi{};     // pull towards the target pi_star, >= 0
    double pi_star{};  // inflation target level
    double beta{};     // loading on the policy/short rate spread
    double v{};        // std dev of the observation shock, > 0
    double theta{};    // observation spacing in years, > 0
    int M{};           // number of observation intervals to maturity, >= 1
};

// Policy-rate jump process: intensity lambda(pi, r), jump-size law
// p(pi, r, k) over k in {-m,...,-1,1,...,m} (sizes k*delta), thinned
// against the dominating intensity lambda_bar.
struct JumpSpec {
    IntensityFn lambda;     // (pi, r) -> jumps per year, >= 0
    JumpProbFn p;           // (pi, r, k) -> probability of a jump k*delta
    double lambda_bar{};    // dominating intensity, >= sup lambda
    double delta{};         // jump unit
    int m{};                // maximum jump multiple
    double r_lo{}, r_hi{};  // open bounds confining the policy rate
};

struct ShortRateParams {
    double k_sh{};  // mean-reversion speed per year, > 0
    double b0{}, b1{};
    VarianceFn sigma_bar_sq;  // q = |r - z|^2 -> squared diffusion scale
};

enum class Strictness { strict, lenient };

struct ModelParams {
    InflationParams inflation;
    JumpSpec jumps;
    ShortRateParams short_rate;
    Strictness strictness{Strictness::lenient};
};

enum class Severity { warning, error };

struct Violation {
    Severity severity{};
    std::string what;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const;     // true when no errors (warnings allowed)
    bool clean() const;  // true when neither errors nor warnings
    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::string str() const;
};

// Checks every parameter condition. In lenient mode the inflation
// mean-reversion condition 0 < alpha - k_pi < 1 and the Feller-type
// condition downgrade to warnings; everything else is always an error.
// Pure: never throws, never mutates.
ValidationReport validate(const ModelParams& params);

// Conditional mean of the next inflation observation:
// alpha*pi + k_pi*(pi_star - pi) + beta*(r - z).
double next_inflation_mean(double pi, double r, double z, const InflationParams& p);

// Mean-reversion level of the short rate, b(r) = b0 + b1*r.
double reversion_level(double r, const ShortRateParams& p);

// Thinned jump probabilities: vector of size 2m+1 indexed k+m with
// q(k) = p(pi,r,k)*lambda(pi,r)/lambda_bar for k != 0 and
// q(0) = 1 - lambda(pi,r)/lambda_bar. Throws std::domain_error when
// r is outside (r_lo, r_hi).
std::vector<double> thinned_jump_probs(double pi, double r, const ModelParams& mp);

// Inverse-CDF lookup of the thinned jump law: maps a uniform u in [0,1]
// to a jump size k*delta (0 means a rejected arrival). The first interval
// [0, q(-m)] is closed on the left, all others are left-open.
double jump_from_uniform(double pi, double r, double u, const ModelParams& mp);

// Builders for the function handles used by the built-in configurations.
IntensityFn constant_intensity(double value);
// Uniform law over the admissible nonzero multiples {k != 0 : r + k*delta
// in (r_lo, r_hi)}; zero outside the bounds, renormalized so the admissible
// probabilities sum to one.
JumpProbFn uniform_admissible_jump_probs(double delta, int m, double r_lo, double r_hi);
VarianceFn constant_sigma_bar_sq(double sigma_bar);

}  // namespace ipr
