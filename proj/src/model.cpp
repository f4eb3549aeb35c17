#include "ipr/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ipr {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

}  // namespace

bool ValidationReport::ok() const { return error_count() == 0; }

bool ValidationReport::clean() const { return violations.empty(); }

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(),
        [](const Violation& v) { return v.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const {
    return violations.size() - error_count();
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << (v.severity == Severity::error ? "error: " : "warning: ") << v.what << '\n';
    }
    return os.str();
}

double next_inflation_mean(double pi, double r, double z, const InflationParams& p) {
    return p.alpha * pi + p.k_pi * (p.pi_star - pi) + p.beta * (r - z);
}

double reversion_level(double r, const ShortRateParams& p) { return p.b0 + p.b1 * r; }

std::vector<double> thinned_jump_probs(double pi, double r, const ModelParams& mp) {
    const JumpSpec& js = mp.jumps;
    if (!(r > js.r_lo && r < js.r_hi)) {
        throw std::domain_error(fmt("thinned_jump_probs: r=%g outside (%g, %g)", r, js.r_lo, js.r_hi));
    }
    const double accept = js.lambda(pi, r) / js.lambda_bar;
    std::vector<double> q(2 * js.m + 1, 0.0);
    for (int k = -js.m; k <= js.m; ++k) {
        q[k + js.m] = (k == 0) ? 1.0 - accept : js.p(pi, r, k) * accept;
    }
    return q;
}

double jump_from_uniform(double pi, double r, double u, const ModelParams& mp) {
    const std::vector<double> q = thinned_jump_probs(pi, r, mp);
    const int m = mp.jumps.m;
    double cum = 0.0;
    for (int k = -m; k <= m; ++k) {
        const double qk = q[k + m];
        if (qk <= 0.0) continue;  // empty sub-interval never selects its k
        const double lo = cum;
        cum += qk;
        const bool hit = (k == -m) ? (u >= 0.0 && u <= cum) : (u > lo && u <= cum);
        if (hit) return k * mp.jumps.delta;
    }
    return 0.0;
}

IntensityFn constant_intensity(double value) {
    return [value](double, double) { return value; };
}

JumpProbFn uniform_admissible_jump_probs(double delta, int m, double r_lo, double r_hi) {
    return [=](double, double r, int k) -> double {
        if (k == 0) return 0.0;
        const auto admissible = [&](int kk) {
            const double dest = r + kk * delta;
            return dest > r_lo && dest < r_hi;
        };
        if (!admissible(k)) return 0.0;
        int count = 0;
        for (int kk = -m; kk <= m; ++kk) {
            if (kk != 0 && admissible(kk)) ++count;
        }
        return 1.0 / count;
    };
}

VarianceFn constant_sigma_bar_sq(double sigma_bar) {
    const double s2 = sigma_bar * sigma_bar;
    return [s2](double) { return s2; };
}

namespace {

// Sampling ranges for the function-handle scans. The handles are arbitrary
// user code, so the conditions on them can only be checked on a grid.
constexpr int kScanPoints = 41;
constexpr double kPiScanHalfWidth = 25.0;

void scan_jump_handles(const ModelParams& mp, ValidationReport& rep) {
    const JumpSpec& js = mp.jumps;
    const double pi0 = mp.inflation.pi_star;
    const double span = js.r_hi - js.r_lo;
    double sup_lambda = 0.0;
    bool lambda_negative = false;
    bool p_negative = false;
    bool p_outside_bounds = false;
    double worst_sum_dev = 0.0;
    for (int i = 0; i < kScanPoints; ++i) {
        const double pi = pi0 - kPiScanHalfWidth + 2.0 * kPiScanHalfWidth * i / (kScanPoints - 1);
        for (int j = 1; j < kScanPoints; ++j) {
            const double r = js.r_lo + span * j / kScanPoints;
            const double lam = js.lambda(pi, r);
            if (lam < 0.0) lambda_negative = true;
            sup_lambda = std::max(sup_lambda, lam);
            double sum = 0.0;
            for (int k = -js.m; k <= js.m; ++k) {
                if (k == 0) continue;
                const double pk = js.p(pi, r, k);
                if (pk < 0.0) p_negative = true;
                const double dest = r + k * js.delta;
                if (!(dest > js.r_lo && dest < js.r_hi) && pk != 0.0) p_outside_bounds = true;
                sum += pk;
            }
            worst_sum_dev = std::max(worst_sum_dev, std::abs(sum - 1.0));
        }
    }
    if (lambda_negative) rep.violations.push_back({Severity::error, "lambda(pi, r) < 0 at a sampled point"});
    if (p_negative) rep.violations.push_back({Severity::error, "p(pi, r, k) < 0 at a sampled point"});
    if (p_outside_bounds) {
        rep.violations.push_back(
            {Severity::error, "p(pi, r, k) != 0 for a destination r + k*delta outside (r_lo, r_hi)"});
    }
    if (worst_sum_dev > 1e-12) {
        rep.violations.push_back(
            {Severity::error,
             fmt("jump probabilities do not sum to 1 over admissible k (worst deviation %.3e)", worst_sum_dev)});
    }
    if (js.lambda_bar < sup_lambda) {
        rep.violations.push_back(
            {Severity::error,
             fmt("lambda_bar=%g below sup lambda=%g on the sampled grid", js.lambda_bar, sup_lambda)});
    }
}

void scan_sigma_bar(const ModelParams& mp, ValidationReport& rep) {
    const VarianceFn& s2 = mp.short_rate.sigma_bar_sq;
    const double q_max = 400.0;  // covers |r - z|^2 for any grid used here
    bool negative = false;
    double ratio_peak = 0.0, ratio_tail = 0.0;
    for (int i = 0; i <= kScanPoints; ++i) {
        const double q = q_max * i / kScanPoints;
        const double val = s2(q);
        if (val < 0.0) negative = true;
        const double ratio = val / (1.0 + std::sqrt(q));
        ratio_peak = std::max(ratio_peak, ratio);
        if (i == kScanPoints) ratio_tail = val / (1.0 + std::sqrt(q));
    }
    if (negative) rep.violations.push_back({Severity::error, "sigma_bar_sq(q) < 0 at a sampled point"});
    // Sublinear growth check sigma_bar_sq(q) <= sigma1*(1 + sqrt(q)): on a
    // finite sample a constant always exists, so only flag a ratio that is
    // still climbing at the far end of the scan.
    const double ratio_mid = s2(q_max / 4.0) / (1.0 + std::sqrt(q_max / 4.0));
    if (!negative && ratio_tail > 2.0 * std::max(ratio_mid, 1e-300)) {
        rep.violations.push_back(
            {Severity::warning, "sigma_bar_sq growth looks faster than sublinear on the sampled range"});
    }
}

}  // namespace

ValidationReport validate(const ModelParams& mp) {
    ValidationReport rep;
    const bool strict = mp.strictness == Strictness::strict;
    const Severity soft = strict ? Severity::error : Severity::warning;
    const InflationParams& infl = mp.inflation;
    const JumpSpec& js = mp.jumps;
    const ShortRateParams& sr = mp.short_rate;

    if (!(infl.v > 0.0)) rep.violations.push_back({Severity::error, fmt("v = %g must be > 0", infl.v)});
    if (!(infl.theta > 0.0))
        rep.violations.push_back({Severity::error, fmt("theta = %g must be > 0", infl.theta)});
    if (infl.M < 1) rep.violations.push_back({Severity::error, "M must be >= 1"});
    if (infl.k_pi < 0.0) rep.violations.push_back({Severity::error, fmt("k_pi = %g must be >= 0", infl.k_pi)});
    const double a_minus_k = infl.alpha - infl.k_pi;
    if (!(a_minus_k > 0.0 && a_minus_k < 1.0)) {
        rep.violations.push_back(
            {soft, fmt("alpha - k_pi = %g outside (0, 1); inflation updates are not mean-reverting", a_minus_k)});
    }

    if (!(js.r_lo < js.r_hi))
        rep.violations.push_back({Severity::error, fmt("r_lo = %g must be < r_hi = %g", js.r_lo, js.r_hi)});
    if (!(js.delta > 0.0)) rep.violations.push_back({Severity::error, fmt("delta = %g must be > 0", js.delta)});
    if (js.m < 1) rep.violations.push_back({Severity::error, "m must be >= 1"});
    if (!(js.lambda_bar > 0.0))
        rep.violations.push_back({Severity::error, fmt("lambda_bar = %g must be > 0", js.lambda_bar)});

    if (!(sr.k_sh > 0.0)) rep.violations.push_back({Severity::error, fmt("k_sh = %g must be > 0", sr.k_sh)});

    const bool handles_ok = js.lambda && js.p && sr.sigma_bar_sq;
    if (!handles_ok) {
        rep.violations.push_back({Severity::error, "lambda, p and sigma_bar_sq handles must all be set"});
    }

    if (js.r_lo < js.r_hi) {
        const double inf_b =
            std::min(reversion_level(js.r_lo, sr), reversion_level(js.r_hi, sr));
        if (!(inf_b > 0.0)) {
            rep.violations.push_back(
                {Severity::error, fmt("inf b(r) = %g over (r_lo, r_hi) must be > 0", inf_b)});
        } else if (handles_ok) {
            const double s2_at_span = sr.sigma_bar_sq(js.r_hi - std::min(js.r_lo, 0.0));
            if (sr.k_sh * inf_b < 0.5 * s2_at_span) {
                rep.violations.push_back(
                    {soft, fmt("Feller-type condition fails: k_sh*inf b = %g < 0.5*sigma_bar_sq = %g",
                               sr.k_sh * inf_b, 0.5 * s2_at_span)});
            }
        }
    }

    if (handles_ok && js.r_lo < js.r_hi && js.lambda_bar > 0.0 && js.m >= 1 && js.delta > 0.0) {
        scan_jump_handles(mp, rep);
        scan_sigma_bar(mp, rep);
    }
    return rep;
}

}  // namespace ipr
