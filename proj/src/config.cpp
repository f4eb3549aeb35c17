#include "ipr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ipr {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing required field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

PayoffFn RunConfig::make_payoff() const {
    if (payoff.name == "iis") {
        const double pi0 = payoff.pi0;
        const double notional = payoff.notional;
        if (pi0 == 0.0) throw ConfigError("config: iis payoff needs pi0 != 0");
        return [pi0, notional](double pi, double, double) { return notional * (pi / pi0 - 1.0); };
    }
    if (payoff.name == "bond") {
        return [](double, double, double) { return 1.0; };
    }
    if (payoff.name == "constant") {
        const double value = payoff.value;
        return [value](double, double, double) { return value; };
    }
    throw ConfigError("config: unknown payoff builtin '" + payoff.name + "'");
}

int RunConfig::intervals() const {
    const double ratio = T / model.inflation.theta;
    const long m = std::lround(ratio);
    if (m < 1 || std::abs(ratio - m) > 1e-9)
        throw ConfigError("config: T must be a positive multiple of theta");
    return static_cast<int>(m);
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }

    RunConfig cfg;
    const json jm = root.contains("model") ? root.at("model") : json::object();

    InflationParams& infl = cfg.model.inflation;
    infl.alpha = require<double>(jm, "alpha");
    infl.k_pi = require<double>(jm, "k_pi");
    infl.pi_star = require<double>(jm, "pi_star");
    infl.beta = require<double>(jm, "beta");
    infl.v = require<double>(jm, "v");
    infl.theta = require<double>(jm, "theta");
    infl.M = get_or<int>(jm, "M", 1);

    JumpSpec& js = cfg.model.jumps;
    cfg.lambda_value = require<double>(jm, "lambda");
    js.lambda_bar = get_or<double>(jm, "lambda_bar", cfg.lambda_value);
    js.delta = require<double>(jm, "delta");
    js.m = require<int>(jm, "m");
    js.r_lo = require<double>(jm, "r_lo");
    js.r_hi = require<double>(jm, "r_hi");
    cfg.p_kind = get_or<std::string>(jm, "p", "uniform");
    if (cfg.p_kind != "uniform")
        throw ConfigError("config: unsupported jump law '" + cfg.p_kind + "' (builtin: uniform)");
    js.lambda = constant_intensity(cfg.lambda_value);
    js.p = uniform_admissible_jump_probs(js.delta, js.m, js.r_lo, js.r_hi);

    ShortRateParams& sr = cfg.model.short_rate;
    sr.k_sh = require<double>(jm, "k_sh");
    sr.b0 = require<double>(jm, "b0");
    sr.b1 = require<double>(jm, "b1");
    cfg.sigma_bar_value = require<double>(jm, "sigma_bar");
    sr.sigma_bar_sq = constant_sigma_bar_sq(cfg.sigma_bar_value);

    const std::string strictness = get_or<std::string>(jm, "strictness", "lenient");
    if (strictness == "strict") {
        cfg.model.strictness = Strictness::strict;
    } else if (strictness == "lenient") {
        cfg.model.strictness = Strictness::lenient;
    } else {
        throw ConfigError("config: strictness must be 'strict' or 'lenient'");
    }

    if (root.contains("initial")) {
        const json& ji = root.at("initial");
        cfg.initial.pi = require<double>(ji, "pi");
        cfg.initial.r = require<double>(ji, "r");
        cfg.initial.z = require<double>(ji, "z");
    }

    if (root.contains("grid")) {
        const json& jg = root.at("grid");
        cfg.grid.z_max = get_or<double>(jg, "z_max", cfg.grid.z_max);
        cfg.grid.N = get_or<int>(jg, "N", cfg.grid.N);
        cfg.grid.J = get_or<int>(jg, "J", cfg.grid.J);
    }
    if (root.contains("inflation_grid")) {
        const json& jg = root.at("inflation_grid");
        cfg.inflation_grid.points = get_or<int>(jg, "points", cfg.inflation_grid.points);
        if (jg.contains("pi_min")) cfg.inflation_grid.pi_min = jg.at("pi_min").get<double>();
        if (jg.contains("pi_max")) cfg.inflation_grid.pi_max = jg.at("pi_max").get<double>();
    }
    if (root.contains("payoff")) {
        const json& jp = root.at("payoff");
        cfg.payoff.name = get_or<std::string>(jp, "name", cfg.payoff.name);
        cfg.payoff.pi0 = get_or<double>(jp, "pi0", cfg.payoff.pi0);
        cfg.payoff.notional = get_or<double>(jp, "notional", cfg.payoff.notional);
        cfg.payoff.value = get_or<double>(jp, "value", cfg.payoff.value);
    }
    cfg.T = get_or<double>(root, "T", infl.M * infl.theta);
    if (root.contains("mc")) {
        const json& jc = root.at("mc");
        cfg.mc.n_paths = get_or<long>(jc, "n_paths", cfg.mc.n_paths);
        cfg.mc.dt = get_or<double>(jc, "dt", cfg.mc.dt);
        cfg.mc.seed = get_or<std::uint64_t>(jc, "seed", cfg.mc.seed);
    }
    if (root.contains("ladder")) {
        cfg.ladder = root.at("ladder").get<std::vector<int>>();
    }
    cfg.profile_rung = get_or<int>(root, "profile_rung", cfg.ladder.empty() ? 0 : cfg.ladder.front());
    if (root.contains("probes")) {
        cfg.probes.clear();
        for (const auto& jp : root.at("probes")) {
            cfg.probes.push_back({require<double>(jp, "r"), require<double>(jp, "z")});
        }
    }
    cfg.output_dir = get_or<std::string>(root, "output_dir", cfg.output_dir);
    cfg.quad_points = get_or<int>(root, "quad_points", cfg.quad_points);
    cfg.threads = get_or<int>(root, "threads", cfg.threads);

    // Structural invariants of the run configuration.
    for (std::size_t i = 1; i < cfg.ladder.size(); ++i) {
        if (cfg.ladder[i] <= cfg.ladder[i - 1])
            throw ConfigError("config: refinement ladder must be strictly increasing");
    }
    cfg.make_payoff();  // referenced builtin must exist
    (void)cfg.intervals();
    // M follows from the maturity; the model's own M field is advisory input.
    cfg.model.inflation.M = cfg.intervals();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ipr
