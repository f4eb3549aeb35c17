#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipr/harness.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    double maturity = -1.0;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--maturity", args.maturity, "maturity override in years");
    cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
}

int run_mode(const CommonArgs& args, ipr::RunMode mode,
             const std::function<void(ipr::RunConfig&)>& tweak) {
    ipr::RunConfig cfg = ipr::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.maturity > 0.0) cfg.T = args.maturity;
    if (args.threads >= 0) cfg.threads = args.threads;
    if (tweak) tweak(cfg);

    const auto start = std::chrono::steady_clock::now();
    const ipr::RunResult res = ipr::run(cfg, mode);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!res.validation.empty()) std::cerr << res.validation;
    std::cout << res.summary;
    std::fprintf(stderr, "elapsed: %.2fs\n", secs);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pricing engine for claims on inflation, the policy rate and the short rate"};
    app.require_subcommand(1);

    CommonArgs pde_args, mc_args, conv_args, cross_args, cir_args;
    long mc_paths = -1;
    long long mc_seed = -1;
    std::vector<int> ladder;

    add_common(app.add_subcommand("price-pde", "price by the chained PDE solver"), pde_args);
    CLI::App* mc = app.add_subcommand("price-mc", "price by Monte Carlo simulation");
    add_common(mc, mc_args);
    mc->add_option("--paths", mc_paths, "number of simulated paths");
    mc->add_option("--seed", mc_seed, "RNG seed");
    CLI::App* conv = app.add_subcommand("convergence", "self-convergence study over a grid ladder");
    add_common(conv, conv_args);
    conv->add_option("--ladder", ladder, "grid sizes, e.g. --ladder 30 50 70 100 150");
    add_common(app.add_subcommand("cross-check", "PDE vs Monte Carlo at probe nodes"), cross_args);
    add_common(app.add_subcommand("cir-oracle", "PDE vs closed-form bond prices"), cir_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("price-pde"))
            return run_mode(pde_args, ipr::RunMode::price_pde, nullptr);
        if (app.got_subcommand("price-mc")) {
            return run_mode(mc_args, ipr::RunMode::price_mc, [&](ipr::RunConfig& cfg) {
                if (mc_paths > 0) cfg.mc.n_paths = mc_paths;
                if (mc_seed >= 0) cfg.mc.seed = static_cast<std::uint64_t>(mc_seed);
            });
        }
        if (app.got_subcommand("convergence")) {
            return run_mode(conv_args, ipr::RunMode::convergence, [&](ipr::RunConfig& cfg) {
                if (!ladder.empty()) cfg.ladder = ladder;
            });
        }
        if (app.got_subcommand("cross-check"))
            return run_mode(cross_args, ipr::RunMode::cross_check, nullptr);
        if (app.got_subcommand("cir-oracle"))
            return run_mode(cir_args, ipr::RunMode::cir_oracle, nullptr);
    } catch (const ipr::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const ipr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
