#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sliq/reporting.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t paths = 0;
    bool paths_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the config master seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--paths", opts.paths, "override the config path count M")
        ->each([&](const std::string&) { opts.paths_set = true; });
}

sliq::ExperimentConfig load(const CommonOpts& opts) {
    sliq::ExperimentConfig cfg = sliq::load_config(opts.config_path);
    if (opts.seed_set) cfg.sim.master_seed = opts.seed;
    if (opts.paths_set) cfg.paths = opts.paths;
    for (const std::string& w : cfg.warnings)
        std::cerr << "warning: " << w << "\n";
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form liquidation strategies under stochastic price impact"};
    app.require_subcommand(1);

    CommonOpts path_opts, mc_opts, verify_opts;
    CLI::App* cmd_path = app.add_subcommand(
        "path", "simulate one common impact path and dump per-strategy trajectories");
    add_common(cmd_path, path_opts);
    CLI::App* cmd_mc = app.add_subcommand(
        "montecarlo", "batch experiment with common random numbers");
    add_common(cmd_mc, mc_opts);
    CLI::App* cmd_verify = app.add_subcommand(
        "verify", "run the numerical oracle suite at the config's parameters");
    add_common(cmd_verify, verify_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_path->parsed()) {
            const sliq::ExperimentConfig cfg = load(path_opts);
            for (const std::string& f : sliq::cmd_path(cfg, path_opts.out_dir))
                std::cout << "wrote " << f << "\n";
            return 0;
        }
        if (cmd_mc->parsed()) {
            const sliq::ExperimentConfig cfg = load(mc_opts);
            const sliq::PerformanceSummary summary =
                sliq::cmd_montecarlo(cfg, mc_opts.out_dir);
            std::cout << "wrote " << mc_opts.out_dir << "/montecarlo_summary.json ("
                      << summary.paths << " paths)\n";
            for (const sliq::PairStats& ps : summary.pairs) {
                std::printf("%s over %s: ratio-of-means %+0.4f bp, per-path mean %+0.4f bp, median %+0.4f bp\n",
                            ps.candidate_name.c_str(), ps.baseline_name.c_str(),
                            ps.ratio_of_means_bp, ps.mean_bp, ps.quantiles_bp[2]);
            }
            return 0;
        }
        const sliq::ExperimentConfig cfg = load(verify_opts);
        const std::vector<sliq::ResidualReport> reports =
            sliq::cmd_verify(cfg, verify_opts.out_dir);
        bool all_pass = true;
        for (const sliq::ResidualReport& r : reports) {
            const char* status = !r.applicable ? "SKIP" : (r.pass ? "PASS" : "FAIL");
            std::printf("[%s] %-28s max_rel %.3e (tol %.1e)\n", status,
                        r.name.c_str(), r.max_rel, r.tol);
            if (r.applicable && !r.pass) all_pass = false;
        }
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
