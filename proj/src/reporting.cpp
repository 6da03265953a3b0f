#include "sliq/reporting.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace sliq {

namespace {

using nlohmann::json;

// 17 significant digits round-trip exactly for binary64.
std::string num17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

std::string pair_label(const PairStats& ps) {
    return ps.candidate_name + "_over_" + ps.baseline_name;
}

}  // namespace

std::vector<std::string> cmd_path(const ExperimentConfig& cfg,
                                  const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ImpactPath path = simulate_impact_path(cfg.model, cfg.sim, cfg.penalties.T,
                                                 cfg.init.a0, cfg.init.b0, 0);
    const std::vector<double> noise = gaussian_stream(
        cfg.sim.master_seed, 0, StreamTag::Midprice, cfg.sim.n_steps);

    std::vector<std::string> files;
    for (const StrategyKind& kind : cfg.strategies) {
        const ExecutionTrajectory traj = simulate_execution(
            path, kind, cfg.model, cfg.penalties, cfg.sim, cfg.init, noise);
        std::string csv = "t,a,b,S,Q,X,nu\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            csv += num17(traj.times[k]) + "," + num17(path.a[k]) + "," +
                   num17(path.b[k]) + "," + num17(traj.S[k]) + "," +
                   num17(traj.Q[k]) + "," + num17(traj.X[k]) + "," +
                   num17(traj.nu[k]) + "\n";
        }
        const std::string name = out_dir + "/path_" + kind.name() + ".csv";
        write_file(name, csv);
        files.push_back(name);
    }

    json meta;
    meta["columns"] = {
        {"t", "time, fraction of the trading horizon"},
        {"a", "temporary impact factor, price per share per unit rate"},
        {"b", "permanent impact factor, price per share per unit rate"},
        {"S", "midprice, currency per share"},
        {"Q", "inventory, shares"},
        {"X", "cash, currency"},
        {"nu", "liquidation rate, shares per unit time"},
    };
    meta["master_seed"] = cfg.sim.master_seed;
    meta["n_steps"] = cfg.sim.n_steps;
    meta["regime"] = regime_name(cfg.penalties.regime);
    const std::string meta_name = out_dir + "/path_metadata.json";
    write_file(meta_name, meta.dump(2) + "\n");
    files.push_back(meta_name);
    return files;
}

std::string summary_to_json(const PerformanceSummary& summary) {
    json j;
    j["M"] = summary.paths;
    j["master_seed"] = summary.master_seed;
    j["n_steps"] = summary.n_steps;
    j["regime"] = regime_name(summary.regime);
    j["strategies"] = summary.strategy_names;
    j["truncation_events"] = summary.truncation_events;
    json means, errs;
    for (std::size_t i = 0; i < summary.strategy_names.size(); ++i) {
        means[summary.strategy_names[i]] = summary.mean_phi[i];
        errs[summary.strategy_names[i]] = summary.stderr_phi[i];
    }
    j["mean_phi"] = means;
    j["stderr_phi"] = errs;
    json pairs = json::array();
    for (const PairStats& ps : summary.pairs) {
        json p;
        p["baseline"] = ps.baseline_name;
        p["candidate"] = ps.candidate_name;
        p["ratio_of_means_bp"] = ps.ratio_of_means_bp;
        p["mean_per_path_bp"] = ps.mean_bp;
        p["stderr_per_path_bp"] = ps.stderr_bp;
        p["quantiles_bp"] = {{"q05", ps.quantiles_bp[0]},
                             {"q25", ps.quantiles_bp[1]},
                             {"q50", ps.quantiles_bp[2]},
                             {"q75", ps.quantiles_bp[3]},
                             {"q95", ps.quantiles_bp[4]}};
        p["histogram"] = {{"edges", ps.hist_edges}, {"counts", ps.hist_counts}};
        p["excluded_nonpositive_baseline"] = ps.excluded;
        pairs.push_back(p);
    }
    j["pairs"] = pairs;
    return j.dump(2) + "\n";
}

PerformanceSummary cmd_montecarlo(const ExperimentConfig& cfg,
                                  const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    PerformanceSummary summary = run_experiment(cfg.model, cfg.penalties, cfg.sim,
                                                cfg.strategies, cfg.paths, cfg.init);
    write_file(out_dir + "/montecarlo_summary.json", summary_to_json(summary));

    std::string csv = "path_index";
    for (const std::string& name : summary.strategy_names) csv += ",phi_" + name;
    for (const PairStats& ps : summary.pairs) csv += ",r_" + pair_label(ps) + "_bp";
    csv += "\n";
    for (const PerformanceSample& s : summary.samples) {
        csv += std::to_string(s.path_index);
        for (double phi : s.phi) csv += "," + num17(phi);
        for (const PairStats& ps : summary.pairs) {
            const double base = s.phi[ps.baseline];
            const double cand = s.phi[ps.candidate];
            csv += "," + (base > 0.0 ? num17((cand - base) / base * 1e4)
                                     : std::string("nan"));
        }
        csv += "\n";
    }
    write_file(out_dir + "/montecarlo_paths.csv", csv);
    return summary;
}

std::string reports_to_json(const std::vector<ResidualReport>& reports) {
    json arr = json::array();
    for (const ResidualReport& r : reports) {
        json j;
        j["name"] = r.name;
        j["grid"] = r.grid;
        j["max_abs_residual"] = r.max_abs;
        j["max_rel_residual"] = r.max_rel;
        j["tolerance"] = r.tol;
        j["applicable"] = r.applicable;
        j["pass"] = r.pass;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<ResidualReport> cmd_verify(const ExperimentConfig& cfg,
                                       const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<ResidualReport> reports =
        run_verify_suite(cfg.model, cfg.penalties, cfg.init.a0, cfg.init.b0);
    write_file(out_dir + "/verify_report.json", reports_to_json(reports));
    return reports;
}

}  // namespace sliq
