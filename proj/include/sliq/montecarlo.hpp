#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sliq/simulate.hpp"

namespace sliq {

// Single-path performance criterion for the trajectory's regime:
// nonlimiting  X_T + Q_T (S_T - kappa Q_T) - phi sum Q_k^2 dt
// kappa-inf    X_T - phi sum Q_k^2 dt
// (inf,0)      X_T
// The running penalty uses the left-endpoint Riemann sum, consistent with
// the Euler scheme.
double performance(const ExecutionTrajectory& traj, const PenaltyParams& penalties);

struct PerformanceSample {
    std::uint64_t path_index = 0;
    std::vector<double> phi;  // one value per strategy, in list order
};

// Relative statistics of candidate over baseline. The per-path statistic is
// r_i = (phi_i(cand) - phi_i(base)) / phi_i(base) * 1e4; paths with
// non-positive baseline are excluded from it (counted in excluded) but not
// from the ratio-of-means headline number.
struct PairStats {
    std::size_t baseline = 0;
    std::size_t candidate = 0;
    std::string baseline_name;
    std::string candidate_name;
    double ratio_of_means_bp = 0.0;
    double mean_bp = 0.0;
    double stderr_bp = 0.0;
    std::array<double, 5> quantiles_bp{};  // 5, 25, 50, 75, 95% nearest-rank
    std::vector<double> hist_edges;
    std::vector<long> hist_counts;
    long excluded = 0;
};

struct PerformanceSummary {
    std::size_t paths = 0;  // M
    std::uint64_t master_seed = 0;
    int n_steps = 0;
    Regime regime = Regime::Nonlimiting;
    std::vector<std::string> strategy_names;
    std::vector<double> mean_phi;
    std::vector<double> stderr_phi;
    std::vector<PairStats> pairs;
    std::vector<PerformanceSample> samples;
    long truncation_events = 0;
};

// Nearest-rank quantile: value at rank ceil(p*n) of the sorted sample.
double nearest_rank_quantile(std::vector<double> values, double p);

PairStats relative_performance(const std::vector<PerformanceSample>& samples,
                               std::size_t baseline, std::size_t candidate);

// Runs M paths under common random numbers: every strategy on path i sees
// the same impact path and the same midprice noise. Deterministic in
// cfg.master_seed regardless of thread count. A failing path aborts the run
// with its index in the error message.
PerformanceSummary run_experiment(const MarketModel& model,
                                  const PenaltyParams& penalties,
                                  const SimConfig& cfg,
                                  const std::vector<StrategyKind>& strategies,
                                  std::size_t M, const InitState& init);

}  // namespace sliq
