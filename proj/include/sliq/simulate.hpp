#pragma once

#include <cstdint>
#include <vector>

#include "sliq/model.hpp"
#include "sliq/strategy.hpp"

namespace sliq {

struct SimConfig {
    enum class Scheme { EulerFullTruncation };

    int n_steps = 1000;
    std::uint64_t master_seed = 0;
    Scheme scheme = Scheme::EulerFullTruncation;
    // In the limiting regimes the last step sells the remaining inventory at
    // rate Q/dt. In the nonlimiting regime leftover inventory is penalized
    // through the performance criterion instead, so the flag has no effect.
    bool force_final_liquidation = true;
    // Worker threads for batch experiments; 0 picks hardware concurrency.
    int threads = 0;

    void validate() const;
};

// Per-path Gaussian stream identifiers. Each (master_seed, path_index, tag)
// triple yields an independent reproducible stream.
enum class StreamTag : std::uint32_t {
    Midprice = 0,          // W, drives the midprice
    PermanentDriver = 1,   // B^(1), drives b
    TemporaryResidual = 2, // residual mixed into B^(2), which drives a
};

// count standard normal draws, deterministic in (master_seed, path_index, tag).
std::vector<double> gaussian_stream(std::uint64_t master_seed,
                                    std::uint64_t path_index, StreamTag tag,
                                    int count);

struct ImpactPath {
    std::vector<double> times;  // n_steps + 1 instants
    std::vector<double> a;
    std::vector<double> b;
    // Standard-normal increments actually applied (post correlation mixing),
    // kept so schemes and diagnostics can reuse the same noise.
    std::vector<double> z_a;
    std::vector<double> z_b;
    long truncation_events = 0;  // times the full-truncation clamp fired
};

struct InitState {
    double X0 = 0.0;
    double S0 = 0.0;
    double Q0 = 0.0;
    double a0 = 0.0;
    double b0 = 0.0;
};

struct ExecutionTrajectory {
    std::vector<double> times;
    std::vector<double> X;
    std::vector<double> S;
    std::vector<double> Q;
    std::vector<double> nu;  // nu[k] applies on [t_k, t_{k+1}); nu[n] = 0
    StrategyKind kind;
};

// Euler-Maruyama with full truncation for the correlated pair (a, b) on the
// uniform grid {k*T/n_steps}. The two Gaussian draws per step are correlated
// through z_a = rho*z_b + sqrt(1-rho^2)*z_resid.
ImpactPath simulate_impact_path(const MarketModel& model, const SimConfig& cfg,
                                double horizon, double a0, double b0,
                                std::uint64_t path_index);

// Euler execution along a given impact path. midprice_noise must hold
// n_steps standard-normal draws; passing the same vector to several
// strategies gives common random numbers.
ExecutionTrajectory simulate_execution(const ImpactPath& path,
                                       const StrategyKind& kind,
                                       const MarketModel& model,
                                       const PenaltyParams& penalties,
                                       const SimConfig& cfg,
                                       const InitState& init,
                                       const std::vector<double>& midprice_noise);

}  // namespace sliq
