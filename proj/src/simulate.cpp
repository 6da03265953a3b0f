#include "sliq/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sliq {

void SimConfig::validate() const {
    if (n_steps < 2)
        throw ValidationError("sim.n_steps", "n_steps must be at least 2");
    if (threads < 0)
        throw ValidationError("sim.threads", "threads must be non-negative");
}

std::vector<double> gaussian_stream(std::uint64_t master_seed,
                                    std::uint64_t path_index, StreamTag tag,
                                    int count) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(master_seed),
        static_cast<std::uint32_t>(master_seed >> 32),
        static_cast<std::uint32_t>(path_index),
        static_cast<std::uint32_t>(path_index >> 32),
        static_cast<std::uint32_t>(tag),
    };
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(static_cast<size_t>(count));
    for (double& z : out) z = normal(engine);
    return out;
}

ImpactPath simulate_impact_path(const MarketModel& model, const SimConfig& cfg,
                                double horizon, double a0, double b0,
                                std::uint64_t path_index) {
    cfg.validate();
    const bool a_cir = model.a_dyn.kind == DiffusionSpec::Kind::CIR;
    const bool b_cir = model.b_dyn.kind == DiffusionSpec::Kind::CIR;
    if (a_cir && !(a0 > 0.0))
        throw InvalidInitialState("a0 must be positive for CIR dynamics");
    if (b_cir && !(b0 > 0.0))
        throw InvalidInitialState("b0 must be positive for CIR dynamics");

    const int n = cfg.n_steps;
    const double dt = horizon / n;
    const double sqdt = std::sqrt(dt);
    const double rho = model.rho;
    const double mix = std::sqrt(1.0 - rho * rho);

    ImpactPath path;
    path.times.resize(n + 1);
    path.a.resize(n + 1);
    path.b.resize(n + 1);
    path.z_a.resize(n);
    path.z_b.resize(n);
    for (int k = 0; k <= n; ++k) path.times[k] = horizon * k / n;
    path.a[0] = a0;
    path.b[0] = b0;

    const std::vector<double> zb =
        gaussian_stream(cfg.master_seed, path_index, StreamTag::PermanentDriver, n);
    const std::vector<double> zr =
        gaussian_stream(cfg.master_seed, path_index, StreamTag::TemporaryResidual, n);

    for (int k = 0; k < n; ++k) {
        const double z1 = zb[k];
        const double z2 = rho * z1 + mix * zr[k];
        path.z_b[k] = z1;
        path.z_a[k] = z2;
        const double a = path.a[k];
        const double b = path.b[k];
        double an = a + model.a_dyn.drift(a) * dt +
                    model.a_dyn.diffusion(std::max(a, 0.0)) * sqdt * z2;
        double bn = b + model.b_dyn.drift(b) * dt +
                    model.b_dyn.diffusion(std::max(b, 0.0)) * sqdt * z1;
        if (a_cir && an < 0.0) {
            an = 0.0;
            ++path.truncation_events;
        }
        if (b_cir && bn < 0.0) {
            bn = 0.0;
            ++path.truncation_events;
        }
        path.a[k + 1] = an;
        path.b[k + 1] = bn;
    }
    return path;
}

ExecutionTrajectory simulate_execution(const ImpactPath& path,
                                       const StrategyKind& kind,
                                       const MarketModel& model,
                                       const PenaltyParams& penalties,
                                       const SimConfig& cfg,
                                       const InitState& init,
                                       const std::vector<double>& midprice_noise) {
    const int n = static_cast<int>(path.times.size()) - 1;
    if (static_cast<int>(midprice_noise.size()) < n) {
        std::ostringstream os;
        os << "midprice noise has " << midprice_noise.size()
           << " draws, need " << n;
        throw ValidationError("midprice_noise", os.str());
    }
    const double dt = path.times[1] - path.times[0];
    const double sqdt = std::sqrt(dt);
    const bool forced = cfg.force_final_liquidation &&
                        penalties.regime != Regime::Nonlimiting;

    ExecutionTrajectory traj;
    traj.kind = kind;
    traj.times = path.times;
    traj.X.resize(n + 1);
    traj.S.resize(n + 1);
    traj.Q.resize(n + 1);
    traj.nu.assign(n + 1, 0.0);
    traj.X[0] = init.X0;
    traj.S[0] = init.S0;
    traj.Q[0] = init.Q0;

    for (int k = 0; k < n; ++k) {
        const double t = path.times[k];
        const double a = path.a[k];
        const double b = path.b[k];
        const double q = traj.Q[k];
        const double nu = (forced && k == n - 1)
                              ? q / dt
                              : rate(kind, t, q, a, b, model, penalties);
        traj.nu[k] = nu;
        traj.X[k + 1] = traj.X[k] + nu * (traj.S[k] - model.f.value(a) * nu) * dt;
        traj.S[k + 1] = traj.S[k] - model.g.value(b) * nu * dt +
                        model.sigma * sqdt * midprice_noise[k];
        traj.Q[k + 1] = traj.Q[k] - nu * dt;
        if (forced && k == n - 1) traj.Q[k + 1] = 0.0;
    }
    return traj;
}

}  // namespace sliq
