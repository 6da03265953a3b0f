#include "sliq/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace sliq {

double performance(const ExecutionTrajectory& traj, const PenaltyParams& penalties) {
    const int n = static_cast<int>(traj.times.size()) - 1;
    const double dt = traj.times[1] - traj.times[0];
    const double XT = traj.X[n];
    switch (penalties.regime) {
        case Regime::KappaInfinityPhiZero:
            return XT;
        case Regime::KappaInfinity: {
            double pen = 0.0;
            for (int k = 0; k < n; ++k) pen += traj.Q[k] * traj.Q[k] * dt;
            return XT - penalties.phi * pen;
        }
        case Regime::Nonlimiting: {
            double pen = 0.0;
            for (int k = 0; k < n; ++k) pen += traj.Q[k] * traj.Q[k] * dt;
            const double QT = traj.Q[n];
            const double ST = traj.S[n];
            return XT + QT * (ST - penalties.kappa * QT) - penalties.phi * pen;
        }
    }
    return 0.0;
}

double nearest_rank_quantile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return values[rank - 1];
}

namespace {

// Freedman-Diaconis bins over the central 99% of the data. Raw data is never
// trimmed anywhere else; trimming only selects the plot window.
void fd_histogram(const std::vector<double>& values, std::vector<double>& edges,
                  std::vector<long>& counts) {
    edges.clear();
    counts.clear();
    if (values.empty()) return;
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const auto at = [&](double p) {
        std::size_t r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        if (r < 1) r = 1;
        if (r > n) r = n;
        return sorted[r - 1];
    };
    const double lo = at(0.005);
    const double hi = at(0.995);
    std::vector<double> central;
    central.reserve(n);
    for (double v : sorted)
        if (v >= lo && v <= hi) central.push_back(v);
    const std::size_t m = central.size();
    if (m == 0 || hi <= lo) {
        const double c = sorted[n / 2];
        edges = {c - 0.5, c + 0.5};
        counts = {static_cast<long>(n)};
        return;
    }
    const auto central_at = [&](double p) {
        std::size_t r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m)));
        if (r < 1) r = 1;
        if (r > m) r = m;
        return central[r - 1];
    };
    const double iqr = central_at(0.75) - central_at(0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(m));
    if (!(width > 0.0)) width = (hi - lo) > 0.0 ? (hi - lo) : 1.0;
    std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 4096);
    edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    counts.assign(bins, 0);
    for (double v : central) {
        std::size_t idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
}

}  // namespace

PairStats relative_performance(const std::vector<PerformanceSample>& samples,
                               std::size_t baseline, std::size_t candidate) {
    PairStats ps;
    ps.baseline = baseline;
    ps.candidate = candidate;
    double sum_base = 0.0;
    double sum_cand = 0.0;
    std::vector<double> r;
    r.reserve(samples.size());
    for (const PerformanceSample& s : samples) {
        const double pb = s.phi[baseline];
        const double pc = s.phi[candidate];
        sum_base += pb;
        sum_cand += pc;
        if (pb > 0.0) {
            r.push_back((pc - pb) / pb * 1e4);
        } else {
            ++ps.excluded;
        }
    }
    if (!samples.empty() && sum_base != 0.0)
        ps.ratio_of_means_bp = (sum_cand - sum_base) / sum_base * 1e4;
    if (!r.empty()) {
        double mean = 0.0;
        for (double v : r) mean += v;
        mean /= static_cast<double>(r.size());
        ps.mean_bp = mean;
        if (r.size() > 1) {
            double ss = 0.0;
            for (double v : r) ss += (v - mean) * (v - mean);
            ps.stderr_bp = std::sqrt(ss / static_cast<double>(r.size() - 1)) /
                           std::sqrt(static_cast<double>(r.size()));
        }
        const double levels[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
        for (int i = 0; i < 5; ++i)
            ps.quantiles_bp[i] = nearest_rank_quantile(r, levels[i]);
        fd_histogram(r, ps.hist_edges, ps.hist_counts);
    }
    return ps;
}

PerformanceSummary run_experiment(const MarketModel& model,
                                  const PenaltyParams& penalties,
                                  const SimConfig& cfg,
                                  const std::vector<StrategyKind>& strategies,
                                  std::size_t M, const InitState& init) {
    model.validate();
    penalties.validate();
    cfg.validate();
    if (M < 1)
        throw ValidationError("sim.M", "path count M must be at least 1");
    if (strategies.empty())
        throw ValidationError("strategies", "at least one strategy is required");

    PerformanceSummary summary;
    summary.paths = M;
    summary.master_seed = cfg.master_seed;
    summary.n_steps = cfg.n_steps;
    summary.regime = penalties.regime;
    for (const StrategyKind& k : strategies)
        summary.strategy_names.push_back(k.name());
    summary.samples.resize(M);

    std::vector<long> truncation(M, 0);
    std::atomic<std::uint64_t> next{0};
    std::mutex fail_mutex;
    std::uint64_t fail_index = M;
    std::exception_ptr fail_error;

    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= M) return;
            {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (fail_error) return;
            }
            try {
                const ImpactPath path = simulate_impact_path(
                    model, cfg, penalties.T, init.a0, init.b0, i);
                const std::vector<double> noise = gaussian_stream(
                    cfg.master_seed, i, StreamTag::Midprice, cfg.n_steps);
                PerformanceSample sample;
                sample.path_index = i;
                sample.phi.reserve(strategies.size());
                for (const StrategyKind& kind : strategies) {
                    const ExecutionTrajectory traj = simulate_execution(
                        path, kind, model, penalties, cfg, init, noise);
                    sample.phi.push_back(performance(traj, penalties));
                }
                truncation[i] = path.truncation_events;
                summary.samples[i] = std::move(sample);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!fail_error || i < fail_index) {
                    fail_index = i;
                    fail_error = std::current_exception();
                }
            }
        }
    };

    unsigned n_threads = cfg.threads > 0
                             ? static_cast<unsigned>(cfg.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(M));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (fail_error) {
        try {
            std::rethrow_exception(fail_error);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "path " << fail_index << " failed: " << e.what();
            throw Error(os.str());
        }
    }

    // Sequential aggregation in path order keeps results independent of the
    // worker count.
    const std::size_t ns = strategies.size();
    summary.mean_phi.assign(ns, 0.0);
    summary.stderr_phi.assign(ns, 0.0);
    for (const PerformanceSample& s : summary.samples)
        for (std::size_t j = 0; j < ns; ++j) summary.mean_phi[j] += s.phi[j];
    for (std::size_t j = 0; j < ns; ++j)
        summary.mean_phi[j] /= static_cast<double>(M);
    if (M > 1) {
        for (std::size_t j = 0; j < ns; ++j) {
            double ss = 0.0;
            for (const PerformanceSample& s : summary.samples) {
                const double d = s.phi[j] - summary.mean_phi[j];
                ss += d * d;
            }
            summary.stderr_phi[j] = std::sqrt(ss / static_cast<double>(M - 1)) /
                                    std::sqrt(static_cast<double>(M));
        }
    }
    for (long t : truncation) summary.truncation_events += t;

    for (std::size_t bi = 0; bi < ns; ++bi) {
        for (std::size_t ci = bi + 1; ci < ns; ++ci) {
            PairStats ps = relative_performance(summary.samples, bi, ci);
            ps.baseline_name = summary.strategy_names[bi];
            ps.candidate_name = summary.strategy_names[ci];
            summary.pairs.push_back(std::move(ps));
        }
    }
    return summary;
}

}  // namespace sliq
