#include "ropm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <random>

#include <omp.h>

namespace ropm {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

// Evaluates fn(i) for i in [0, count) on up to `jobs` threads. Results are
// stored by index; the exception from the lowest failing index is rethrown.
template <typename T, typename Fn>
std::vector<T> run_indexed(std::size_t count, int jobs, Fn&& fn) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
    const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = fn(idx);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

RunRecord score(const Graph& graph, const PhaseState& final_state, const Coloring& coloring,
                std::uint64_t seed, int n_phases, double lattice_offset) {
    RunRecord rec;
    rec.seed = seed;
    rec.accuracy = accuracy(graph, coloring);
    rec.delta_energy = delta_energy(graph, coloring);
    rec.vector_energy = vector_energy(graph, final_state);
    rec.lattice_deviation_deg = mean_lattice_deviation(final_state, n_phases, lattice_offset) * kDeg;
    rec.coloring = coloring;
    return rec;
}

SolveReport finish(std::vector<RunRecord> runs) {
    SolveReport report;
    report.aggregate = aggregate_runs(runs);
    report.runs = std::move(runs);
    return report;
}

template <typename Fn>
SolveReport run_restarts(const SolveConfig& config, int jobs, Fn&& one) {
    if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    auto runs = run_indexed<RunRecord>(config.iterations, jobs, [&](std::size_t i) {
        const std::uint64_t seed = config.base_seed + i;
        try {
            return one(seed);
        } catch (const std::exception& e) {
            throw RunError(seed, e.what());
        }
    });
    return finish(std::move(runs));
}

}  // namespace

std::string to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::full: return "full";
        case AblationMode::sync_only: return "sync_only";
        case AblationMode::couplings_only: return "couplings_only";
        case AblationMode::none: return "none";
    }
    return "full";
}

AblationMode parse_ablation_mode(const std::string& name) {
    if (name == "full") return AblationMode::full;
    if (name == "sync_only" || name == "sync-only") return AblationMode::sync_only;
    if (name == "couplings_only" || name == "couplings-only") return AblationMode::couplings_only;
    if (name == "none") return AblationMode::none;
    throw std::invalid_argument("unknown ablation mode '" + name +
                                "' (expected full, sync_only, couplings_only or none)");
}

RunError::RunError(std::uint64_t seed, const std::string& what)
    : std::runtime_error("run with seed " + std::to_string(seed) + " failed: " + what), seed_(seed) {}

std::size_t histogram_bin(double accuracy) noexcept {
    // the small offset keeps k/100 in bin k despite rounding in k/|E|
    const double scaled = std::floor(accuracy * 100.0 + 1e-9);
    return static_cast<std::size_t>(std::clamp(scaled, 0.0, 100.0));
}

Aggregate aggregate_runs(std::span<const RunRecord> runs) {
    Aggregate agg;
    agg.runs = runs.size();
    if (runs.empty()) return agg;
    double sum = 0.0;
    double cycles_sum = 0.0;
    agg.best_accuracy = runs.front().accuracy;
    agg.worst_accuracy = runs.front().accuracy;
    for (const auto& r : runs) {
        sum += r.accuracy;
        agg.best_accuracy = std::max(agg.best_accuracy, r.accuracy);
        agg.worst_accuracy = std::min(agg.worst_accuracy, r.accuracy);
        ++agg.histogram[histogram_bin(r.accuracy)];
        if (r.cycles) {
            ++agg.converged;
            cycles_sum += *r.cycles;
        } else {
            ++agg.not_converged;
        }
    }
    agg.average_accuracy = sum / static_cast<double>(runs.size());
    if (agg.converged > 0) agg.mean_cycles = cycles_sum / static_cast<double>(agg.converged);
    return agg;
}

RunRecord solve_once(const Graph& graph, const DynamicsParams& params, const ShilSchedule& schedule,
                     std::uint64_t seed, const ConvergenceCriteria& convergence,
                     kernels::RhsEvaluator::Policy policy) {
    const PhaseState init = random_init(graph.num_vertices(), seed);
    const Trajectory traj =
        integrate(graph, init, params, schedule, seed, {.record_phases = false, .policy = policy});
    const Checkpoint& last = traj.checkpoints.back();
    const PhaseState final_state{last.phases, last.time};
    RunRecord rec = score(graph, final_state, last.rounded, seed, params.n_phases,
                          canonical_phase(params.detuning * last.time));
    rec.cycles = detect_convergence(traj, convergence.window, convergence.eps);
    return rec;
}

SolveReport solve_multi(const Graph& graph, const SolveConfig& config, int jobs) {
    config.params.validate();
    config.schedule.validate();
    return run_restarts(config, jobs, [&](std::uint64_t seed) {
        return solve_once(graph, config.params, config.schedule, seed, config.convergence);
    });
}

SolveReport ablate(const Graph& graph, const SolveConfig& config, AblationMode mode, int jobs) {
    SolveConfig cfg = config;
    switch (mode) {
        case AblationMode::full:
            return solve_multi(graph, cfg, jobs);
        case AblationMode::sync_only:
            cfg.params.coupling_gain = 0.0;
            return solve_multi(graph, cfg, jobs);
        case AblationMode::couplings_only:
            cfg.params.shil_gain = 0.0;
            return solve_multi(graph, cfg, jobs);
        case AblationMode::none:
            cfg.params.validate();
            return run_restarts(cfg, jobs, [&](std::uint64_t seed) {
                const PhaseState init = random_init(graph.num_vertices(), seed);
                return score(graph, init, quantize(init, cfg.params.n_phases), seed,
                             cfg.params.n_phases, 0.0);
            });
    }
    throw std::invalid_argument("unknown ablation mode");
}

std::vector<DetunePoint> detune_sweep(const Graph& graph, const SolveConfig& config,
                                      std::span<const double> deltas, int jobs,
                                      const DetuneOptions& options) {
    if (deltas.empty()) throw std::invalid_argument("detune_sweep: no detuning values");
    if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(options.window_fraction > 0.0 && options.window_fraction <= 1.0)) {
        throw std::invalid_argument("detune_sweep: window fraction must be in (0, 1]");
    }
    if (!(options.max_phase_step > 0.0)) {
        throw std::invalid_argument("detune_sweep: max phase step must be > 0");
    }
    config.schedule.validate();

    std::vector<DetunePoint> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        DynamicsParams params = config.params;
        params.detuning = delta;
        if (std::abs(delta) * params.dt > options.max_phase_step) {
            // keep sample_stride a whole number of steps
            const double steps_per_stride =
                std::ceil(params.sample_stride * std::abs(delta) / options.max_phase_step);
            params.dt = params.sample_stride / steps_per_stride;
        }
        params.validate();
        const double window_start = params.t_max * (1.0 - options.window_fraction);

        DetunePoint point;
        point.detuning = delta;
        point.dt_used = params.dt;
        point.per_run_deg = run_indexed<double>(config.iterations, jobs, [&](std::size_t i) {
            const std::uint64_t seed = config.base_seed + i;
            try {
                const PhaseState init = random_init(graph.num_vertices(), seed);
                const Trajectory traj =
                    integrate(graph, init, params, config.schedule, seed, {.record_phases = false});
                double sum = 0.0;
                std::size_t count = 0;
                for (const auto& cp : traj.checkpoints) {
                    if (cp.time + 1e-9 >= window_start) {
                        sum += cp.lattice_deviation;
                        ++count;
                    }
                }
                return sum / static_cast<double>(count) * kDeg;
            } catch (const std::exception& e) {
                throw RunError(seed, e.what());
            }
        });
        point.mean_deviation_deg =
            std::accumulate(point.per_run_deg.begin(), point.per_run_deg.end(), 0.0) /
            static_cast<double>(point.per_run_deg.size());
        out.push_back(std::move(point));
    }
    return out;
}

double bootstrap_mean_diff_lower(std::span<const double> a, std::span<const double> b,
                                 double confidence, std::size_t resamples, std::uint64_t seed) {
    if (a.empty() || b.empty()) throw std::invalid_argument("bootstrap: empty sample");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("bootstrap: confidence in (0, 1)");
    if (resamples < 1) throw std::invalid_argument("bootstrap: resamples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_a(0, a.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_b(0, b.size() - 1);
    std::vector<double> diffs(resamples);
    for (auto& d : diffs) {
        double sa = 0.0;
        double sb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) sa += a[pick_a(rng)];
        for (std::size_t i = 0; i < b.size(); ++i) sb += b[pick_b(rng)];
        d = sa / static_cast<double>(a.size()) - sb / static_cast<double>(b.size());
    }
    std::sort(diffs.begin(), diffs.end());
    const auto idx = static_cast<std::size_t>(std::floor((1.0 - confidence) * static_cast<double>(resamples)));
    return diffs[std::min(idx, resamples - 1)];
}

}  // namespace ropm
