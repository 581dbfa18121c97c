#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ropm/dynamics.hpp"
#include "ropm/graph.hpp"

namespace ropm {

/// When a run counts as settled; see detect_convergence.
struct ConvergenceCriteria {
    std::size_t window = 6;
    double eps = 0.05;
};

struct SolveConfig {
    DynamicsParams params;
    ShilSchedule schedule;
    ConvergenceCriteria convergence;
    std::size_t iterations = 100;
    std::uint64_t base_seed = 1;
};

enum class AblationMode { full, sync_only, couplings_only, none };

[[nodiscard]] std::string to_string(AblationMode mode);
[[nodiscard]] AblationMode parse_ablation_mode(const std::string& name);

struct RunRecord {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double delta_energy = 0.0;
    double vector_energy = 0.0;  // of the final continuous state
    double lattice_deviation_deg = 0.0;
    std::optional<double> cycles;
    Coloring coloring;
};

struct Aggregate {
    std::size_t runs = 0;
    double average_accuracy = 0.0;
    double best_accuracy = 0.0;
    double worst_accuracy = 0.0;
    /// 101 bins of width 0.01; bin b counts accuracies in [b/100, (b+1)/100).
    std::array<std::size_t, 101> histogram{};
    std::size_t converged = 0;
    std::size_t not_converged = 0;
    std::optional<double> mean_cycles;  // over converged runs only
};

struct SolveReport {
    std::vector<RunRecord> runs;  // ordered by seed
    Aggregate aggregate;
};

/// A run failed; `seed()` identifies it.
class RunError : public std::runtime_error {
public:
    RunError(std::uint64_t seed, const std::string& what);
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

[[nodiscard]] std::size_t histogram_bin(double accuracy) noexcept;
[[nodiscard]] Aggregate aggregate_runs(std::span<const RunRecord> runs);

/// random_init(seed) -> integrate -> quantize -> score.
[[nodiscard]] RunRecord solve_once(const Graph& graph, const DynamicsParams& params,
                                   const ShilSchedule& schedule, std::uint64_t seed,
                                   const ConvergenceCriteria& convergence = {},
                                   kernels::RhsEvaluator::Policy policy =
                                       kernels::RhsEvaluator::Policy::serial);

/// Runs seeds base_seed .. base_seed + iterations - 1 across up to `jobs`
/// threads. The report does not depend on `jobs`.
[[nodiscard]] SolveReport solve_multi(const Graph& graph, const SolveConfig& config,
                                      int jobs = 1);

[[nodiscard]] SolveReport ablate(const Graph& graph, const SolveConfig& config, AblationMode mode,
                                 int jobs = 1);

struct DetunePoint {
    double detuning = 0.0;
    double mean_deviation_deg = 0.0;
    double dt_used = 0.0;
    std::vector<double> per_run_deg;
};

struct DetuneOptions {
    /// dt is reduced so |detuning| * dt never exceeds this many radians.
    double max_phase_step = 0.1;
    /// Deviation is averaged over checkpoints in the last `window_fraction`
    /// of the horizon, so an unlocked state sweeping past the lattice
    /// contributes its time-averaged distance.
    double window_fraction = 0.25;
};

/// Mean distance (degrees) of the final phases to the SHIL lattice for each
/// detuning, averaged over runs and vertices. The lattice rotates with the
/// detuned stimulus: {(2*pi*s + detuning*t) / N}.
[[nodiscard]] std::vector<DetunePoint> detune_sweep(const Graph& graph, const SolveConfig& config,
                                                    std::span<const double> deltas, int jobs = 1,
                                                    const DetuneOptions& options = {});

/// One-sided lower confidence bound on mean(a) - mean(b) from `resamples`
/// paired-independent bootstrap draws.
[[nodiscard]] double bootstrap_mean_diff_lower(std::span<const double> a, std::span<const double> b,
                                               double confidence = 0.95,
                                               std::size_t resamples = 1000,
                                               std::uint64_t seed = 12345);

}  // namespace ropm
