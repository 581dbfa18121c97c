#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ropm/graph.hpp"
#include "ropm/kernels.hpp"
#include "ropm/potts.hpp"

namespace ropm {

enum class Integrator { rk4, euler };

/// Phase-model parameters. Time is measured in natural oscillator cycles;
/// gains and detuning are in radians per cycle.
struct DynamicsParams {
    double coupling_gain = 0.2;
    double shil_gain = 10.0;  // peak SHIL strength reached after the ramp
    int n_phases = 3;
    double noise_amplitude = 0.0;
    double detuning = 0.0;
    double dt = 0.02;
    double t_max = 60.0;
    double sample_stride = 0.5;
    Integrator integrator = Integrator::rk4;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// Envelope applied to the peak SHIL gain over time.
struct ShilSchedule {
    enum class Mode { off, constant, square_wave };

    double t_on = 20.0;
    double ramp = 10.0;
    Mode mode = Mode::constant;
    double period = 10.0;  // square_wave only
    double duty = 0.5;     // square_wave only, fraction of period with SHIL on

    void validate() const;

    /// Envelope in [0, 1]: zero before t_on, linear during the ramp, then
    /// constant or gated by the square wave (measured from the end of the ramp).
    [[nodiscard]] double envelope(double t) const noexcept;

    /// True when the envelope cannot change anywhere in [a, b].
    [[nodiscard]] bool constant_on(double a, double b) const noexcept;
};

/// Non-finite phase produced by the integrator, usually a step too large for
/// the chosen gains.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(double time);
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

struct Checkpoint {
    double time = 0.0;
    std::vector<double> phases;  // empty when phases are not recorded
    double lyapunov = 0.0;       // evaluated with the instantaneous SHIL gain
    double shil_gain = 0.0;      // instantaneous SHIL gain at `time`
    double max_rate = 0.0;       // max_i |dtheta_i/dt|
    double accuracy = 0.0;       // of the rounded coloring
    double lattice_deviation = 0.0;  // mean distance to the (rotating) lattice, radians
    Coloring rounded;
};

struct Trajectory {
    std::vector<Checkpoint> checkpoints;
    double stride = 0.0;
    std::size_t steps = 0;
};

struct IntegrateOptions {
    /// Phases of intermediate checkpoints; the final checkpoint always keeps them.
    bool record_phases = true;
    kernels::RhsEvaluator::Policy policy = kernels::RhsEvaluator::Policy::serial;
};

/// Instantaneous phase velocities. Equals minus the gradient of `lyapunov`
/// when detuning is zero.
[[nodiscard]] std::vector<double> rhs(const Graph& graph, const PhaseState& state,
                                      double coupling_gain, double shil_gain_now, int n_phases,
                                      double detuning, double t);

/// I.i.d. uniform phases in [0, 2*pi), deterministic per seed.
[[nodiscard]] PhaseState random_init(std::size_t n, std::uint64_t seed);

/// Fixed-step integration from `init` up to params.t_max with checkpoints every
/// sample_stride (plus the initial state and t_max). Noise, when enabled, adds
/// N(0, noise^2 dt) per vertex per step from a stream derived from `seed`.
[[nodiscard]] Trajectory integrate(const Graph& graph, const PhaseState& init,
                                   const DynamicsParams& params, const ShilSchedule& schedule,
                                   std::uint64_t seed, const IntegrateOptions& options = {});

/// Earliest checkpoint time T at which the rounded coloring has been identical
/// over the last `window` checkpoints ending at T and max |dtheta/dt| < eps at T.
[[nodiscard]] std::optional<double> detect_convergence(const Trajectory& trajectory,
                                                       std::size_t window, double eps);

/// CSV with time, optional per-vertex phases, lyapunov and accuracy columns.
[[nodiscard]] std::string trajectory_csv(const Trajectory& trajectory, bool include_phases);

}  // namespace ropm
