#include "ropm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace ropm {

void DynamicsParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("dynamics: " + what); };
    if (!std::isfinite(coupling_gain) || coupling_gain < 0.0) fail("coupling gain must be finite and >= 0");
    if (!std::isfinite(shil_gain) || shil_gain < 0.0) fail("SHIL gain must be finite and >= 0");
    if (n_phases < 2) fail("number of phases must be >= 2");
    if (!std::isfinite(noise_amplitude) || noise_amplitude < 0.0) fail("noise amplitude must be >= 0");
    if (!std::isfinite(detuning)) fail("detuning must be finite");
    if (!std::isfinite(dt) || dt <= 0.0) fail("dt must be > 0");
    if (!std::isfinite(t_max) || t_max < 0.0) fail("t_max must be >= 0");
    if (!std::isfinite(sample_stride) || sample_stride <= 0.0) fail("sample stride must be > 0");
}

void ShilSchedule::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("schedule: " + what); };
    if (!std::isfinite(t_on) || t_on < 0.0) fail("t_on must be >= 0");
    if (!std::isfinite(ramp) || ramp < 0.0) fail("ramp must be >= 0");
    if (mode == Mode::square_wave) {
        if (!std::isfinite(period) || period <= 0.0) fail("square-wave period must be > 0");
        if (!(duty >= 0.0 && duty <= 1.0)) fail("square-wave duty must be in [0, 1]");
    }
}

double ShilSchedule::envelope(double t) const noexcept {
    if (mode == Mode::off || t < t_on) return 0.0;
    if (t < t_on + ramp) return (t - t_on) / ramp;
    if (mode == Mode::constant) return 1.0;
    const double phase = std::fmod(t - t_on - ramp, period);
    return phase < duty * period ? 1.0 : 0.0;
}

bool ShilSchedule::constant_on(double a, double b) const noexcept {
    if (mode == Mode::off) return true;
    if (b < t_on) return true;
    if (a < t_on + ramp) return false;
    if (mode == Mode::constant) return true;
    // square wave: both ends inside the same half-period
    const double start = t_on + ramp;
    const double ka = std::floor((a - start) / period);
    const double kb = std::floor((b - start) / period);
    if (ka != kb) return false;
    const double edge = start + ka * period + duty * period;
    return (a < edge) == (b < edge) && b != edge;
}

DivergenceError::DivergenceError(double time)
    : std::runtime_error([time] {
          std::ostringstream msg;
          msg << "integrator diverged (non-finite phase) at t = " << time
              << " cycles; reduce dt or the gains";
          return msg.str();
      }()),
      time_(time) {}

std::vector<double> rhs(const Graph& graph, const PhaseState& state, double coupling_gain,
                        double shil_gain_now, int n_phases, double detuning, double t) {
    if (state.phases.size() != graph.num_vertices()) {
        throw std::invalid_argument("rhs: state length does not match graph");
    }
    if (shil_gain_now < 0.0) throw std::invalid_argument("rhs: SHIL gain must be >= 0");
    for (double theta : state.phases) {
        if (!std::isfinite(theta)) throw std::invalid_argument("rhs: non-finite phase");
    }
    std::vector<double> out(graph.num_vertices());
    kernels::rhs_serial(graph, state.phases, {coupling_gain, shil_gain_now, n_phases, detuning, t},
                        out);
    return out;
}

PhaseState random_init(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    PhaseState state;
    state.phases.resize(n);
    for (auto& theta : state.phases) theta = canonical_phase(dist(rng));
    return state;
}

namespace {

class Stepper {
public:
    Stepper(const Graph& graph, const DynamicsParams& params, const ShilSchedule& schedule,
            kernels::RhsEvaluator::Policy policy)
        : params_(params),
          schedule_(schedule),
          eval_(graph, policy),
          n_(graph.num_vertices()),
          k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_) {}

    kernels::RhsTerms terms(double t) const {
        return {params_.coupling_gain, params_.shil_gain * schedule_.envelope(t), params_.n_phases,
                params_.detuning, t};
    }

    void derivative(std::span<const double> theta, double t, std::span<double> out) {
        eval_(theta, terms(t), out);
    }

    void step(std::vector<double>& theta, double t, double h) {
        if (params_.integrator == Integrator::euler) {
            derivative(theta, t, k1_);
            for (std::size_t i = 0; i < n_; ++i) theta[i] += h * k1_[i];
            return;
        }
        derivative(theta, t, k1_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = theta[i] + 0.5 * h * k1_[i];
        derivative(tmp_, t + 0.5 * h, k2_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = theta[i] + 0.5 * h * k2_[i];
        derivative(tmp_, t + 0.5 * h, k3_);
        for (std::size_t i = 0; i < n_; ++i) tmp_[i] = theta[i] + h * k3_[i];
        derivative(tmp_, t + h, k4_);
        for (std::size_t i = 0; i < n_; ++i) {
            theta[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
    }

    std::vector<double>& scratch() { return k1_; }

private:
    const DynamicsParams& params_;
    const ShilSchedule& schedule_;
    kernels::RhsEvaluator eval_;
    std::size_t n_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

Trajectory integrate(const Graph& graph, const PhaseState& init, const DynamicsParams& params,
                     const ShilSchedule& schedule, std::uint64_t seed,
                     const IntegrateOptions& options) {
    params.validate();
    schedule.validate();
    if (init.phases.size() != graph.num_vertices()) {
        throw std::invalid_argument("integrate: initial state length does not match graph");
    }

    const std::size_t n = graph.num_vertices();
    Stepper stepper(graph, params, schedule, options.policy);

    std::vector<double> theta(init.phases.size());
    std::transform(init.phases.begin(), init.phases.end(), theta.begin(),
                   [](double x) { return canonical_phase(x); });

    const double t0 = init.time;
    const double t_end = std::max(t0, params.t_max);
    const auto full_steps = static_cast<std::size_t>(std::floor((t_end - t0) / params.dt + 1e-9));
    const double tail = (t_end - t0) - static_cast<double>(full_steps) * params.dt;
    const bool has_tail = tail > 1e-9 * params.dt;
    const std::size_t total_steps = full_steps + (has_tail ? 1 : 0);
    const auto stride_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params.sample_stride / params.dt)));

    std::seed_seq noise_seed{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                             0x6e6f6973u};
    std::mt19937_64 noise_rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Trajectory traj;
    traj.stride = static_cast<double>(stride_steps) * params.dt;
    traj.steps = total_steps;

    auto record = [&](double t, bool is_final) {
        Checkpoint cp;
        cp.time = t;
        auto& rate = stepper.scratch();
        stepper.derivative(theta, t, rate);
        double max_rate = 0.0;
        for (double r : rate) max_rate = std::max(max_rate, std::abs(r));
        cp.max_rate = max_rate;
        cp.shil_gain = params.shil_gain * schedule.envelope(t);
        PhaseState snapshot{theta, t};
        cp.lyapunov = lyapunov(graph, snapshot, params.coupling_gain, cp.shil_gain, params.n_phases);
        cp.rounded = quantize(snapshot, params.n_phases);
        cp.accuracy = accuracy(graph, cp.rounded);
        cp.lattice_deviation =
            mean_lattice_deviation(snapshot, params.n_phases, canonical_phase(params.detuning * t));
        if (options.record_phases || is_final) cp.phases = std::move(snapshot.phases);
        traj.checkpoints.push_back(std::move(cp));
    };

    record(t0, total_steps == 0);
    const double noise_scale = params.noise_amplitude;
    for (std::size_t s = 0; s < total_steps; ++s) {
        const double t = t0 + static_cast<double>(s) * params.dt;
        const double h = (s == full_steps) ? tail : params.dt;
        stepper.step(theta, t, h);
        if (noise_scale > 0.0) {
            const double sd = noise_scale * std::sqrt(h);
            for (std::size_t i = 0; i < n; ++i) theta[i] += sd * gauss(noise_rng);
        }
        const double t_next = (s + 1 == total_steps) ? t_end : t0 + static_cast<double>(s + 1) * params.dt;
        for (auto& x : theta) {
            if (!std::isfinite(x)) throw DivergenceError(t_next);
            x = canonical_phase(x);
        }
        if ((s + 1) % stride_steps == 0 || s + 1 == total_steps) record(t_next, s + 1 == total_steps);
    }
    return traj;
}

std::optional<double> detect_convergence(const Trajectory& trajectory, std::size_t window,
                                         double eps) {
    if (window < 2) throw std::invalid_argument("detect_convergence: window must be >= 2");
    const auto& cps = trajectory.checkpoints;
    std::size_t run = 0;  // length of the current streak of identical rounded colorings
    for (std::size_t i = 0; i < cps.size(); ++i) {
        run = (i > 0 && cps[i].rounded == cps[i - 1].rounded) ? run + 1 : 1;
        if (run >= window && cps[i].max_rate < eps) return cps[i].time;
    }
    return std::nullopt;
}

std::string trajectory_csv(const Trajectory& trajectory, bool include_phases) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "time";
    const std::size_t nv = trajectory.checkpoints.empty() ? 0 : trajectory.checkpoints.front().phases.size();
    if (include_phases) {
        for (std::size_t i = 0; i < nv; ++i) out << ",theta_" << i;
    }
    out << ",lyapunov,accuracy\n";
    for (const auto& cp : trajectory.checkpoints) {
        out << cp.time;
        if (include_phases) {
            for (double theta : cp.phases) out << ',' << theta;
        }
        out << ',' << cp.lyapunov << ',' << cp.accuracy << '\n';
    }
    return out.str();
}

}  // namespace ropm
