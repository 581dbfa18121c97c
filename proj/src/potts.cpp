#include "ropm/potts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ropm {

namespace {

void require_length(const Graph& graph, std::size_t length, const char* what) {
    if (length != graph.num_vertices()) {
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(length) +
                                    " does not match " + std::to_string(graph.num_vertices()) +
                                    " vertices");
    }
}

void require_phases(int n_phases) {
    if (n_phases < 2) {
        throw std::invalid_argument("number of phases must be >= 2, got " +
                                    std::to_string(n_phases));
    }
}

void require_finite(const PhaseState& state) {
    for (std::size_t i = 0; i < state.phases.size(); ++i) {
        if (!std::isfinite(state.phases[i])) {
            throw std::invalid_argument("non-finite phase at vertex " + std::to_string(i));
        }
    }
}

}  // namespace

double canonical_phase(double theta) noexcept {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round back up to exactly 2*pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double circular_distance(double a, double b) noexcept {
    const double d = canonical_phase(a - b);
    return d > std::numbers::pi ? kTwoPi - d : d;
}

double delta_energy(const Graph& graph, const Coloring& coloring) {
    require_length(graph, coloring.spins.size(), "delta_energy");
    const auto edges = graph.edges();
    double energy = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (coloring.spins[edges[i].u] == coloring.spins[edges[i].v]) energy += graph.weight(i);
    }
    return energy;
}

double vector_energy(const Graph& graph, const PhaseState& state) {
    require_length(graph, state.phases.size(), "vector_energy");
    require_finite(state);
    const auto edges = graph.edges();
    const auto& th = state.phases;
    double energy = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        energy += graph.weight(i) * std::cos(th[edges[i].u] - th[edges[i].v]);
    }
    return energy;
}

double lattice_phase(int spin, int n_phases) {
    require_phases(n_phases);
    if (spin < 0 || spin >= n_phases) {
        throw std::out_of_range("spin " + std::to_string(spin) + " outside [0, " +
                                std::to_string(n_phases) + ")");
    }
    return kTwoPi * spin / n_phases;
}

double lattice_cos(int k, int n_phases) noexcept {
    k %= n_phases;
    if (k < 0) k += n_phases;
    // angle = 30 degrees * twelfths when that is integral
    if ((12 * k) % n_phases == 0) {
        switch ((12 * k / n_phases) % 12) {
            case 0: return 1.0;
            case 2: case 10: return 0.5;
            case 3: case 9: return 0.0;
            case 4: case 8: return -0.5;
            case 6: return -1.0;
            default: break;
        }
    }
    return std::cos(kTwoPi * k / n_phases);
}

double lattice_energy(const Graph& graph, const Coloring& coloring) {
    require_length(graph, coloring.spins.size(), "lattice_energy");
    const auto edges = graph.edges();
    double energy = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int diff = coloring.spins[edges[i].u] - coloring.spins[edges[i].v];
        energy += graph.weight(i) * lattice_cos(diff, coloring.num_phases);
    }
    return energy;
}

Coloring quantize(const PhaseState& state, int n_phases) {
    require_phases(n_phases);
    require_finite(state);
    Coloring out;
    out.num_phases = n_phases;
    out.spins.resize(state.phases.size());
    // Boundary midpoints are not representable exactly (pi/N is irrational), so
    // positions within kTie of a midpoint count as ties.
    constexpr double kTie = 1e-12;
    for (std::size_t i = 0; i < state.phases.size(); ++i) {
        const double pos = canonical_phase(state.phases[i]) * n_phases / kTwoPi;
        const double base = std::floor(pos);
        const double frac = pos - base;
        const int lo = static_cast<int>(base) % n_phases;
        const int hi = (lo + 1) % n_phases;
        if (std::abs(frac - 0.5) <= kTie) {
            out.spins[i] = std::min(lo, hi);
        } else {
            out.spins[i] = frac < 0.5 ? lo : hi;
        }
    }
    return out;
}

double accuracy(const Graph& graph, const Coloring& coloring) {
    require_length(graph, coloring.spins.size(), "accuracy");
    if (graph.num_edges() == 0) return 1.0;
    std::size_t satisfied = 0;
    for (const Edge& e : graph.edges()) {
        if (coloring.spins[e.u] != coloring.spins[e.v]) ++satisfied;
    }
    return static_cast<double>(satisfied) / static_cast<double>(graph.num_edges());
}

double lyapunov(const Graph& graph, const PhaseState& state, double coupling_gain,
                double shil_gain, int n_phases) {
    require_phases(n_phases);
    if (coupling_gain < 0.0 || shil_gain < 0.0) {
        throw std::invalid_argument("lyapunov: gains must be non-negative");
    }
    double value = coupling_gain * vector_energy(graph, state);
    if (shil_gain != 0.0) {
        double well = 0.0;
        for (double theta : state.phases) well += std::cos(n_phases * theta);
        value -= shil_gain / n_phases * well;
    }
    return value;
}

double mean_lattice_deviation(const PhaseState& state, int n_phases, double offset) {
    require_phases(n_phases);
    if (state.phases.empty()) return 0.0;
    double total = 0.0;
    for (double theta : state.phases) {
        // distance of N*theta - offset to 0 on the circle, scaled back by N
        total += circular_distance(n_phases * theta - offset, 0.0) / n_phases;
    }
    return total / static_cast<double>(state.phases.size());
}

}  // namespace ropm
