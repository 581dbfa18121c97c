#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "ropm/graph.hpp"

namespace ropm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Discrete spin assignment, one spin in [0, num_phases) per vertex.
struct Coloring {
    std::vector<int> spins;
    int num_phases = 3;

    friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// Continuous oscillator phases, kept canonical in [0, 2*pi).
struct PhaseState {
    std::vector<double> phases;
    double time = 0.0;
};

/// Maps any real angle into [0, 2*pi).
[[nodiscard]] double canonical_phase(double theta) noexcept;

/// Shortest distance between two angles on the circle, in [0, pi].
[[nodiscard]] double circular_distance(double a, double b) noexcept;

/// Standard Potts energy: sum of J_ij over edges whose endpoints share a spin.
/// With unit weights this is the number of conflicting edges.
[[nodiscard]] double delta_energy(const Graph& graph, const Coloring& coloring);

/// Vector Potts energy: sum of J_ij cos(theta_i - theta_j) over edges.
[[nodiscard]] double vector_energy(const Graph& graph, const PhaseState& state);

/// Lattice angle 2*pi*spin/n_phases.
[[nodiscard]] double lattice_phase(int spin, int n_phases);

/// cos(2*pi*k/n_phases) with the rational cases (multiples of 60 and 90
/// degrees) returned exactly, so lattice energies sum without rounding error.
[[nodiscard]] double lattice_cos(int k, int n_phases) noexcept;

/// Vector energy of a discrete coloring placed on the lattice, computed from
/// lattice_cos so integer/half-integer results are exact.
[[nodiscard]] double lattice_energy(const Graph& graph, const Coloring& coloring);

/// Nearest lattice spin per vertex. Exact ties (distance pi/N) go to the
/// lower spin index.
[[nodiscard]] Coloring quantize(const PhaseState& state, int n_phases);

/// Fraction of edges whose endpoints have different spins; 1.0 for an
/// edgeless graph.
[[nodiscard]] double accuracy(const Graph& graph, const Coloring& coloring);

/// L = K_c * sum J cos(theta_i - theta_j) - (K_s / N) * sum cos(N theta_i).
/// The phase dynamics descend this function when the SHIL stimulus is not
/// detuned.
[[nodiscard]] double lyapunov(const Graph& graph, const PhaseState& state, double coupling_gain,
                              double shil_gain, int n_phases);

/// Mean over vertices of the circular distance (radians) to the nearest
/// point of the lattice rotated by `offset`, i.e. {(2*pi*s + offset) / N}.
[[nodiscard]] double mean_lattice_deviation(const PhaseState& state, int n_phases,
                                            double offset = 0.0);

}  // namespace ropm
