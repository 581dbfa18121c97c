#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ropm/graph.hpp"
#include "ropm/potts.hpp"

namespace ropm {

/// Largest configuration space the exhaustive routines will walk.
inline constexpr std::uint64_t kMaxEnumeratedStates = 10'000'000;

/// Vector-Potts energies of every lattice configuration.
struct Landscape {
    std::uint64_t n_states = 0;
    std::vector<double> energies;  // ascending
    double global_min = 0.0;
    std::uint64_t n_global_min = 0;
    std::uint64_t n_local_min = 0;  // no single-vertex spin change lowers the energy
    double max_energy = 0.0;
    std::uint64_t n_max = 0;
};

/// Throws std::length_error when N^|V| exceeds kMaxEnumeratedStates.
[[nodiscard]] Landscape enumerate_landscape(const Graph& graph, int n_phases);

/// Sorted-index,energy rows.
[[nodiscard]] std::string landscape_csv(const Landscape& landscape);

struct ExactColorResult {
    enum class Status { sat, unsat, budget_exhausted };
    Status status = Status::unsat;
    std::optional<Coloring> coloring;
    std::uint64_t nodes = 0;
};

/// DSATUR-ordered backtracking. Stops with budget_exhausted after `node_budget`
/// search nodes.
[[nodiscard]] ExactColorResult exact_color(const Graph& graph, int k,
                                           std::uint64_t node_budget = 50'000'000);

/// Number of proper k-colorings, counted by exhaustive search. Throws
/// std::length_error when k^|V| exceeds kMaxEnumeratedStates.
[[nodiscard]] std::uint64_t count_proper_colorings(const Graph& graph, int k);

}  // namespace ropm
