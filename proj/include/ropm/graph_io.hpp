#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ropm/graph.hpp"
#include "ropm/potts.hpp"

namespace ropm {

/// Raised for malformed DIMACS input. `line()` is 1-based; 0 means the error
/// is not tied to a specific line (e.g. the file has no problem line).
class DimacsError : public std::runtime_error {
public:
    enum class Kind {
        missing_problem_line,
        malformed_problem_line,
        duplicate_problem_line,
        malformed_edge_line,
        vertex_out_of_range,
        self_loop,
        unknown_line,
    };

    DimacsError(Kind kind, std::size_t line, const std::string& detail);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

struct DimacsDiagnostics {
    std::size_t declared_edges = 0;
    std::size_t duplicate_edges = 0;
    bool edge_count_mismatch = false;
};

/// Parses DIMACS .col text (`c` comments, `p edge n m`, 1-based `e u v`).
/// Repeated edges (in either orientation) are dropped and counted in `diag`.
Graph parse_dimacs(std::istream& in, DimacsDiagnostics* diag = nullptr);
Graph parse_dimacs_string(const std::string& text, DimacsDiagnostics* diag = nullptr);
Graph read_dimacs_file(const std::filesystem::path& path, DimacsDiagnostics* diag = nullptr);

void write_dimacs(std::ostream& out, const Graph& graph, const std::string& comment = {});
std::string write_dimacs_string(const Graph& graph, const std::string& comment = {});

/// Random graph built around a hidden proper k-coloring.
struct PlantedInstance {
    Graph graph;
    Coloring planted;
    int k = 3;
    std::uint64_t seed = 0;
};

/// Draws a uniform color per vertex, then m distinct edges uniformly from the
/// pairs whose planted colors differ. Throws std::invalid_argument when m
/// exceeds the number of such pairs. Deterministic in (n, m, k, seed).
PlantedInstance gen_planted(std::size_t n, std::size_t m, int k, std::uint64_t seed);

/// Sidecar record {"n", "m", "k", "seed", "planted"}.
nlohmann::json planted_to_json(const PlantedInstance& inst);

}  // namespace ropm
