#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ropm {

using Vertex = std::uint32_t;

/// Unordered edge, stored with u < v.
struct Edge {
    Vertex u;
    Vertex v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Each vertex becomes one oscillator and each edge
/// one coupling J_ij (unit, repulsive, unless weights are given).
///
/// The constructor normalizes every edge to u < v and rejects self-loops,
/// duplicates, out-of-range endpoints and non-finite weights with
/// std::invalid_argument.
class Graph {
public:
    Graph() = default;
    Graph(std::size_t num_vertices, std::vector<Edge> edges,
          std::vector<double> weights = {});

    [[nodiscard]] std::size_t num_vertices() const noexcept { return num_vertices_; }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

    [[nodiscard]] bool weighted() const noexcept { return !weights_.empty(); }
    [[nodiscard]] double weight(std::size_t edge_index) const noexcept {
        return weights_.empty() ? 1.0 : weights_[edge_index];
    }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    /// Per-vertex degree.
    [[nodiscard]] std::vector<std::size_t> degrees() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::size_t num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> weights_;
};

/// Incidence lists in CSR form. For every vertex the incident edges appear in
/// edge-list order, so per-vertex sums reproduce an edge-order scan exactly.
struct Incidence {
    struct Entry {
        std::uint32_t edge;
        Vertex other;
        bool is_lower;  // this vertex is the edge's u endpoint
    };
    std::vector<std::size_t> offsets;  // size num_vertices + 1
    std::vector<Entry> entries;

    explicit Incidence(const Graph& graph);

    [[nodiscard]] std::span<const Entry> of(Vertex v) const noexcept {
        return {entries.data() + offsets[v], entries.data() + offsets[v + 1]};
    }
};

}  // namespace ropm
