#include "ropm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ropm {

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges, std::vector<double> weights)
    : num_vertices_(num_vertices), edges_(std::move(edges)), weights_(std::move(weights)) {
    if (!weights_.empty() && weights_.size() != edges_.size()) {
        throw std::invalid_argument("graph: " + std::to_string(weights_.size()) +
                                    " weights for " + std::to_string(edges_.size()) + " edges");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        Edge& e = edges_[i];
        if (e.u == e.v) {
            throw std::invalid_argument("graph: self-loop on vertex " + std::to_string(e.u));
        }
        if (e.u >= num_vertices_ || e.v >= num_vertices_) {
            throw std::invalid_argument("graph: edge endpoint out of range (" + std::to_string(e.u) +
                                        ", " + std::to_string(e.v) + ")");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        const auto key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
        if (!seen.insert(key).second) {
            throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.u) + ", " +
                                        std::to_string(e.v) + ")");
        }
        if (!weights_.empty() && !std::isfinite(weights_[i])) {
            throw std::invalid_argument("graph: non-finite weight on edge " + std::to_string(i));
        }
    }
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> deg(num_vertices_, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

Incidence::Incidence(const Graph& graph) : offsets(graph.num_vertices() + 1, 0) {
    const auto edges = graph.edges();
    for (const Edge& e : edges) {
        ++offsets[e.u + 1];
        ++offsets[e.v + 1];
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    entries.resize(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        const auto idx = static_cast<std::uint32_t>(i);
        entries[cursor[e.u]++] = {idx, e.v, true};
        entries[cursor[e.v]++] = {idx, e.u, false};
    }
}

}  // namespace ropm
