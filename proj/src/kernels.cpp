#include "ropm/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace ropm::kernels {

namespace {

inline double shil_force(double theta, const RhsTerms& t) {
    if (t.shil_gain == 0.0) return 0.0;
    return t.shil_gain * std::sin(t.n_phases * theta - t.detuning * t.time);
}

}  // namespace

void rhs_serial(const Graph& graph, std::span<const double> theta, const RhsTerms& terms,
                std::span<double> out) {
    const auto edges = graph.edges();
    const std::size_t n = graph.num_vertices();
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double term = graph.weight(e) * std::sin(theta[edges[e].u] - theta[edges[e].v]);
        out[edges[e].u] += term;
        out[edges[e].v] += -term;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = terms.coupling_gain * out[i] - shil_force(theta[i], terms);
    }
}

void rhs_openmp(const Graph& graph, const Incidence& incidence, std::span<const double> theta,
                const RhsTerms& terms, std::span<double> edge_scratch, std::span<double> out) {
    const auto edges = graph.edges();
    const auto m = static_cast<std::ptrdiff_t>(edges.size());
    const auto n = static_cast<std::ptrdiff_t>(graph.num_vertices());

#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (std::ptrdiff_t e = 0; e < m; ++e) {
            const auto& edge = edges[static_cast<std::size_t>(e)];
            edge_scratch[static_cast<std::size_t>(e)] =
                graph.weight(static_cast<std::size_t>(e)) * std::sin(theta[edge.u] - theta[edge.v]);
        }
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (const auto& entry : incidence.of(static_cast<Vertex>(i))) {
                const double term = edge_scratch[entry.edge];
                acc += entry.is_lower ? term : -term;
            }
            const auto vi = static_cast<std::size_t>(i);
            out[vi] = terms.coupling_gain * acc - shil_force(theta[vi], terms);
        }
    }
}

RhsEvaluator::RhsEvaluator(const Graph& graph, Policy policy)
    : graph_(&graph),
      policy_(policy),
      incidence_(graph),
      edge_scratch_(policy == Policy::openmp ? graph.num_edges() : 0) {}

void RhsEvaluator::operator()(std::span<const double> theta, const RhsTerms& terms,
                              std::span<double> out) {
    if (policy_ == Policy::openmp) {
        rhs_openmp(*graph_, incidence_, theta, terms, edge_scratch_, out);
    } else {
        rhs_serial(*graph_, theta, terms, out);
    }
}

}  // namespace ropm::kernels
