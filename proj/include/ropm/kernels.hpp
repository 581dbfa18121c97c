#pragma once

// Phase-velocity kernels. The serial edge scan is the reference; the OpenMP
// variant must match it bit for bit, which holds because every vertex sums its
// incident edge terms in edge-list order starting from zero.

#include <span>
#include <vector>

#include "ropm/graph.hpp"

namespace ropm::kernels {

struct RhsTerms {
    double coupling_gain = 0.0;
    double shil_gain = 0.0;  // instantaneous, i.e. envelope * peak
    int n_phases = 3;
    double detuning = 0.0;
    double time = 0.0;
};

/// dtheta_i/dt = K_c sum_j J_ij sin(theta_i - theta_j) - K_s sin(N theta_i - delta t)
void rhs_serial(const Graph& graph, std::span<const double> theta, const RhsTerms& terms,
                std::span<double> out);

/// Same result as rhs_serial. `edge_scratch` must hold graph.num_edges() values.
void rhs_openmp(const Graph& graph, const Incidence& incidence, std::span<const double> theta,
                const RhsTerms& terms, std::span<double> edge_scratch, std::span<double> out);

/// Reusable buffers for repeated rhs evaluation on one graph.
class RhsEvaluator {
public:
    enum class Policy { serial, openmp };

    RhsEvaluator(const Graph& graph, Policy policy);

    void operator()(std::span<const double> theta, const RhsTerms& terms, std::span<double> out);

    [[nodiscard]] Policy policy() const noexcept { return policy_; }

private:
    const Graph* graph_;
    Policy policy_;
    Incidence incidence_;
    std::vector<double> edge_scratch_;
};

}  // namespace ropm::kernels
