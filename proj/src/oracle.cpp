#include "ropm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ropm {

namespace {

std::uint64_t checked_power(int base, std::size_t exponent, const char* what) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        total *= static_cast<std::uint64_t>(base);
        if (total > kMaxEnumeratedStates) {
            throw std::length_error(std::string(what) + ": " + std::to_string(base) + "^" +
                                    std::to_string(exponent) + " states exceed the limit of " +
                                    std::to_string(kMaxEnumeratedStates));
        }
    }
    return total;
}

void decode(std::uint64_t index, int base, std::vector<int>& spins) {
    for (auto& s : spins) {
        s = static_cast<int>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
}

}  // namespace

Landscape enumerate_landscape(const Graph& graph, int n_phases) {
    if (n_phases < 2) throw std::invalid_argument("enumerate_landscape: need at least 2 phases");
    const std::size_t n = graph.num_vertices();
    const std::uint64_t total = checked_power(n_phases, n, "enumerate_landscape");
    const Incidence incidence(graph);
    const auto edges = graph.edges();

    double weight_scale = 1.0;
    for (std::size_t e = 0; e < edges.size(); ++e) weight_scale += std::abs(graph.weight(e));
    const double tol = 1e-9 * weight_scale;

    Landscape out;
    out.n_states = total;
    out.energies.resize(total);
    std::uint64_t local_minima = 0;

    const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel reduction(+ : local_minima)
    {
        std::vector<int> spins(n);
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < count; ++idx) {
            decode(static_cast<std::uint64_t>(idx), n_phases, spins);
            double energy = 0.0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                energy += graph.weight(e) *
                          lattice_cos(spins[edges[e].u] - spins[edges[e].v], n_phases);
            }
            out.energies[static_cast<std::size_t>(idx)] = energy;

            bool is_local_min = true;
            for (std::size_t v = 0; v < n && is_local_min; ++v) {
                const int current = spins[v];
                for (int alt = 0; alt < n_phases && is_local_min; ++alt) {
                    if (alt == current) continue;
                    double change = 0.0;
                    for (const auto& entry : incidence.of(static_cast<Vertex>(v))) {
                        const int other = spins[entry.other];
                        change += graph.weight(entry.edge) * (lattice_cos(alt - other, n_phases) -
                                                              lattice_cos(current - other, n_phases));
                    }
                    if (change < -tol) is_local_min = false;
                }
            }
            if (is_local_min) ++local_minima;
        }
    }
    out.n_local_min = local_minima;

    std::sort(out.energies.begin(), out.energies.end());
    out.global_min = out.energies.front();
    out.max_energy = out.energies.back();
    out.n_global_min = static_cast<std::uint64_t>(
        std::upper_bound(out.energies.begin(), out.energies.end(), out.global_min + tol) -
        out.energies.begin());
    out.n_max = static_cast<std::uint64_t>(
        out.energies.end() -
        std::lower_bound(out.energies.begin(), out.energies.end(), out.max_energy - tol));
    return out;
}

std::string landscape_csv(const Landscape& landscape) {
    std::ostringstream out;
    out << std::setprecision(17) << "index,energy\n";
    for (std::size_t i = 0; i < landscape.energies.size(); ++i) {
        out << i << ',' << landscape.energies[i] << '\n';
    }
    return out.str();
}

namespace {

class Dsatur {
public:
    Dsatur(const Graph& graph, int k, std::uint64_t budget)
        : graph_(graph),
          incidence_(graph),
          k_(k),
          budget_(budget),
          color_(graph.num_vertices(), -1),
          neighbor_colors_(graph.num_vertices() * static_cast<std::size_t>(k), 0),
          saturation_(graph.num_vertices(), 0),
          degree_(graph.degrees()) {}

    ExactColorResult run() {
        ExactColorResult result;
        bool exhausted = false;
        const bool found = search(0, 0, exhausted);
        result.nodes = nodes_;
        if (found) {
            result.status = ExactColorResult::Status::sat;
            result.coloring = Coloring{color_, std::max(2, k_)};
        } else {
            result.status = exhausted ? ExactColorResult::Status::budget_exhausted
                                      : ExactColorResult::Status::unsat;
        }
        return result;
    }

private:
    int& count(Vertex v, int c) { return neighbor_colors_[v * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c)]; }

    void assign(Vertex v, int c) {
        color_[v] = c;
        for (const auto& entry : incidence_.of(v)) {
            if (count(entry.other, c)++ == 0) ++saturation_[entry.other];
        }
    }

    void unassign(Vertex v) {
        const int c = color_[v];
        for (const auto& entry : incidence_.of(v)) {
            if (--count(entry.other, c) == 0) --saturation_[entry.other];
        }
        color_[v] = -1;
    }

    // highest saturation, then highest degree, then lowest index
    Vertex pick() const {
        Vertex best = 0;
        bool have = false;
        for (Vertex v = 0; v < graph_.num_vertices(); ++v) {
            if (color_[v] >= 0) continue;
            if (!have || saturation_[v] > saturation_[best] ||
                (saturation_[v] == saturation_[best] && degree_[v] > degree_[best])) {
                best = v;
                have = true;
            }
        }
        return best;
    }

    bool search(std::size_t colored, int used, bool& exhausted) {
        if (colored == graph_.num_vertices()) return true;
        if (++nodes_ > budget_) {
            exhausted = true;
            return false;
        }
        const Vertex v = pick();
        // new colors are interchangeable, so only the first unused one is tried
        const int limit = std::min(k_, used + 1);
        for (int c = 0; c < limit; ++c) {
            if (count(v, c) != 0) continue;
            assign(v, c);
            if (search(colored + 1, std::max(used, c + 1), exhausted)) return true;
            unassign(v);
            if (exhausted) return false;
        }
        return false;
    }

    const Graph& graph_;
    Incidence incidence_;
    int k_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<int> color_;
    std::vector<int> neighbor_colors_;
    std::vector<int> saturation_;
    std::vector<std::size_t> degree_;
};

}  // namespace

ExactColorResult exact_color(const Graph& graph, int k, std::uint64_t node_budget) {
    if (k < 1) throw std::invalid_argument("exact_color: k must be >= 1");
    return Dsatur(graph, k, node_budget).run();
}

std::uint64_t count_proper_colorings(const Graph& graph, int k) {
    if (k < 1) throw std::invalid_argument("count_proper_colorings: k must be >= 1");
    const std::size_t n = graph.num_vertices();
    checked_power(k, n, "count_proper_colorings");

    // neighbors with a smaller index, the only ones colored when v is reached
    std::vector<std::vector<Vertex>> earlier(n);
    for (const Edge& e : graph.edges()) earlier[e.v].push_back(e.u);

    std::vector<int> color(n, -1);
    std::uint64_t total = 0;
    auto recurse = [&](auto&& self, std::size_t v) -> void {
        if (v == n) {
            ++total;
            return;
        }
        for (int c = 0; c < k; ++c) {
            bool ok = true;
            for (Vertex u : earlier[v]) {
                if (color[u] == c) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            color[v] = c;
            self(self, v + 1);
        }
        color[v] = -1;
    };
    recurse(recurse, 0);
    return total;
}

}  // namespace ropm
