#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "ropm/potts.hpp"

using namespace ropm;

namespace {

const double pi = std::numbers::pi;

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v});
    return Graph(n, edges);
}

// every spin assignment with N phases, in counting order
template <class F>
void for_each_coloring(std::size_t n, int N, F&& f) {
    Coloring c{std::vector<int>(n, 0), N};
    while (true) {
        f(c);
        std::size_t i = 0;
        while (i < n && ++c.spins[i] == N) c.spins[i++] = 0;
        if (i == n) break;
    }
}

PhaseState on_lattice(const Coloring& c) {
    PhaseState s;
    for (int spin : c.spins) s.phases.push_back(lattice_phase(spin, c.num_phases));
    return s;
}

}  // namespace

TEST_CASE("delta_energy") {
    const Graph k3 = triangle();
    CHECK(delta_energy(k3, Coloring{{0, 1, 2}, 3}) == 0.0);
    CHECK(delta_energy(k3, Coloring{{0, 0, 0}, 3}) == 3.0);
    CHECK(delta_energy(k3, Coloring{{0, 0, 1}, 3}) == 1.0);

    const Graph w(3, {{0, 1}, {1, 2}}, {2.5, -1.0});
    CHECK(delta_energy(w, Coloring{{1, 1, 1}, 3}) == 1.5);
    CHECK_THROWS_AS((void)delta_energy(k3, Coloring{{0, 1}, 3}), std::invalid_argument);
}

TEST_CASE("vector_energy") {
    const Graph k3 = triangle();
    CHECK(vector_energy(k3, PhaseState{{0.0, 2 * pi / 3, 4 * pi / 3}, 0.0}) ==
          doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(vector_energy(k3, PhaseState{{0.3, 0.3, 0.3}, 0.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS((void)vector_energy(k3, PhaseState{{0.0, 1.0}, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)vector_energy(k3, PhaseState{{0.0, 1.0, NAN}, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("lattice helpers") {
    CHECK(lattice_phase(1, 3) == doctest::Approx(2 * pi / 3));
    CHECK(lattice_phase(0, 5) == 0.0);
    CHECK_THROWS_AS((void)lattice_phase(3, 3), std::out_of_range);
    CHECK_THROWS_AS((void)lattice_phase(-1, 3), std::out_of_range);

    CHECK(lattice_cos(1, 3) == -0.5);
    CHECK(lattice_cos(-2, 3) == -0.5);
    CHECK(lattice_cos(1, 4) == 0.0);
    CHECK(lattice_cos(3, 6) == -1.0);
    for (int N = 2; N <= 9; ++N)
        for (int k = -N; k <= N; ++k)
            CHECK(lattice_cos(k, N) == doctest::Approx(std::cos(2 * pi * k / N)).epsilon(1e-15));

    CHECK(canonical_phase(-0.5) == doctest::Approx(2 * pi - 0.5));
    CHECK(canonical_phase(7 * pi) == doctest::Approx(pi));
    CHECK(circular_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
}

TEST_CASE("quantize examples") {
    CHECK(quantize(PhaseState{{0.1, 2.0, 4.3}, 0.0}, 3).spins == std::vector<int>{0, 1, 2});
    // pi/3 is equidistant from spins 0 and 1
    CHECK(quantize(PhaseState{{pi / 3}, 0.0}, 3).spins == std::vector<int>{0});
    CHECK(quantize(PhaseState{{pi}, 0.0}, 3).spins == std::vector<int>{1});
    // wrap-around: just below 2*pi rounds to spin 0
    CHECK(quantize(PhaseState{{2 * pi - 1e-3}, 0.0}, 3).spins == std::vector<int>{0});
    CHECK_THROWS_AS((void)quantize(PhaseState{{0.0}, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("quantize inverts lattice_phase for every spin") {
    for (int N = 2; N <= 8; ++N) {
        Coloring c{{}, N};
        for (int s = 0; s < N; ++s) c.spins.push_back(s);
        CHECK(quantize(on_lattice(c), N) == c);
    }
}

TEST_CASE("quantize picks the nearest lattice point") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int N = 2; N <= 8; ++N) {
        for (int trial = 0; trial < 500; ++trial) {
            const double theta = angle(rng);
            const int s = quantize(PhaseState{{theta}, 0.0}, N).spins[0];
            const double d = circular_distance(theta, lattice_phase(s, N));
            for (int other = 0; other < N; ++other)
                CHECK(d <= circular_distance(theta, lattice_phase(other, N)) + 1e-12);
        }
    }
}

TEST_CASE("accuracy") {
    const Graph k3 = triangle();
    CHECK(accuracy(k3, Coloring{{0, 1, 2}, 3}) == 1.0);
    CHECK(accuracy(k3, Coloring{{0, 0, 1}, 3}) == doctest::Approx(2.0 / 3.0));
    CHECK(accuracy(Graph(4, {}), Coloring{{0, 0, 0, 0}, 3}) == 1.0);
}

TEST_CASE("lattice energy is affine in the conflict count for N = 3") {
    // each edge contributes 1 when monochromatic and -1/2 otherwise
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
        const Graph g = random_graph(n, 0.5, rng);
        const double m = static_cast<double>(g.num_edges());
        for_each_coloring(n, 3, [&](const Coloring& c) {
            const double d = delta_energy(g, c);
            CHECK(lattice_energy(g, c) == 1.5 * d - 0.5 * m);
            CHECK(accuracy(g, c) == doctest::Approx(m == 0 ? 1.0 : 1.0 - d / m));
            CHECK(vector_energy(g, on_lattice(c)) == doctest::Approx(1.5 * d - 0.5 * m));
        });
    }
}

TEST_CASE("vector energy is invariant under global rotation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = random_graph(8, 0.4, rng);
        PhaseState s;
        for (int i = 0; i < 8; ++i) s.phases.push_back(angle(rng));
        PhaseState r = s;
        const double shift = angle(rng);
        for (double& x : r.phases) x = canonical_phase(x + shift);
        CHECK(vector_energy(g, r) == doctest::Approx(vector_energy(g, s)).epsilon(1e-12));
    }
}

TEST_CASE("lyapunov") {
    const Graph k3 = triangle();
    const PhaseState s{{0.0, 2 * pi / 3, 4 * pi / 3}, 0.0};
    // K_c * (-1.5) - (K_s / 3) * 3
    CHECK(lyapunov(k3, s, 1.0, 2.0, 3) == doctest::Approx(-3.5));
    CHECK(lyapunov(k3, s, 0.5, 0.0, 3) == doctest::Approx(-0.75));
    CHECK_THROWS_AS((void)lyapunov(k3, s, -1.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)lyapunov(k3, s, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("mean_lattice_deviation") {
    CHECK(mean_lattice_deviation(PhaseState{{0.0, 2 * pi / 3}, 0.0}, 3) == doctest::Approx(0.0));
    CHECK(mean_lattice_deviation(PhaseState{{0.1, 2 * pi / 3 - 0.3}, 0.0}, 3) ==
          doctest::Approx(0.2));
    CHECK(mean_lattice_deviation(PhaseState{{0.1 / 3}, 0.0}, 3, 0.1) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // uniform phases sit pi/(2N) away from the lattice on average
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    PhaseState s;
    for (int i = 0; i < 200000; ++i) s.phases.push_back(angle(rng));
    CHECK(mean_lattice_deviation(s, 3) == doctest::Approx(pi / 6).epsilon(5e-3));
}
