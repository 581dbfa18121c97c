#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "ropm/dynamics.hpp"
#include "ropm/graph_io.hpp"

using namespace ropm;

namespace {

const double pi = std::numbers::pi;

Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v});
    return Graph(n, edges);
}

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

DynamicsParams small_params() {
    DynamicsParams p;
    p.coupling_gain = 1.0;
    p.shil_gain = 2.0;
    p.t_max = 40.0;
    return p;
}

// couplings alone for 5 cycles: enough for nearly coincident starting pairs to
// separate before SHIL can pin them to the same lattice point
ShilSchedule early_schedule() {
    ShilSchedule s;
    s.t_on = 5.0;
    s.ramp = 5.0;
    return s;
}

}  // namespace

TEST_CASE("rhs examples") {
    const Graph edge(2, {{0, 1}});
    const auto d = rhs(edge, PhaseState{{0.0, 2 * pi / 3}, 0.0}, 1.0, 0.0, 3, 0.0, 0.0);
    CHECK(d[0] == doctest::Approx(-std::sqrt(3.0) / 2));
    CHECK(d[1] == doctest::Approx(std::sqrt(3.0) / 2));

    const Graph k3 = triangle();
    for (int N = 2; N <= 6; ++N) {
        PhaseState s;
        for (int i = 0; i < 3; ++i) s.phases.push_back(lattice_phase((i * 5) % N, N));
        for (double v : rhs(k3, s, 0.0, 4.0, N, 0.0, 3.0)) CHECK(std::abs(v) < 1e-12);
    }

    CHECK_THROWS_AS((void)rhs(k3, PhaseState{{0.0}, 0.0}, 1, 1, 3, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)rhs(k3, PhaseState{{0.0, 1.0, 2.0}, 0.0}, 1, -1, 3, 0, 0),
                    std::invalid_argument);
}

TEST_CASE("rhs is minus the finite-difference gradient of the Lyapunov function") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    std::uniform_real_distribution<double> gain(0.0, 3.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 2 + trial % 3;
        const Graph g = random_graph(3 + static_cast<std::size_t>(trial % 8), 0.5, rng);
        PhaseState s;
        for (std::size_t i = 0; i < g.num_vertices(); ++i) s.phases.push_back(angle(rng));
        const double kc = gain(rng), ks = gain(rng);
        const auto d = rhs(g, s, kc, ks, N, 0.0, 0.0);
        for (std::size_t i = 0; i < g.num_vertices(); ++i) {
            PhaseState plus = s, minus = s;
            plus.phases[i] += h;
            minus.phases[i] -= h;
            const double grad = (lyapunov(g, plus, kc, ks, N) - lyapunov(g, minus, kc, ks, N)) / (2 * h);
            CHECK(std::abs(d[i] + grad) < 1e-6);
        }
    }
}

TEST_CASE("random_init") {
    const auto a = random_init(50, 9);
    CHECK(a.phases == random_init(50, 9).phases);
    CHECK(a.phases != random_init(50, 10).phases);
    for (double x : random_init(1000, 1).phases) {
        CHECK(x >= 0.0);
        CHECK(x < 2 * pi);
    }

    // chi-square over 36 bins; 57.342 is the 0.99 quantile with 35 degrees of freedom
    const auto big = random_init(100000, 4242);
    std::vector<double> counts(36, 0.0);
    for (double x : big.phases) counts[std::min<std::size_t>(35, static_cast<std::size_t>(x / (2 * pi) * 36))] += 1;
    const double expected = 100000.0 / 36;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 57.342);
}

TEST_CASE("integrate basics") {
    const Graph k3 = triangle();
    auto params = small_params();

    SUBCASE("t_max = 0 keeps only the initial checkpoint") {
        params.t_max = 0.0;
        const auto init = random_init(3, 1);
        const auto traj = integrate(k3, init, params, early_schedule(), 1);
        REQUIRE(traj.checkpoints.size() == 1);
        CHECK(traj.checkpoints[0].time == 0.0);
        CHECK(traj.checkpoints[0].phases == init.phases);
        CHECK(traj.steps == 0);
    }
    SUBCASE("checkpoints are strictly increasing and end at t_max") {
        params.t_max = 10.3;
        const auto traj = integrate(k3, random_init(3, 1), params, early_schedule(), 1);
        for (std::size_t i = 1; i < traj.checkpoints.size(); ++i)
            CHECK(traj.checkpoints[i].time > traj.checkpoints[i - 1].time);
        CHECK(traj.checkpoints.back().time == doctest::Approx(10.3));
        CHECK(traj.checkpoints.size() == 22);  // 0, 0.5, ..., 10.0, 10.3
        for (const auto& cp : traj.checkpoints)
            for (double x : cp.phases) CHECK((x >= 0.0 && x < 2 * pi));
    }
    SUBCASE("record_phases = false keeps only the final phases") {
        const auto traj = integrate(k3, random_init(3, 1), params, early_schedule(), 1, {false, {}});
        CHECK(traj.checkpoints.front().phases.empty());
        CHECK(traj.checkpoints.back().phases.size() == 3);
    }
    SUBCASE("noise is deterministic per seed") {
        params.noise_amplitude = 0.3;
        const auto a = integrate(k3, random_init(3, 1), params, early_schedule(), 5);
        const auto b = integrate(k3, random_init(3, 1), params, early_schedule(), 5);
        const auto c = integrate(k3, random_init(3, 1), params, early_schedule(), 6);
        CHECK(a.checkpoints.back().phases == b.checkpoints.back().phases);
        CHECK(a.checkpoints.back().phases != c.checkpoints.back().phases);
    }
    SUBCASE("divergence names the time") {
        params.shil_gain = 1e308;
        params.dt = 1.0;
        params.sample_stride = 1.0;
        ShilSchedule on;
        on.t_on = 0.0;
        on.ramp = 0.0;
        CHECK_THROWS_AS((void)integrate(k3, random_init(3, 1), params, on, 1), DivergenceError);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS((void)integrate(k3, random_init(4, 1), params, early_schedule(), 1),
                        std::invalid_argument);
        params.dt = 0.0;
        CHECK_THROWS_AS((void)integrate(k3, random_init(3, 1), params, early_schedule(), 1),
                        std::invalid_argument);
    }
}

TEST_CASE("schedule envelope") {
    ShilSchedule s;
    s.t_on = 2.0;
    s.ramp = 4.0;
    CHECK(s.envelope(1.0) == 0.0);
    CHECK(s.envelope(4.0) == doctest::Approx(0.5));
    CHECK(s.envelope(100.0) == 1.0);
    s.mode = ShilSchedule::Mode::square_wave;
    s.period = 2.0;
    s.duty = 0.25;
    CHECK(s.envelope(6.2) == 1.0);
    CHECK(s.envelope(6.7) == 0.0);
    CHECK(s.envelope(8.1) == 1.0);
    s.mode = ShilSchedule::Mode::off;
    CHECK(s.envelope(100.0) == 0.0);
    s.ramp = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("K3 settles into a proper coloring") {
    const Graph k3 = triangle();
    int proper = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto traj = integrate(k3, random_init(3, seed), small_params(), early_schedule(), seed);
        proper += traj.checkpoints.back().accuracy == 1.0;
    }
    CHECK(proper >= 95);
}

TEST_CASE("N = 2 on bipartite graphs") {
    auto params = small_params();
    params.n_phases = 2;
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto inst = gen_planted(12, 16, 2, seed);
        const auto traj = integrate(inst.graph, random_init(12, seed), params, early_schedule(), seed);
        solved += traj.checkpoints.back().accuracy == 1.0;
    }
    CHECK(solved >= 90);
}

TEST_CASE("lattice points are stable fixed points when couplings are off") {
    const Graph k3 = triangle();
    auto params = small_params();
    params.coupling_gain = 0.0;
    ShilSchedule on;
    on.t_on = 0.0;
    on.ramp = 0.0;
    std::mt19937_64 rng(8);
    for (int N = 2; N <= 5; ++N) {
        params.n_phases = N;
        std::uniform_real_distribution<double> kick(-0.9 * pi / N, 0.9 * pi / N);
        PhaseState exact, kicked;
        for (int i = 0; i < 3; ++i) {
            const double base = lattice_phase(i % N, N);
            exact.phases.push_back(base);
            kicked.phases.push_back(canonical_phase(base + kick(rng)));
        }
        const auto still = integrate(k3, exact, params, on, 1);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(circular_distance(still.checkpoints.back().phases[i], exact.phases[i]) < 1e-12);
        const auto back = integrate(k3, kicked, params, on, 1);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(circular_distance(back.checkpoints.back().phases[i], exact.phases[i]) < 1e-6);
    }
}

TEST_CASE("rotating the start by a lattice step rotates the trajectory") {
    std::mt19937_64 rng(77);
    for (int N = 2; N <= 4; ++N) {
        const auto inst = gen_planted(12, 20, N, static_cast<std::uint64_t>(N));
        auto params = small_params();
        params.n_phases = N;
        params.t_max = 20.0;
        const auto init = random_init(12, 3);
        for (int k = 1; k < N; ++k) {
            PhaseState rotated = init;
            for (double& x : rotated.phases) x = canonical_phase(x + lattice_phase(k, N));
            const auto a = integrate(inst.graph, init, params, early_schedule(), 1);
            const auto b = integrate(inst.graph, rotated, params, early_schedule(), 1);
            REQUIRE(a.checkpoints.size() == b.checkpoints.size());
            for (std::size_t c = 0; c < a.checkpoints.size(); ++c) {
                const auto& pa = a.checkpoints[c].phases;
                const auto& pb = b.checkpoints[c].phases;
                for (std::size_t i = 0; i < pa.size(); ++i)
                    CHECK(circular_distance(pa[i] + lattice_phase(k, N), pb[i]) < 1e-8);
                CHECK(a.checkpoints[c].lyapunov == doctest::Approx(b.checkpoints[c].lyapunov));
            }
        }
    }
}

TEST_CASE("Lyapunov descent while the envelope is constant") {
    std::mt19937_64 rng(31);
    for (std::uint64_t run = 0; run < 20; ++run) {
        const Graph g = random_graph(6 + run % 10, 0.35, rng);
        auto params = small_params();
        params.n_phases = 2 + static_cast<int>(run % 4);
        params.t_max = 20.0;
        ShilSchedule sched = early_schedule();
        if (run % 2) {
            sched.mode = ShilSchedule::Mode::square_wave;
            sched.period = 3.0;
        }
        const auto traj = integrate(g, random_init(g.num_vertices(), run), params, sched, run);
        const double steps_per_checkpoint = traj.stride / params.dt;
        const double tol = 1e-6 * static_cast<double>(g.num_edges()) * steps_per_checkpoint;
        std::size_t checked = 0;
        for (std::size_t c = 1; c < traj.checkpoints.size(); ++c) {
            const auto& prev = traj.checkpoints[c - 1];
            const auto& next = traj.checkpoints[c];
            if (!sched.constant_on(prev.time, next.time)) continue;
            CHECK(next.lyapunov <= prev.lyapunov + tol);
            ++checked;
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("lattice deviation shrinks as SHIL dominates") {
    const auto inst = gen_planted(30, 60, 3, 12);
    const auto init = random_init(30, 12);
    double previous = pi;
    for (double ratio : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        auto params = small_params();
        params.coupling_gain = 1.0;
        params.shil_gain = ratio;
        params.t_max = 60.0;
        const auto traj = integrate(inst.graph, init, params, early_schedule(), 1);
        const double dev = traj.checkpoints.back().lattice_deviation;
        CHECK(dev <= previous + 1e-9);
        previous = dev;
    }
}

TEST_CASE("detect_convergence") {
    auto make = [](std::vector<std::vector<int>> colorings, std::vector<double> rates) {
        Trajectory t;
        t.stride = 1.0;
        for (std::size_t i = 0; i < colorings.size(); ++i) {
            Checkpoint cp;
            cp.time = static_cast<double>(i);
            cp.rounded = Coloring{colorings[i], 3};
            cp.max_rate = rates[i];
            t.checkpoints.push_back(cp);
        }
        return t;
    };
    const auto steady = make({{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {0, 0, 0, 0});
    CHECK(detect_convergence(steady, 3, 0.1) == std::optional<double>(2.0));
    CHECK(detect_convergence(steady, 4, 0.1) == std::optional<double>(3.0));

    const auto flipping = make({{0, 1}, {1, 0}, {0, 1}, {1, 0}}, {0, 0, 0, 0});
    CHECK_FALSE(detect_convergence(flipping, 2, 0.1).has_value());

    const auto moving = make({{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {1, 1, 1, 0.05});
    CHECK(detect_convergence(moving, 2, 0.1) == std::optional<double>(3.0));
    CHECK_THROWS_AS((void)detect_convergence(steady, 1, 0.1), std::invalid_argument);

    // real run at lattice phases with couplings off converges at the W-th checkpoint
    const Graph k3 = triangle();
    auto params = small_params();
    params.coupling_gain = 0.0;
    const PhaseState lattice{{0.0, lattice_phase(1, 3), lattice_phase(2, 3)}, 0.0};
    const auto traj = integrate(k3, lattice, params, early_schedule(), 1);
    CHECK(detect_convergence(traj, 4, 1e-9) == std::optional<double>(3 * traj.stride));
}

TEST_CASE("trajectory_csv") {
    auto params = small_params();
    params.t_max = 1.0;
    const auto traj = integrate(triangle(), random_init(3, 1), params, early_schedule(), 1);
    const auto with = trajectory_csv(traj, true);
    CHECK(with.rfind("time,theta_0,theta_1,theta_2,lyapunov,accuracy\n", 0) == 0);
    CHECK(std::count(with.begin(), with.end(), '\n') == 4);
    CHECK(trajectory_csv(traj, false).rfind("time,lyapunov,accuracy\n", 0) == 0);
}
