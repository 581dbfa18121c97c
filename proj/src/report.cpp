#include "ropm/report.hpp"

#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ropm {

using nlohmann::json;

namespace {

std::string integrator_name(Integrator integrator) {
    return integrator == Integrator::euler ? "euler" : "rk4";
}

Integrator parse_integrator(const std::string& name) {
    if (name == "rk4") return Integrator::rk4;
    if (name == "euler") return Integrator::euler;
    throw std::invalid_argument("unknown integrator '" + name + "'");
}

std::string schedule_mode_name(ShilSchedule::Mode mode) {
    switch (mode) {
        case ShilSchedule::Mode::off: return "off";
        case ShilSchedule::Mode::constant: return "constant";
        case ShilSchedule::Mode::square_wave: return "square_wave";
    }
    return "constant";
}

ShilSchedule::Mode parse_schedule_mode(const std::string& name) {
    if (name == "off") return ShilSchedule::Mode::off;
    if (name == "constant") return ShilSchedule::Mode::constant;
    if (name == "square_wave" || name == "square-wave") return ShilSchedule::Mode::square_wave;
    throw std::invalid_argument("unknown SHIL schedule mode '" + name + "'");
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

std::string csv_number(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

}  // namespace

json to_json(const DynamicsParams& p) {
    return {{"coupling_gain", p.coupling_gain}, {"shil_gain", p.shil_gain},
            {"n_phases", p.n_phases},           {"noise_amplitude", p.noise_amplitude},
            {"detuning", p.detuning},           {"dt", p.dt},
            {"t_max", p.t_max},                 {"sample_stride", p.sample_stride},
            {"integrator", integrator_name(p.integrator)}};
}

json to_json(const ShilSchedule& s) {
    return {{"t_on", s.t_on},
            {"ramp", s.ramp},
            {"mode", schedule_mode_name(s.mode)},
            {"period", s.period},
            {"duty", s.duty}};
}

json to_json(const SolveConfig& c) {
    return {{"params", to_json(c.params)},
            {"schedule", to_json(c.schedule)},
            {"convergence", {{"window", c.convergence.window}, {"eps", c.convergence.eps}}},
            {"iterations", c.iterations},
            {"base_seed", c.base_seed}};
}

json to_json(const RunRecord& r) {
    json j = {{"seed", r.seed},
              {"accuracy", r.accuracy},
              {"delta_energy", r.delta_energy},
              {"vector_energy", r.vector_energy},
              {"lattice_deviation_deg", r.lattice_deviation_deg},
              {"cycles", nullptr}};
    if (r.cycles) j["cycles"] = *r.cycles;
    return j;
}

json to_json(const Aggregate& a) {
    json j = {{"runs", a.runs},
              {"average_accuracy", a.average_accuracy},
              {"best_accuracy", a.best_accuracy},
              {"worst_accuracy", a.worst_accuracy},
              {"histogram_bin_width", 0.01},
              {"histogram", a.histogram},
              {"converged", a.converged},
              {"not_converged", a.not_converged},
              {"mean_cycles", nullptr}};
    if (a.mean_cycles) j["mean_cycles"] = *a.mean_cycles;
    return j;
}

DynamicsParams params_from_json(const json& j, DynamicsParams p) {
    reject_unknown(j,
                   {"coupling_gain", "shil_gain", "n_phases", "noise_amplitude", "detuning", "dt",
                    "t_max", "sample_stride", "integrator"},
                   "params");
    read(j, "coupling_gain", p.coupling_gain);
    read(j, "shil_gain", p.shil_gain);
    read(j, "n_phases", p.n_phases);
    read(j, "noise_amplitude", p.noise_amplitude);
    read(j, "detuning", p.detuning);
    read(j, "dt", p.dt);
    read(j, "t_max", p.t_max);
    read(j, "sample_stride", p.sample_stride);
    std::string integrator = integrator_name(p.integrator);
    read(j, "integrator", integrator);
    p.integrator = parse_integrator(integrator);
    return p;
}

ShilSchedule schedule_from_json(const json& j, ShilSchedule s) {
    reject_unknown(j, {"t_on", "ramp", "mode", "period", "duty"}, "schedule");
    read(j, "t_on", s.t_on);
    read(j, "ramp", s.ramp);
    read(j, "period", s.period);
    read(j, "duty", s.duty);
    std::string mode = schedule_mode_name(s.mode);
    read(j, "mode", mode);
    s.mode = parse_schedule_mode(mode);
    return s;
}

SolveConfig config_from_json(const json& j, SolveConfig c) {
    reject_unknown(j, {"params", "schedule", "convergence", "iterations", "base_seed", "mode",
                       "deltas"},
                   "config");
    if (j.contains("params")) c.params = params_from_json(j.at("params"), c.params);
    if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"), c.schedule);
    if (j.contains("convergence")) {
        const json& conv = j.at("convergence");
        reject_unknown(conv, {"window", "eps"}, "convergence");
        read(conv, "window", c.convergence.window);
        read(conv, "eps", c.convergence.eps);
    }
    read(j, "iterations", c.iterations);
    read(j, "base_seed", c.base_seed);
    return c;
}

json solve_report_json(const std::string& benchmark, const SolveConfig& config,
                       const SolveReport& report, const std::string& mode) {
    json cfg = to_json(config);
    cfg["mode"] = mode;
    json runs = json::array();
    for (const auto& r : report.runs) runs.push_back(to_json(r));
    return {{"benchmark", benchmark},
            {"config", std::move(cfg)},
            {"runs", std::move(runs)},
            {"aggregate", to_json(report.aggregate)}};
}

std::string runs_csv(const SolveReport& report) {
    std::ostringstream out;
    out << "seed,accuracy,delta_energy,vector_energy,lattice_deviation_deg,cycles\n";
    for (const auto& r : report.runs) {
        out << r.seed << ',' << csv_number(r.accuracy) << ',' << csv_number(r.delta_energy) << ','
            << csv_number(r.vector_energy) << ',' << csv_number(r.lattice_deviation_deg) << ','
            << (r.cycles ? csv_number(*r.cycles) : std::string()) << '\n';
    }
    return out.str();
}

std::string histogram_csv(const Aggregate& aggregate) {
    std::ostringstream out;
    out << "bin_lower,bin_upper,count\n";
    for (std::size_t b = 0; b < aggregate.histogram.size(); ++b) {
        out << csv_number(static_cast<double>(b) / 100.0) << ','
            << csv_number(static_cast<double>(b + 1) / 100.0) << ',' << aggregate.histogram[b] << '\n';
    }
    return out.str();
}

BenchRow bench_row(const std::string& benchmark, const Graph& graph, const SolveReport& report) {
    return {benchmark,
            graph.num_vertices(),
            graph.num_edges(),
            report.aggregate.runs,
            report.aggregate.mean_cycles,
            report.aggregate.converged,
            report.aggregate.average_accuracy,
            report.aggregate.best_accuracy};
}

json to_json(const BenchRow& row) {
    json j = {{"benchmark", row.benchmark},
              {"vertices", row.vertices},
              {"edges", row.edges},
              {"iterations", row.iterations},
              {"mean_cycles", nullptr},
              {"converged", row.converged},
              {"average_accuracy", row.average_accuracy},
              {"best_accuracy", row.best_accuracy}};
    if (row.mean_cycles) j["mean_cycles"] = *row.mean_cycles;
    return j;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "benchmark,vertices,edges,iterations,mean_cycles,converged,average_accuracy,best_accuracy\n";
    for (const auto& r : rows) {
        out << r.benchmark << ',' << r.vertices << ',' << r.edges << ',' << r.iterations << ','
            << (r.mean_cycles ? csv_number(*r.mean_cycles) : std::string()) << ',' << r.converged
            << ',' << csv_number(r.average_accuracy) << ',' << csv_number(r.best_accuracy) << '\n';
    }
    return out.str();
}

json detune_json(const SolveConfig& config, const std::vector<DetunePoint>& points) {
    json pts = json::array();
    for (const auto& p : points) {
        pts.push_back({{"detuning", p.detuning},
                       {"mean_deviation_deg", p.mean_deviation_deg},
                       {"dt_used", p.dt_used},
                       {"per_run_deg", p.per_run_deg}});
    }
    return {{"config", to_json(config)}, {"points", std::move(pts)}};
}

std::string detune_csv(const std::vector<DetunePoint>& points) {
    std::ostringstream out;
    out << "detuning,mean_deviation_deg,dt_used\n";
    for (const auto& p : points) {
        out << csv_number(p.detuning) << ',' << csv_number(p.mean_deviation_deg) << ','
            << csv_number(p.dt_used) << '\n';
    }
    return out.str();
}

json landscape_json(const Landscape& l) {
    return {{"n_states", l.n_states},       {"global_min", l.global_min},
            {"n_global_min", l.n_global_min}, {"n_local_min", l.n_local_min},
            {"max_energy", l.max_energy},   {"n_max", l.n_max}};
}

}  // namespace ropm
