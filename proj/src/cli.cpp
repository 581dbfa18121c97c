#include "ropm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ropm/graph_io.hpp"
#include "ropm/oracle.hpp"
#include "ropm/report.hpp"
#include "ropm/solver.hpp"

namespace ropm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Collects output files and writes them only once everything succeeded.
class PendingFiles {
public:
    void add(fs::path path, std::string content) {
        files_.emplace_back(std::move(path), std::move(content));
    }

    void commit() {
        std::vector<fs::path> temps;
        try {
            for (const auto& [path, content] : files_) {
                fs::path tmp = path;
                tmp += ".tmp";
                std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
                if (!f) throw std::runtime_error("cannot write " + path.string());
                temps.push_back(tmp);
                f << content;
                f.close();
                if (!f) throw std::runtime_error("error writing " + path.string());
            }
            for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], files_[i].first);
        } catch (...) {
            std::error_code ec;
            for (const auto& t : temps) fs::remove(t, ec);
            throw;
        }
    }

private:
    std::vector<std::pair<fs::path, std::string>> files_;
};

enum class Format { json, csv };

struct Common {
    // dynamics and schedule overrides; applied only when given on the command line
    double kc = 0, ks = 0, dt = 0, t_max = 0, t_on = 0, ramp = 0, noise = 0, detune = 0;
    double period = 0, duty = 0, eps = 0, stride = 0;
    int n_phases = 3;
    std::size_t window = 0;
    std::string shil_mode, integrator;
    std::size_t iters = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string format;
    std::string out;
    std::string config_path;

    std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* app, Common& c, bool dynamics) {
    auto& o = c.opts;
    if (dynamics) {
        o["kc"] = app->add_option("--kc", c.kc, "coupling gain K_c (rad/cycle)");
        o["ks"] = app->add_option("--ks", c.ks, "peak SHIL gain K_s (rad/cycle)");
        o["dt"] = app->add_option("--dt", c.dt, "integrator step (cycles)");
        o["t-max"] = app->add_option("--t-max", c.t_max, "horizon (cycles)");
        o["t-on"] = app->add_option("--t-on", c.t_on, "SHIL activation time (cycles)");
        o["ramp"] = app->add_option("--ramp", c.ramp, "SHIL ramp duration (cycles)");
        o["noise"] = app->add_option("--noise", c.noise, "phase noise amplitude per sqrt(cycle)");
        o["detune"] = app->add_option("--detune", c.detune, "SHIL detuning (rad/cycle)");
        o["shil-mode"] = app->add_option("--shil-mode", c.shil_mode, "off | constant | square_wave")
                             ->check(CLI::IsMember({"off", "constant", "square_wave"}));
        o["period"] = app->add_option("--period", c.period, "square-wave period (cycles)");
        o["duty"] = app->add_option("--duty", c.duty, "square-wave duty fraction");
        o["integrator"] = app->add_option("--integrator", c.integrator, "rk4 | euler")
                              ->check(CLI::IsMember({"rk4", "euler"}));
        o["stride"] = app->add_option("--stride", c.stride, "checkpoint stride (cycles)");
        o["window"] = app->add_option("--window", c.window, "convergence window (checkpoints)");
        o["eps"] = app->add_option("--eps", c.eps, "convergence bound on max |dtheta/dt|");
        o["iters"] = app->add_option("--iters", c.iters, "restarts per instance");
        o["seed"] = app->add_option("--seed", c.seed, "base seed; run i uses seed + i");
        o["jobs"] = app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
        o["config"] = app->add_option("--config", c.config_path,
                                      "take the configuration block of an earlier report")
                          ->check(CLI::ExistingFile);
    }
    o["n-phases"] = app->add_option("--n-phases", c.n_phases, "number of phases N");
    o["format"] = app->add_option("--format", c.format, "json | csv (default: from --out extension)")
                      ->check(CLI::IsMember({"json", "csv"}));
    o["out"] = app->add_option("--out", c.out, "output file");
}

bool given(const Common& c, const std::string& name) {
    auto it = c.opts.find(name);
    return it != c.opts.end() && it->second->count() > 0;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

SolveConfig build_config(const Common& c) {
    SolveConfig cfg;
    if (!c.config_path.empty()) {
        json doc = load_json(c.config_path);
        // ablate --mode all writes one report per mode; they share the configuration
        if (doc.is_array() && !doc.empty()) doc = doc.front();
        if (!doc.is_object() || !doc.contains("config")) {
            throw std::invalid_argument(c.config_path + " has no \"config\" block");
        }
        cfg = config_from_json(doc.at("config"), cfg);
    }
    auto& p = cfg.params;
    auto& s = cfg.schedule;
    if (given(c, "kc")) p.coupling_gain = c.kc;
    if (given(c, "ks")) p.shil_gain = c.ks;
    if (given(c, "n-phases")) p.n_phases = c.n_phases;
    if (given(c, "dt")) p.dt = c.dt;
    if (given(c, "t-max")) p.t_max = c.t_max;
    if (given(c, "noise")) p.noise_amplitude = c.noise;
    if (given(c, "detune")) p.detuning = c.detune;
    if (given(c, "stride")) p.sample_stride = c.stride;
    if (given(c, "integrator")) p.integrator = c.integrator == "euler" ? Integrator::euler : Integrator::rk4;
    if (given(c, "t-on")) s.t_on = c.t_on;
    if (given(c, "ramp")) s.ramp = c.ramp;
    if (given(c, "period")) s.period = c.period;
    if (given(c, "duty")) s.duty = c.duty;
    if (given(c, "shil-mode")) {
        s.mode = c.shil_mode == "off"          ? ShilSchedule::Mode::off
                 : c.shil_mode == "square_wave" ? ShilSchedule::Mode::square_wave
                                                : ShilSchedule::Mode::constant;
    }
    if (given(c, "window")) cfg.convergence.window = c.window;
    if (given(c, "eps")) cfg.convergence.eps = c.eps;
    if (given(c, "iters")) cfg.iterations = c.iters;
    if (given(c, "seed")) cfg.base_seed = c.seed;

    p.validate();
    s.validate();
    if (cfg.iterations < 1) throw std::invalid_argument("--iters must be >= 1");
    if (cfg.convergence.window < 2) throw std::invalid_argument("--window must be >= 2");
    if (!(cfg.convergence.eps > 0.0)) throw std::invalid_argument("--eps must be > 0");
    return cfg;
}

Format output_format(const Common& c) {
    if (!c.format.empty()) return c.format == "csv" ? Format::csv : Format::json;
    return fs::path(c.out).extension() == ".csv" ? Format::csv : Format::json;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string benchmark_name(const fs::path& path) { return path.stem().string(); }

std::string percent(double x) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << 100.0 * x << '%';
    return s.str();
}

void print_summary(std::ostream& out, const std::string& name, const Aggregate& a) {
    out << name << ": runs=" << a.runs << " avg=" << percent(a.average_accuracy)
        << " best=" << percent(a.best_accuracy) << " worst=" << percent(a.worst_accuracy);
    if (a.mean_cycles) out << " cycles=" << std::fixed << std::setprecision(1) << *a.mean_cycles;
    out << " converged=" << a.converged << '/' << a.runs << '\n';
}

int run_solve(const std::string& input, const Common& c, const std::string& trajectory_path,
              bool trajectory_phases, const std::string& histogram_path, std::ostream& out) {
    const SolveConfig cfg = build_config(c);
    const Graph graph = read_dimacs_file(input);
    const SolveReport report = solve_multi(graph, cfg, c.jobs);
    const std::string name = benchmark_name(input);

    PendingFiles files;
    if (!c.out.empty()) {
        files.add(c.out, output_format(c) == Format::csv ? runs_csv(report)
                                                         : dump(solve_report_json(name, cfg, report)));
    }
    if (!histogram_path.empty()) files.add(histogram_path, histogram_csv(report.aggregate));
    if (!trajectory_path.empty()) {
        const Trajectory traj = integrate(graph, random_init(graph.num_vertices(), cfg.base_seed),
                                          cfg.params, cfg.schedule, cfg.base_seed,
                                          {.record_phases = trajectory_phases});
        files.add(trajectory_path, trajectory_csv(traj, trajectory_phases));
    }
    files.commit();
    print_summary(out, name, report.aggregate);
    return 0;
}

int run_bench(const std::string& dir, const Common& c, std::ostream& out) {
    const SolveConfig cfg = build_config(c);
    if (!fs::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".col") inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw std::runtime_error("no .col files in " + dir);

    std::vector<BenchRow> rows;
    json reports = json::array();
    for (const auto& path : inputs) {
        const Graph graph = read_dimacs_file(path);
        const SolveReport report = solve_multi(graph, cfg, c.jobs);
        rows.push_back(bench_row(benchmark_name(path), graph, report));
        reports.push_back({{"benchmark", benchmark_name(path)}, {"aggregate", to_json(report.aggregate)}});
        print_summary(out, benchmark_name(path), report.aggregate);
    }

    PendingFiles files;
    if (!c.out.empty()) {
        if (output_format(c) == Format::csv) {
            files.add(c.out, bench_csv(rows));
        } else {
            json summary = json::array();
            for (const auto& r : rows) summary.push_back(to_json(r));
            json cfg_json = to_json(cfg);
            cfg_json["mode"] = "full";
            files.add(c.out, dump({{"benchmark", fs::path(dir).filename().string()},
                                   {"config", cfg_json},
                                   {"summary", summary},
                                   {"reports", reports}}));
        }
    }
    files.commit();
    return 0;
}

int run_ablate(const std::string& input, std::string mode_name, bool mode_given, const Common& c,
               std::ostream& out) {
    const SolveConfig cfg = build_config(c);
    if (!mode_given && !c.config_path.empty()) {
        const json doc = load_json(c.config_path);
        if (doc.is_array()) {
            mode_name = doc.size() == 1 ? doc[0].at("config").value("mode", "full") : "all";
        } else {
            mode_name = doc.at("config").value("mode", "full");
        }
    }
    const Graph graph = read_dimacs_file(input);
    const std::string name = benchmark_name(input);

    std::vector<AblationMode> modes;
    if (mode_name == "all") {
        modes = {AblationMode::full, AblationMode::sync_only, AblationMode::couplings_only,
                 AblationMode::none};
    } else {
        modes = {parse_ablation_mode(mode_name)};
    }

    json doc = json::array();
    std::string csv;
    for (AblationMode mode : modes) {
        const SolveReport report = ablate(graph, cfg, mode, c.jobs);
        doc.push_back(solve_report_json(name, cfg, report, to_string(mode)));
        if (csv.empty()) {
            csv = "mode," + runs_csv(report);
            csv.erase(csv.find('\n') + 1);
        }
        std::istringstream lines(runs_csv(report));
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) csv += to_string(mode) + "," + line + "\n";
        print_summary(out, name + " [" + to_string(mode) + "]", report.aggregate);
    }

    PendingFiles files;
    if (!c.out.empty()) {
        files.add(c.out, output_format(c) == Format::csv ? csv
                                                         : dump(modes.size() == 1 ? doc[0] : doc));
    }
    files.commit();
    return 0;
}

int run_landscape(const std::string& input, const Common& c, std::ostream& out) {
    const Graph graph = read_dimacs_file(input);
    const Landscape land = enumerate_landscape(graph, c.n_phases);
    PendingFiles files;
    if (!c.out.empty()) {
        if (output_format(c) == Format::csv) {
            files.add(c.out, landscape_csv(land));
        } else {
            json doc = landscape_json(land);
            doc["benchmark"] = benchmark_name(input);
            doc["n_phases"] = c.n_phases;
            doc["energies"] = land.energies;
            files.add(c.out, dump(doc));
        }
    }
    files.commit();
    out << benchmark_name(input) << ": states=" << land.n_states << " min=" << land.global_min
        << " (x" << land.n_global_min << ") max=" << land.max_energy << " (x" << land.n_max
        << ") local_minima=" << land.n_local_min << '\n';
    return 0;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("--deltas: '" + item + "' is not a number");
        }
    }
    if (values.empty()) throw std::invalid_argument("--deltas: empty list");
    return values;
}

int run_detune(const std::string& input, const std::string& deltas_text, const Common& c,
               std::ostream& out) {
    SolveConfig cfg = build_config(c);
    std::vector<double> deltas;
    if (!deltas_text.empty()) {
        deltas = parse_list(deltas_text);
    } else if (!c.config_path.empty() && load_json(c.config_path).at("config").contains("deltas")) {
        deltas = load_json(c.config_path).at("config").at("deltas").get<std::vector<double>>();
    } else {
        deltas = {-120, -60, -30, -15, -10, -5, 0, 5, 10, 15, 30, 60, 120};
    }
    if (!given(c, "iters") && c.config_path.empty()) cfg.iterations = 10;
    const Graph graph = read_dimacs_file(input);
    const auto points = detune_sweep(graph, cfg, deltas, c.jobs);

    PendingFiles files;
    if (!c.out.empty()) {
        if (output_format(c) == Format::csv) {
            files.add(c.out, detune_csv(points));
        } else {
            json doc = detune_json(cfg, points);
            doc["benchmark"] = benchmark_name(input);
            doc["config"]["deltas"] = deltas;
            files.add(c.out, dump(doc));
        }
    }
    files.commit();
    for (const auto& p : points) {
        out << "detuning=" << std::defaultfloat << std::setprecision(6) << p.detuning
            << " deviation=" << std::fixed << std::setprecision(2) << p.mean_deviation_deg
            << " deg\n";
    }
    return 0;
}

int run_gen(std::size_t n, std::size_t m, int k, std::uint64_t seed, const std::string& out_path,
            std::ostream& out) {
    if (out_path.empty()) throw std::invalid_argument("gen: --out is required");
    const PlantedInstance inst = gen_planted(n, m, k, seed);
    std::ostringstream comment;
    comment << "planted " << k << "-colorable instance: n=" << n << " m=" << m << " seed=" << seed;
    fs::path sidecar = out_path;
    sidecar.replace_extension(".json");
    PendingFiles files;
    files.add(out_path, write_dimacs_string(inst.graph, comment.str()));
    files.add(sidecar, dump(planted_to_json(inst)));
    files.commit();
    out << "wrote " << out_path << " and " << sidecar.string() << '\n';
    return 0;
}

}  // namespace

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ropm: phase-domain ring-oscillator Potts machine"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all help");

    Common common;
    std::string input;
    std::string trajectory_path;
    std::string histogram_path;
    bool trajectory_phases = false;
    std::string mode = "full";
    std::string deltas;
    std::size_t gen_n = 0;
    std::size_t gen_m = 0;
    int gen_k = 3;
    std::uint64_t gen_seed = 1;

    auto* solve = app.add_subcommand("solve", "multi-restart solve of one DIMACS graph");
    solve->add_option("input", input, "DIMACS .col file")->required()->check(CLI::ExistingFile);
    solve->add_option("--trajectory", trajectory_path, "write the first run's trajectory CSV");
    solve->add_flag("--phases", trajectory_phases, "include per-vertex phases in the trajectory");
    solve->add_option("--histogram", histogram_path, "write the accuracy histogram CSV");

    auto* bench = app.add_subcommand("bench", "solve every .col file in a directory");
    bench->add_option("dir", input, "directory of .col files")->required();

    auto* abl = app.add_subcommand("ablate", "solve with parts of the machine disabled");
    abl->add_option("input", input, "DIMACS .col file")->required()->check(CLI::ExistingFile);
    auto* mode_opt = abl->add_option("--mode", mode, "full | sync_only | couplings_only | none | all")
        ->check(CLI::IsMember({"full", "sync_only", "couplings_only", "none", "all"}));

    auto* land = app.add_subcommand("landscape", "enumerate every lattice configuration");
    land->add_option("input", input, "DIMACS .col file")->required()->check(CLI::ExistingFile);

    auto* det = app.add_subcommand("detune", "lattice deviation versus SHIL detuning");
    det->add_option("input", input, "DIMACS .col file")->required()->check(CLI::ExistingFile);
    det->add_option("--deltas", deltas, "comma-separated detuning values (rad/cycle)");

    auto* gen = app.add_subcommand("gen", "generate a planted k-colorable graph");
    gen->add_option("--n", gen_n, "vertices")->required();
    gen->add_option("--m", gen_m, "edges")->required();
    gen->add_option("--k", gen_k, "colors");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", common.out, "output .col path (sidecar .json next to it)")->required();

    Common solve_c, bench_c, abl_c, land_c, det_c;
    add_common(solve, solve_c, true);
    add_common(bench, bench_c, true);
    add_common(abl, abl_c, true);
    add_common(land, land_c, false);
    add_common(det, det_c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ropm: " << e.what() << "\n" << "run 'ropm --help' for usage\n";
        return 2;
    }

    try {
        if (solve->parsed()) return run_solve(input, solve_c, trajectory_path, trajectory_phases, histogram_path, out);
        if (bench->parsed()) return run_bench(input, bench_c, out);
        if (abl->parsed()) return run_ablate(input, mode, mode_opt->count() > 0, abl_c, out);
        if (land->parsed()) return run_landscape(input, land_c, out);
        if (det->parsed()) return run_detune(input, deltas, det_c, out);
        if (gen->parsed()) return run_gen(gen_n, gen_m, gen_k, gen_seed, common.out, out);
    } catch (const std::invalid_argument& e) {
        err << "ropm: invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "ropm: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("ropm");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ropm::cli
