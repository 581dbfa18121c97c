#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ropm/oracle.hpp"
#include "ropm/solver.hpp"

namespace ropm {

nlohmann::json to_json(const DynamicsParams& params);
nlohmann::json to_json(const ShilSchedule& schedule);
nlohmann::json to_json(const SolveConfig& config);
nlohmann::json to_json(const RunRecord& run);
nlohmann::json to_json(const Aggregate& aggregate);

/// Reads the fields written by to_json; missing keys keep the defaults.
/// Unknown keys or wrongly typed values throw std::invalid_argument.
DynamicsParams params_from_json(const nlohmann::json& j, DynamicsParams base = {});
ShilSchedule schedule_from_json(const nlohmann::json& j, ShilSchedule base = {});
SolveConfig config_from_json(const nlohmann::json& j, SolveConfig base = {});

/// {"benchmark", "config", "runs", "aggregate"} with the full effective
/// configuration under "config" (plus "mode" when ablating).
nlohmann::json solve_report_json(const std::string& benchmark, const SolveConfig& config,
                                 const SolveReport& report, const std::string& mode = "full");

/// One row per run.
std::string runs_csv(const SolveReport& report);

/// bin_lower,bin_upper,count for the 0.01-wide accuracy bins.
std::string histogram_csv(const Aggregate& aggregate);

struct BenchRow {
    std::string benchmark;
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t iterations = 0;
    std::optional<double> mean_cycles;
    std::size_t converged = 0;
    double average_accuracy = 0.0;
    double best_accuracy = 0.0;
};

[[nodiscard]] BenchRow bench_row(const std::string& benchmark, const Graph& graph,
                                 const SolveReport& report);
std::string bench_csv(const std::vector<BenchRow>& rows);
nlohmann::json to_json(const BenchRow& row);

nlohmann::json detune_json(const SolveConfig& config, const std::vector<DetunePoint>& points);
std::string detune_csv(const std::vector<DetunePoint>& points);

nlohmann::json landscape_json(const Landscape& landscape);

}  // namespace ropm
