#pragma once

#include "colonyroute/aco.hpp"
#include "colonyroute/baselines.hpp"
#include "colonyroute/legs.hpp"
#include "colonyroute/solution.hpp"
#include "colonyroute/world.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace colonyroute {

inline constexpr const char *kAlgoAco = "aco";
inline constexpr const char *kAlgoGreedy = "astar_greedy";
inline constexpr const char *kAlgoGa = "ga";

bool is_known_algorithm(const std::string &name);

/// Generated map (map_file empty) or a map file on disk. `window_slack`
/// stretches every generated window to [t_start, t_start + slack * width].
struct ScenarioSpec {
    std::filesystem::path map_file;
    MapGenParams map_gen;
    std::uint64_t map_seed = 0;
    std::uint64_t seed = 0;
    ScenarioGenParams gen;
    double window_slack = 1.0;
};

Scenario materialize(const ScenarioSpec &spec);

struct BenchConfig {
    std::vector<ScenarioSpec> scenarios;
    std::vector<std::string> algorithms{kAlgoAco, kAlgoGreedy, kAlgoGa};
    int trials_per_cell = 50;
    std::uint64_t seed = 0;
    AcoParams aco;
    GaParams ga;
    Weights weights;
    std::optional<Norms> norms; // per scenario when unset
    LegOptions legs;
    WaitPolicy wait = WaitPolicy::Allow;
    unsigned threads = 0;

    void validate() const;
};

/// Trial seed from (config seed, scenario index, algorithm, trial).
std::uint64_t trial_seed(std::uint64_t config_seed, std::size_t scenario_index,
                         const std::string &algorithm, int trial);

/// Dispatch to a planner by name. The seed overrides params.seed.
struct PlannerOutput {
    AntSolution solution;
    ConvergenceTrace trace; // empty for deterministic planners
};
PlannerOutput run_planner(const std::string &algorithm, const PlanContext &ctx,
                          const AcoParams &aco, const GaParams &ga, std::uint64_t seed);

struct RunRecord {
    std::size_t scenario = 0;
    std::string algorithm;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string error; // empty on success
    ObjectiveVector objectives;
    double F = 0.0;
    double completion = 0.0;
    double compute_time_s = 0.0;
    ConvergenceTrace trace;

    bool ok() const { return error.empty(); }
};

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
};

struct BenchRow {
    std::string method;
    std::size_t runs = 0;
    Stat length_m;
    Stat travel_time_s;
    Stat compute_time_s;
    Stat turning_count;
    Stat smoothness_rad;
    Stat curvature_std;
    Stat completion_pct;
    Stat F;
};

struct SuiteResult {
    std::vector<RunRecord> runs; // ordered by (scenario, algorithm, trial)
    std::vector<BenchRow> rows;  // one per algorithm, config order
    // Mean best-so-far trace per iterative algorithm.
    std::vector<std::pair<std::string, ConvergenceTrace>> convergence;
};

/// Deterministic planners (astar_greedy) run once per scenario.
SuiteResult run_suite(const BenchConfig &config);

/// Population mean / stddev over successful runs, per algorithm.
std::vector<BenchRow> aggregate(const std::vector<RunRecord> &runs,
                                const std::vector<std::string> &algorithms);

std::string raw_csv(const std::vector<RunRecord> &runs);
std::string aggregate_csv(const std::vector<BenchRow> &rows);
std::string convergence_csv(const ConvergenceTrace &mean_trace);

/// raw.csv, aggregate.csv and convergence_<algo>.csv under `dir`.
void write_suite_outputs(const SuiteResult &result, const std::filesystem::path &dir);

/// Result document written by `plan --out`.
std::string result_json(const std::string &algorithm, std::uint64_t seed,
                        const AntSolution &solution, const Weights &weights);

} // namespace colonyroute
