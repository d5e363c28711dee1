// colonyroute: plan, generate maps/scenarios, and run benchmark suites.
//
// Exit codes: 0 success, 2 input error, 3 internal error.

#include "colonyroute/aco.hpp"
#include "colonyroute/baselines.hpp"
#include "colonyroute/bench.hpp"
#include "colonyroute/error.hpp"
#include "colonyroute/legs.hpp"
#include "colonyroute/parallel.hpp"
#include "colonyroute/rng.hpp"
#include "colonyroute/world.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cr = colonyroute;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_input_error(cr::ErrorCode code) {
    switch (code) {
    case cr::ErrorCode::NoPath:
    case cr::ErrorCode::Disconnected:
    case cr::ErrorCode::DegeneratePath:
    case cr::ErrorCode::EmptyAllowedSet:
    case cr::ErrorCode::NonPositiveNorm:
        return false;
    default:
        return true;
    }
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write file: " + path);
    }
    out << text;
}

json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw InputError(what + " is not valid JSON: " + e.what());
    }
}

// Planner-independent settings that may appear in any params file.
struct PlanSettings {
    cr::Weights weights;
    std::optional<cr::Norms> norms;
    cr::WaitPolicy wait = cr::WaitPolicy::Allow;
    cr::LegOptions legs;
};

PlanSettings read_plan_settings(const json &doc) {
    PlanSettings s;
    try {
        if (doc.contains("weights")) {
            const auto &w = doc["weights"];
            if (!w.is_array() || w.size() != 4) {
                throw InputError("'weights' must be an array of 4 numbers");
            }
            s.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>(),
                         w[3].get<double>()};
        }
        if (doc.contains("norms")) {
            const auto &n = doc["norms"];
            cr::Norms norms;
            norms.length = n.at("length").get<double>();
            norms.makespan = n.at("makespan").get<double>();
            norms.turns = n.at("turns").get<double>();
            norms.smoothness = n.at("smoothness").get<double>();
            s.norms = norms;
        }
        if (doc.contains("wait")) {
            const auto w = doc["wait"].get<std::string>();
            if (w != "allow" && w != "forbid") {
                throw InputError("'wait' must be \"allow\" or \"forbid\"");
            }
            s.wait = w == "allow" ? cr::WaitPolicy::Allow : cr::WaitPolicy::Forbid;
        }
        s.legs.turn_weight = doc.value("turn_weight", s.legs.turn_weight);
        s.legs.turn_threshold = doc.value("turn_threshold", s.legs.turn_threshold);
    } catch (const json::exception &e) {
        throw InputError(std::string("bad params file: ") + e.what());
    }
    s.weights.validate();
    return s;
}

// ---------------------------------------------------------------- plan

struct PlanArgs {
    std::string scenario;
    std::string algo;
    std::uint64_t seed = 0;
    std::string params;
    std::string out;
    std::string trace;
    std::string legs_cache;
    unsigned threads = 0;
};

int cmd_plan(const PlanArgs &a) {
    if (!cr::is_known_algorithm(a.algo)) {
        throw InputError("unknown algorithm '" + a.algo + "' (expected aco, astar_greedy or ga)");
    }
    const auto scenario = cr::load_scenario_file(a.scenario);

    json params_doc = json::object();
    if (!a.params.empty()) {
        params_doc = parse_json(read_text(a.params), "params file");
        if (!params_doc.is_object()) {
            throw InputError("params file must hold a JSON object");
        }
    }
    const auto settings = read_plan_settings(params_doc);
    cr::AcoParams aco;
    cr::GaParams ga;
    if (a.algo == cr::kAlgoAco) {
        aco = cr::load_aco_params(params_doc.dump());
    } else if (a.algo == cr::kAlgoGa) {
        ga = cr::load_ga_params(params_doc.dump());
    }

    cr::LegOptions leg_options = settings.legs;
    leg_options.threads = cr::resolve_threads(a.threads);
    const auto legs = a.legs_cache.empty()
                          ? cr::build_leg_matrix(scenario, leg_options)
                          : cr::cached_leg_matrix(scenario, leg_options, a.legs_cache);
    const cr::PlanContext ctx{scenario, legs, settings.weights,
                              settings.norms.value_or(cr::Norms::for_scenario(scenario)),
                              settings.wait, leg_options.turn_threshold};

    const auto begin = std::chrono::steady_clock::now();
    const auto out = cr::run_planner(a.algo, ctx, aco, ga, a.seed);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();

    if (!a.out.empty()) {
        write_text(a.out, cr::result_json(a.algo, a.seed, out.solution, settings.weights));
    }
    if (!a.trace.empty()) {
        if (out.trace.empty()) {
            throw InputError("--trace is only available for aco and ga");
        }
        write_text(a.trace, cr::trace_csv(out.trace));
    }
    const auto &sol = out.solution;
    std::printf("%s: %zu/%zu tasks met (%.1f%%), length %.3f m, makespan %.3f s, turns %.0f, "
                "F %.6f, %.3f s\n",
                a.algo.c_str(), sol.feasibility.met_count(), scenario.tasks.size(),
                100.0 * sol.feasibility.completion_fraction, sol.objectives.f1_length,
                sol.objectives.f2_makespan, sol.objectives.f3_turns, sol.F, seconds);
    return 0;
}

// ---------------------------------------------------------------- gen

int cmd_gen_map(std::uint64_t seed, const cr::MapGenParams &p, const std::string &out) {
    const auto map = cr::generate_map(seed, p);
    write_text(out, cr::save_map(map));
    std::printf("map %dx%d cells (%.1f m x %.1f m), %.1f%% blocked -> %s\n", map.width(),
                map.height(), map.width() * map.resolution(), map.height() * map.resolution(),
                100.0 * static_cast<double>(map.blocked_count()) /
                    static_cast<double>(map.cell_count()),
                out.c_str());
    return 0;
}

int cmd_gen_scenario(std::uint64_t seed, const std::string &map_path,
                     const cr::ScenarioGenParams &p, const std::string &out) {
    const auto map = cr::load_map_file(map_path);
    const auto scenario = cr::generate_scenario(seed, map, p);
    write_text(out, cr::save_scenario(scenario));
    std::printf("scenario with %zu tasks, start (%d,%d) -> %s\n", scenario.tasks.size(),
                scenario.start.col, scenario.start.row, out.c_str());
    return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string config;
    std::vector<double> densities{0.05, 0.15, 0.30};
    int scenarios = 10;
    int trials = 50;
    int tasks = 8;
    std::uint64_t seed = 0;
    std::vector<std::string> algorithms{cr::kAlgoAco, cr::kAlgoGreedy, cr::kAlgoGa};
    int width = 200;
    int height = 200;
    double resolution = 0.1;
    double window_lo = 5.0;
    double window_hi = 30.0;
    double window_slack = 1.0;
    double speed = 1.0;
    int iterations = 1000;
    int ants = 30;
    int population = 100;
    int generations = 300;
    std::string out_dir = "bench_out";
    unsigned threads = 0;
};

std::vector<cr::ScenarioSpec> tier_scenarios(const BenchArgs &a, std::size_t tier,
                                             double density) {
    std::vector<cr::ScenarioSpec> specs;
    for (int i = 0; i < a.scenarios; ++i) {
        cr::ScenarioSpec s;
        s.map_gen.width_cells = a.width;
        s.map_gen.height_cells = a.height;
        s.map_gen.resolution = a.resolution;
        s.map_gen.density = density;
        s.map_seed = cr::substream_seed(a.seed, tier, static_cast<std::uint64_t>(2 * i));
        s.seed = cr::substream_seed(a.seed, tier, static_cast<std::uint64_t>(2 * i + 1));
        s.gen.n_tasks = a.tasks;
        s.gen.window_lo = a.window_lo;
        s.gen.window_hi = a.window_hi;
        s.window_slack = a.window_slack;
        s.gen.speed = a.speed;
        specs.push_back(s);
    }
    return specs;
}

void apply_bench_config(BenchArgs &a, const json &doc, cr::BenchConfig &cfg) {
    try {
        if (doc.contains("densities")) a.densities = doc["densities"].get<std::vector<double>>();
        if (doc.contains("algorithms"))
            a.algorithms = doc["algorithms"].get<std::vector<std::string>>();
        a.scenarios = doc.value("scenarios", a.scenarios);
        a.trials = doc.value("trials", a.trials);
        a.tasks = doc.value("tasks", a.tasks);
        a.seed = doc.value("seed", a.seed);
        a.width = doc.value("width", a.width);
        a.height = doc.value("height", a.height);
        a.resolution = doc.value("resolution", a.resolution);
        a.window_lo = doc.value("window_lo", a.window_lo);
        a.window_hi = doc.value("window_hi", a.window_hi);
        a.window_slack = doc.value("window_slack", a.window_slack);
        a.speed = doc.value("speed", a.speed);
        a.out_dir = doc.value("out_dir", a.out_dir);
        if (doc.contains("aco")) cfg.aco = cr::load_aco_params(doc["aco"].dump(), cfg.aco);
        if (doc.contains("ga")) cfg.ga = cr::load_ga_params(doc["ga"].dump(), cfg.ga);
    } catch (const json::exception &e) {
        throw InputError(std::string("bad bench config: ") + e.what());
    }
    const auto settings = read_plan_settings(doc);
    cfg.weights = settings.weights;
    cfg.norms = settings.norms;
    cfg.wait = settings.wait;
    cfg.legs = settings.legs;
}

int cmd_bench(BenchArgs a, const CLI::App &sub) {
    cr::BenchConfig cfg;
    cfg.aco.n_iterations = a.iterations;
    cfg.aco.n_ants = a.ants;
    cfg.ga.population = a.population;
    cfg.ga.generations = a.generations;
    if (!a.config.empty()) {
        // Flags given explicitly win over the file.
        BenchArgs from_flags = a;
        apply_bench_config(a, parse_json(read_text(a.config), "bench config"), cfg);
        auto given = [&](const char *name) { return sub.count(name) > 0; };
        if (given("--density")) a.densities = from_flags.densities;
        if (given("--scenarios")) a.scenarios = from_flags.scenarios;
        if (given("--trials")) a.trials = from_flags.trials;
        if (given("--tasks")) a.tasks = from_flags.tasks;
        if (given("--seed")) a.seed = from_flags.seed;
        if (given("--algos")) a.algorithms = from_flags.algorithms;
        if (given("--window-slack")) a.window_slack = from_flags.window_slack;
        if (given("--out-dir")) a.out_dir = from_flags.out_dir;
        if (given("--iterations")) cfg.aco.n_iterations = from_flags.iterations;
        if (given("--ants")) cfg.aco.n_ants = from_flags.ants;
        if (given("--population")) cfg.ga.population = from_flags.population;
        if (given("--generations")) cfg.ga.generations = from_flags.generations;
    }
    if (a.tasks < cr::kMinGeneratedTasks || a.tasks > cr::kMaxGeneratedTasks) {
        throw InputError("--tasks must lie in [5, 20]");
    }
    cfg.algorithms = a.algorithms;
    cfg.trials_per_cell = a.trials;
    cfg.seed = a.seed;
    cfg.threads = a.threads;

    for (std::size_t tier = 0; tier < a.densities.size(); ++tier) {
        const double density = a.densities[tier];
        cfg.scenarios = tier_scenarios(a, tier, density);
        const auto result = cr::run_suite(cfg);
        char name[32];
        std::snprintf(name, sizeof name, "density_%02d",
                      static_cast<int>(std::lround(density * 100.0)));
        const auto dir = std::filesystem::path(a.out_dir) / name;
        cr::write_suite_outputs(result, dir);
        std::printf("density %.0f%% -> %s\n", density * 100.0, dir.string().c_str());
        for (const auto &row : result.rows) {
            std::printf("  %-13s runs %3zu  length %8.3f m  travel %8.3f s  turns %6.2f  "
                        "smooth %7.3f rad  curv_std %7.3f  completion %6.2f%%  compute %.3f s\n",
                        row.method.c_str(), row.runs, row.length_m.mean,
                        row.travel_time_s.mean, row.turning_count.mean,
                        row.smoothness_rad.mean, row.curvature_std.mean,
                        row.completion_pct.mean, row.compute_time_s.mean);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multi-constraint ant colony path planner for logistics robots"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    auto *plan = app.add_subcommand("plan", "Plan a scenario with one algorithm");
    plan->add_option("--scenario", plan_args.scenario, "Scenario JSON file")->required();
    plan->add_option("--algo", plan_args.algo, "aco | astar_greedy | ga")->required();
    plan->add_option("--seed", plan_args.seed, "Random seed");
    plan->add_option("--params", plan_args.params, "Algorithm params JSON file");
    plan->add_option("--out", plan_args.out, "Result JSON output file");
    plan->add_option("--trace", plan_args.trace, "Convergence trace CSV output file");
    plan->add_option("--legs-cache", plan_args.legs_cache, "Leg matrix cache JSON file");
    plan->add_option("--threads", plan_args.threads, "Worker threads (0 = all cores)");

    std::uint64_t map_seed = 0;
    cr::MapGenParams map_params;
    std::string map_out;
    auto *gen_map = app.add_subcommand("gen-map", "Generate a random shelf map");
    gen_map->add_option("--seed", map_seed, "Random seed");
    gen_map->add_option("--width", map_params.width_cells, "Width in cells")
        ->check(CLI::PositiveNumber);
    gen_map->add_option("--height", map_params.height_cells, "Height in cells")
        ->check(CLI::PositiveNumber);
    gen_map->add_option("--resolution", map_params.resolution, "Meters per cell")
        ->check(CLI::PositiveNumber);
    gen_map->add_option("--density", map_params.density, "Blocked fraction")
        ->check(CLI::Range(0.0, 0.95));
    gen_map->add_option("--out", map_out, "Output map file")->required();

    std::uint64_t scen_seed = 0;
    std::string scen_map;
    std::string scen_out;
    cr::ScenarioGenParams scen_params;
    auto *gen_scen = app.add_subcommand("gen-scenario", "Generate tasks with time windows");
    gen_scen->add_option("--seed", scen_seed, "Random seed");
    gen_scen->add_option("--map", scen_map, "Map file")->required();
    gen_scen->add_option("--tasks", scen_params.n_tasks, "Number of tasks (5-20)")
        ->check(CLI::Range(cr::kMinGeneratedTasks, cr::kMaxGeneratedTasks));
    gen_scen->add_option("--window-lo", scen_params.window_lo, "Earliest window bound (s)");
    gen_scen->add_option("--window-hi", scen_params.window_hi, "Latest window bound (s)");
    gen_scen->add_option("--speed", scen_params.speed, "Robot speed (m/s)")
        ->check(CLI::PositiveNumber);
    gen_scen->add_option("--out", scen_out, "Output scenario file")->required();

    BenchArgs bench_args;
    auto *bench = app.add_subcommand("bench", "Run comparative suites per density tier");
    bench->add_option("--config", bench_args.config, "Suite config JSON file");
    bench->add_option("--density", bench_args.densities, "Obstacle density tiers");
    bench->add_option("--scenarios", bench_args.scenarios, "Scenarios per tier");
    bench->add_option("--trials", bench_args.trials, "Trials per scenario and algorithm");
    bench->add_option("--tasks", bench_args.tasks, "Tasks per scenario (5-20)");
    bench->add_option("--seed", bench_args.seed, "Suite seed");
    bench->add_option("--algos", bench_args.algorithms, "Algorithms")->delimiter(',');
    bench->add_option("--window-slack", bench_args.window_slack,
                      "Stretch factor (>= 1) applied to every window's width")
        ->check(CLI::Range(1.0, 1e12));
    bench->add_option("--iterations", bench_args.iterations, "ACO iterations");
    bench->add_option("--ants", bench_args.ants, "ACO ants");
    bench->add_option("--population", bench_args.population, "GA population");
    bench->add_option("--generations", bench_args.generations, "GA generations");
    bench->add_option("--out-dir", bench_args.out_dir, "Output directory");
    bench->add_option("--threads", bench_args.threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*plan) return cmd_plan(plan_args);
        if (*gen_map) return cmd_gen_map(map_seed, map_params, map_out);
        if (*gen_scen) return cmd_gen_scenario(scen_seed, scen_map, scen_params, scen_out);
        if (*bench) return cmd_bench(bench_args, *bench);
    } catch (const InputError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const cr::Error &e) {
        std::fprintf(stderr, "error (%s): %s\n", cr::to_string(e.code()), e.what());
        return is_input_error(e.code()) ? kExitInput : kExitInternal;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
