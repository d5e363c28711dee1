#include "colonyroute/bench.hpp"

#include "colonyroute/error.hpp"
#include "colonyroute/parallel.hpp"
#include "colonyroute/rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace colonyroute {

using nlohmann::json;

bool is_known_algorithm(const std::string &name) {
    return name == kAlgoAco || name == kAlgoGreedy || name == kAlgoGa;
}

Scenario materialize(const ScenarioSpec &spec) {
    const GridMap map = spec.map_file.empty() ? generate_map(spec.map_seed, spec.map_gen)
                                              : load_map_file(spec.map_file);
    if (!(spec.window_slack >= 1.0)) {
        throw Error(ErrorCode::InvalidParams, "window_slack must be >= 1");
    }
    Scenario scenario = generate_scenario(spec.seed, map, spec.gen);
    for (auto &task : scenario.tasks) {
        task.window_end = task.window_start + spec.window_slack * (task.window_end - task.window_start);
    }
    return scenario;
}

void BenchConfig::validate() const {
    if (trials_per_cell < 1) {
        throw Error(ErrorCode::InvalidParams, "trials_per_cell must be >= 1");
    }
    if (algorithms.empty()) {
        throw Error(ErrorCode::InvalidParams, "at least one algorithm is required");
    }
    for (const auto &a : algorithms) {
        if (!is_known_algorithm(a)) {
            throw Error(ErrorCode::InvalidParams, "unknown algorithm '" + a + "'");
        }
    }
    weights.validate();
    aco.validate();
    ga.validate();
}

std::uint64_t trial_seed(std::uint64_t config_seed, std::size_t scenario_index,
                         const std::string &algorithm, int trial) {
    return substream_seed(fnv1a64(algorithm, mix64(config_seed)), scenario_index,
                          static_cast<std::uint64_t>(trial));
}

PlannerOutput run_planner(const std::string &algorithm, const PlanContext &ctx,
                          const AcoParams &aco, const GaParams &ga, std::uint64_t seed) {
    if (algorithm == kAlgoAco) {
        AcoParams p = aco;
        p.seed = seed;
        p.weights = ctx.weights;
        auto r = plan(ctx, p);
        return {std::move(r.best), std::move(r.trace)};
    }
    if (algorithm == kAlgoGa) {
        GaParams p = ga;
        p.seed = seed;
        auto r = ga_plan(ctx, p);
        return {std::move(r.best), std::move(r.trace)};
    }
    if (algorithm == kAlgoGreedy) {
        return {astar_greedy_plan(ctx), {}};
    }
    throw Error(ErrorCode::InvalidParams, "unknown algorithm '" + algorithm + "'");
}

namespace {

bool is_deterministic(const std::string &algorithm) { return algorithm == kAlgoGreedy; }

Stat stat_of(const std::vector<double> &xs) {
    Stat s;
    if (xs.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
    return s;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
}

} // namespace

std::vector<BenchRow> aggregate(const std::vector<RunRecord> &runs,
                                const std::vector<std::string> &algorithms) {
    std::vector<BenchRow> rows;
    for (const auto &algo : algorithms) {
        std::vector<double> length, travel, compute, turns, smooth, curv, completion, f;
        for (const auto &r : runs) {
            if (r.algorithm != algo || !r.ok()) {
                continue;
            }
            length.push_back(r.objectives.f1_length);
            travel.push_back(r.objectives.f2_makespan);
            compute.push_back(r.compute_time_s);
            turns.push_back(r.objectives.f3_turns);
            smooth.push_back(r.objectives.f4_smoothness);
            curv.push_back(r.objectives.curvature_std);
            completion.push_back(100.0 * r.completion);
            f.push_back(r.F);
        }
        BenchRow row;
        row.method = algo;
        row.runs = length.size();
        row.length_m = stat_of(length);
        row.travel_time_s = stat_of(travel);
        row.compute_time_s = stat_of(compute);
        row.turning_count = stat_of(turns);
        row.smoothness_rad = stat_of(smooth);
        row.curvature_std = stat_of(curv);
        row.completion_pct = stat_of(completion);
        row.F = stat_of(f);
        rows.push_back(std::move(row));
    }
    return rows;
}

SuiteResult run_suite(const BenchConfig &config) {
    config.validate();
    const unsigned threads = resolve_threads(config.threads);

    struct Prepared {
        Scenario scenario;
        LegMatrix legs;
        std::unique_ptr<PlanContext> ctx;
        std::string error;
    };
    std::vector<Prepared> prepared(config.scenarios.size());
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
        auto &p = prepared[s];
        try {
            p.scenario = materialize(config.scenarios[s]);
            LegOptions leg_options = config.legs;
            leg_options.threads = threads;
            p.legs = build_leg_matrix(p.scenario, leg_options);
            p.ctx = std::make_unique<PlanContext>(PlanContext{
                p.scenario, p.legs, config.weights,
                config.norms.value_or(Norms::for_scenario(p.scenario)), config.wait,
                config.legs.turn_threshold});
        } catch (const std::exception &e) {
            p.error = e.what();
        }
    }

    SuiteResult result;
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
        for (const auto &algo : config.algorithms) {
            const int trials = is_deterministic(algo) ? 1 : config.trials_per_cell;
            for (int t = 0; t < trials; ++t) {
                RunRecord r;
                r.scenario = s;
                r.algorithm = algo;
                r.trial = t;
                r.seed = trial_seed(config.seed, s, algo, t);
                result.runs.push_back(std::move(r));
            }
        }
    }

    parallel_for(result.runs.size(), threads, [&](std::size_t k) {
        auto &r = result.runs[k];
        const auto &p = prepared[r.scenario];
        if (!p.error.empty()) {
            r.error = p.error;
            return;
        }
        try {
            const auto begin = std::chrono::steady_clock::now();
            auto out = run_planner(r.algorithm, *p.ctx, config.aco, config.ga, r.seed);
            const auto end = std::chrono::steady_clock::now();
            r.compute_time_s = std::chrono::duration<double>(end - begin).count();
            r.objectives = out.solution.objectives;
            r.F = out.solution.F;
            r.completion = out.solution.feasibility.completion_fraction;
            r.trace = std::move(out.trace);
        } catch (const std::exception &e) {
            r.error = e.what();
        }
    });

    result.rows = aggregate(result.runs, config.algorithms);

    for (const auto &algo : config.algorithms) {
        if (is_deterministic(algo)) {
            continue;
        }
        ConvergenceTrace mean;
        std::size_t count = 0;
        for (const auto &r : result.runs) {
            if (r.algorithm != algo || !r.ok() || r.trace.empty()) {
                continue;
            }
            if (mean.empty()) {
                mean.resize(r.trace.size());
            }
            for (std::size_t i = 0; i < std::min(mean.size(), r.trace.size()); ++i) {
                mean[i].iteration = r.trace[i].iteration;
                mean[i].best_F += r.trace[i].best_F;
                mean[i].best_length_m += r.trace[i].best_length_m;
                mean[i].best_completion += r.trace[i].best_completion;
            }
            ++count;
        }
        for (auto &p : mean) {
            p.best_F /= static_cast<double>(count);
            p.best_length_m /= static_cast<double>(count);
            p.best_completion /= static_cast<double>(count);
        }
        result.convergence.emplace_back(algo, std::move(mean));
    }
    return result;
}

std::string raw_csv(const std::vector<RunRecord> &runs) {
    std::ostringstream out;
    out.precision(17);
    out << "scenario,algorithm,trial,seed,status,length_m,travel_time_s,compute_time_s,"
           "turning_count,smoothness_rad,curvature_std,completion_pct,F\n";
    for (const auto &r : runs) {
        out << r.scenario << ',' << csv_field(r.algorithm) << ',' << r.trial << ',' << r.seed
            << ',' << csv_field(r.ok() ? "ok" : "error: " + r.error) << ','
            << r.objectives.f1_length << ',' << r.objectives.f2_makespan << ','
            << r.compute_time_s << ',' << r.objectives.f3_turns << ','
            << r.objectives.f4_smoothness << ',' << r.objectives.curvature_std << ','
            << 100.0 * r.completion << ',' << r.F << '\n';
    }
    return out.str();
}

std::string aggregate_csv(const std::vector<BenchRow> &rows) {
    std::ostringstream out;
    out.precision(17);
    out << "method,runs";
    for (const char *name : {"length_m", "travel_time_s", "compute_time_s", "turning_count",
                             "smoothness_rad", "curvature_std", "completion_pct", "F"}) {
        out << ',' << name << "_mean," << name << "_std";
    }
    out << '\n';
    for (const auto &row : rows) {
        out << csv_field(row.method) << ',' << row.runs;
        for (const Stat *s : {&row.length_m, &row.travel_time_s, &row.compute_time_s,
                              &row.turning_count, &row.smoothness_rad, &row.curvature_std,
                              &row.completion_pct, &row.F}) {
            out << ',' << s->mean << ',' << s->stddev;
        }
        out << '\n';
    }
    return out.str();
}

std::string convergence_csv(const ConvergenceTrace &mean_trace) {
    std::ostringstream out;
    out.precision(17);
    out << "iteration,mean_best_F,mean_best_length_m,mean_best_completion\n";
    for (const auto &p : mean_trace) {
        out << p.iteration << ',' << p.best_F << ',' << p.best_length_m << ','
            << p.best_completion << '\n';
    }
    return out.str();
}

void write_suite_outputs(const SuiteResult &result, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "raw.csv", raw_csv(result.runs));
    write_text(dir / "aggregate.csv", aggregate_csv(result.rows));
    for (const auto &[algo, trace] : result.convergence) {
        write_text(dir / ("convergence_" + algo + ".csv"), convergence_csv(trace));
    }
}

std::string result_json(const std::string &algorithm, std::uint64_t seed,
                        const AntSolution &sol, const Weights &weights) {
    json cells = json::array();
    for (const auto &c : sol.trajectory.points) {
        cells.push_back({c.col, c.row});
    }
    json visits = json::array();
    for (const auto &v : sol.trajectory.task_visits) {
        visits.push_back({{"task_id", v.task_id}, {"index", v.index}});
    }
    json tasks = json::array();
    for (const auto &o : sol.feasibility.tasks) {
        json t{{"id", o.task_id}, {"status", to_string(o.status)}};
        t["arrival_s"] = o.arrival_time ? json(*o.arrival_time) : json(nullptr);
        tasks.push_back(std::move(t));
    }
    json doc{
        {"algorithm", algorithm},
        {"seed", seed},
        {"visit_order", sol.visit_order},
        {"trajectory",
         {{"cells", std::move(cells)},
          {"times_s", sol.trajectory.arrival_times},
          {"task_visits", std::move(visits)}}},
        {"objectives",
         {{"length_m", sol.objectives.f1_length},
          {"makespan_s", sol.objectives.f2_makespan},
          {"turns", sol.objectives.f3_turns},
          {"smoothness_rad", sol.objectives.f4_smoothness},
          {"curvature_std", sol.objectives.curvature_std}}},
        {"weights", {weights.w1, weights.w2, weights.w3, weights.w4}},
        {"F", sol.F},
        {"complete", sol.complete},
        {"feasibility",
         {{"completion_fraction", sol.feasibility.completion_fraction},
          {"tasks", std::move(tasks)}}},
    };
    return doc.dump(2) + "\n";
}

} // namespace colonyroute
