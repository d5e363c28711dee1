#include "colonyroute/objectives.hpp"

#include "colonyroute/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace colonyroute {

void Weights::validate() const {
    for (double w : {w1, w2, w3, w4}) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw Error(ErrorCode::InvalidParams, "weights must lie in [0, 1]");
        }
    }
    if (std::abs(w1 + w2 + w3 + w4 - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidParams, "weights must sum to 1");
    }
}

Norms Norms::for_scenario(const Scenario &s) {
    Norms n;
    n.length = s.map.diagonal_m();
    n.makespan = n.length / s.speed;
    return n;
}

const char *to_string(VisitStatus status) {
    switch (status) {
    case VisitStatus::Met: return "met";
    case VisitStatus::MissedEarly: return "missed_early";
    case VisitStatus::MissedLate: return "missed_late";
    case VisitStatus::Unvisited: return "unvisited";
    }
    return "unknown";
}

std::size_t FeasibilityReport::met_count() const {
    return static_cast<std::size_t>(std::count_if(
        tasks.begin(), tasks.end(),
        [](const TaskOutcome &o) { return o.status == VisitStatus::Met; }));
}

namespace {

struct Step {
    long long dx;
    long long dy;
};

std::vector<Cell> distinct_positions(std::span<const Cell> points) {
    std::vector<Cell> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        if (out.empty() || out.back() != p) {
            out.push_back(p);
        }
    }
    return out;
}

double turn_angle(Step in, Step out) {
    const auto cross = in.dx * out.dy - in.dy * out.dx;
    const auto dot = in.dx * out.dx + in.dy * out.dy;
    return std::atan2(std::abs(static_cast<double>(cross)), static_cast<double>(dot));
}

} // namespace

double path_length(std::span<const Cell> points, double resolution) {
    // Segments are grouped by squared integer length and summed in key order,
    // so the result does not depend on the order in which steps occur.
    std::map<long long, long long> counts;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const long long dx = points[i].col - points[i - 1].col;
        const long long dy = points[i].row - points[i - 1].row;
        if (dx != 0 || dy != 0) {
            ++counts[dx * dx + dy * dy];
        }
    }
    double total = 0.0;
    for (const auto &[squared, count] : counts) {
        total += static_cast<double>(count) * std::sqrt(static_cast<double>(squared));
    }
    return total * resolution;
}

double path_length(const Trajectory &t, double resolution) {
    return path_length(t.points, resolution);
}

std::vector<double> heading_changes(std::span<const Cell> points) {
    const auto pos = distinct_positions(points);
    std::vector<double> out;
    if (pos.size() < 3) {
        return out;
    }
    out.reserve(pos.size() - 2);
    for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
        const Step in{pos[i].col - pos[i - 1].col, pos[i].row - pos[i - 1].row};
        const Step outgoing{pos[i + 1].col - pos[i].col, pos[i + 1].row - pos[i].row};
        out.push_back(turn_angle(in, outgoing));
    }
    return out;
}

std::vector<double> heading_changes(const Trajectory &t) {
    return heading_changes(t.points);
}

std::size_t turning_count(std::span<const double> headings, double threshold) {
    return static_cast<std::size_t>(std::count_if(
        headings.begin(), headings.end(), [threshold](double a) { return a > threshold; }));
}

std::size_t turning_count(const Trajectory &t, double threshold) {
    return turning_count(heading_changes(t), threshold);
}

double smoothness(std::span<const double> headings) {
    double total = 0.0;
    for (std::size_t i = 1; i < headings.size(); ++i) {
        total += std::abs(headings[i] - headings[i - 1]);
    }
    return total;
}

double smoothness(const Trajectory &t) { return smoothness(heading_changes(t)); }

double curvature_std(std::span<const Cell> points, double resolution) {
    const auto pos = distinct_positions(points);
    if (pos.size() < 3) {
        throw Error(ErrorCode::DegeneratePath,
                    "curvature needs at least 3 distinct positions");
    }
    // Welford's running mean / variance.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
        const Step in{pos[i].col - pos[i - 1].col, pos[i].row - pos[i - 1].row};
        const Step out{pos[i + 1].col - pos[i].col, pos[i + 1].row - pos[i].row};
        const double len_in = std::hypot(static_cast<double>(in.dx), static_cast<double>(in.dy));
        const double len_out =
            std::hypot(static_cast<double>(out.dx), static_cast<double>(out.dy));
        const double kappa = turn_angle(in, out) / (0.5 * (len_in + len_out) * resolution);
        ++n;
        const double delta = kappa - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (kappa - mean);
    }
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
}

double curvature_std(const Trajectory &t, double resolution) {
    return curvature_std(t.points, resolution);
}

Trajectory simulate_times(std::span<const Cell> points, const Scenario &scenario,
                          WaitPolicy wait_policy, std::span<const int> route) {
    if (points.empty() || points.front() != scenario.start) {
        throw Error(ErrorCode::Disconnected, "route must begin at the scenario start");
    }
    const auto &map = scenario.map;
    const double diagonal = map.resolution() * std::numbers::sqrt2;

    std::unordered_map<int, const Task *> by_id;
    for (const auto &task : scenario.tasks) {
        by_id.emplace(task.id, &task);
    }

    // Which original point index completes which task.
    std::vector<const Task *> visit_at(points.size(), nullptr);
    if (!route.empty()) {
        std::size_t cursor = 1;
        for (int id : route) {
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw Error(ErrorCode::InvalidParams,
                            "route references unknown task " + std::to_string(id));
            }
            while (cursor < points.size() && points[cursor] != it->second->cell) {
                ++cursor;
            }
            if (cursor == points.size()) {
                break; // remaining tasks are never reached
            }
            visit_at[cursor++] = it->second;
        }
    } else {
        std::vector<bool> seen(scenario.tasks.size(), false);
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t k = 0; k < scenario.tasks.size(); ++k) {
                if (!seen[k] && scenario.tasks[k].cell == points[i]) {
                    seen[k] = true;
                    visit_at[i] = &scenario.tasks[k];
                }
            }
        }
    }

    Trajectory t;
    t.points.reserve(points.size() + route.size());
    t.arrival_times.reserve(points.size() + route.size());
    double now = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) {
            const int dc = std::abs(points[i].col - points[i - 1].col);
            const int dr = std::abs(points[i].row - points[i - 1].row);
            if (dc > 1 || dr > 1) {
                throw Error(ErrorCode::Disconnected,
                            "points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                " are not grid-adjacent");
            }
            if (dc + dr > 0) {
                now += (dc + dr == 2 ? diagonal : map.resolution()) / scenario.speed;
            }
        }
        t.points.push_back(points[i]);
        t.arrival_times.push_back(now);
        if (const Task *task = visit_at[i]) {
            if (wait_policy == WaitPolicy::Allow && now < task->window_start) {
                now = task->window_start;
                t.points.push_back(points[i]);
                t.arrival_times.push_back(now);
            }
            t.task_visits.push_back({task->id, t.points.size() - 1});
        }
    }
    return t;
}

FeasibilityReport check_windows(const Trajectory &t, std::span<const Task> tasks) {
    FeasibilityReport report;
    report.tasks.reserve(tasks.size());
    std::size_t met = 0;
    for (const auto &task : tasks) {
        TaskOutcome outcome{task.id, VisitStatus::Unvisited, std::nullopt};
        const auto it = std::find_if(t.task_visits.begin(), t.task_visits.end(),
                                     [&](const TaskVisit &v) { return v.task_id == task.id; });
        if (it != t.task_visits.end()) {
            const double time = t.arrival_times[it->index];
            outcome.arrival_time = time;
            if (time < task.window_start) {
                outcome.status = VisitStatus::MissedEarly;
            } else if (time > task.window_end) {
                outcome.status = VisitStatus::MissedLate;
            } else {
                outcome.status = VisitStatus::Met;
                ++met;
            }
        }
        report.tasks.push_back(outcome);
    }
    report.completion_fraction =
        tasks.empty() ? 0.0 : static_cast<double>(met) / static_cast<double>(tasks.size());
    return report;
}

ObjectiveVector evaluate_objectives(const Trajectory &t, double resolution,
                                    double turn_threshold) {
    ObjectiveVector v;
    v.f1_length = path_length(t, resolution);
    v.f2_makespan = t.arrival_times.empty() ? 0.0 : t.arrival_times.back();
    const auto headings = heading_changes(t);
    v.f3_turns = static_cast<double>(turning_count(headings, turn_threshold));
    v.f4_smoothness = smoothness(headings);
    // Paths with fewer than 3 distinct positions have no curvature samples.
    v.curvature_std = headings.empty() ? 0.0 : curvature_std(t, resolution);
    return v;
}

double scalar_objective(const ObjectiveVector &v, const Weights &w, const Norms &n) {
    for (double norm : {n.length, n.makespan, n.turns, n.smoothness}) {
        if (!(norm > 0.0)) {
            throw Error(ErrorCode::NonPositiveNorm, "normalization constants must be > 0");
        }
    }
    return w.w1 * (v.f1_length / n.length) + w.w2 * (v.f2_makespan / n.makespan) +
           w.w3 * (v.f3_turns / n.turns) + w.w4 * (v.f4_smoothness / n.smoothness);
}

} // namespace colonyroute
