#include "colonyroute/solution.hpp"

#include "colonyroute/error.hpp"

#include <algorithm>

namespace colonyroute {

namespace {

const Task &task_of(const PlanContext &ctx, int node) {
    return ctx.scenario.tasks[static_cast<std::size_t>(node - 1)];
}

} // namespace

double leg_arrival(const PlanContext &ctx, const TourState &state, int to) {
    return state.time + ctx.legs.at(state.node, to).length / ctx.scenario.speed;
}

std::vector<int> allowed_set(const PlanContext &ctx, const TourState &state) {
    std::vector<int> out;
    for (int j = 1; j < ctx.legs.n_nodes(); ++j) {
        if (state.visited[static_cast<std::size_t>(j)]) {
            continue;
        }
        const Task &task = task_of(ctx, j);
        const double arrival = leg_arrival(ctx, state, j);
        if (arrival > task.window_end) {
            continue;
        }
        if (ctx.wait == WaitPolicy::Forbid && arrival < task.window_start) {
            continue;
        }
        out.push_back(j);
    }
    return out;
}

void advance(const PlanContext &ctx, TourState &state, int to) {
    double arrival = leg_arrival(ctx, state, to);
    if (ctx.wait == WaitPolicy::Allow) {
        arrival = std::max(arrival, task_of(ctx, to).window_start);
    }
    state.node = to;
    state.time = arrival;
    state.visited[static_cast<std::size_t>(to)] = true;
}

std::vector<int> decode_permutation(const PlanContext &ctx, std::span<const int> nodes) {
    TourState state(ctx.legs.n_nodes());
    std::vector<int> tour;
    tour.reserve(nodes.size());
    for (int node : nodes) {
        if (state.visited[static_cast<std::size_t>(node)]) {
            continue;
        }
        const auto allowed = allowed_set(ctx, state);
        if (std::find(allowed.begin(), allowed.end(), node) == allowed.end()) {
            continue;
        }
        advance(ctx, state, node);
        tour.push_back(node);
    }
    return tour;
}

std::vector<Cell> concatenate_legs(const PlanContext &ctx, std::span<const int> nodes) {
    std::vector<Cell> points{ctx.scenario.start};
    int prev = 0;
    for (int node : nodes) {
        const auto &cells = ctx.legs.at(prev, node).cells;
        points.insert(points.end(), cells.begin() + 1, cells.end());
        prev = node;
    }
    return points;
}

std::vector<int> task_ids_of(const PlanContext &ctx, std::span<const int> nodes) {
    std::vector<int> ids;
    ids.reserve(nodes.size());
    for (int node : nodes) {
        ids.push_back(task_of(ctx, node).id);
    }
    return ids;
}

AntSolution evaluate_tour(const PlanContext &ctx, std::span<const int> nodes) {
    for (int node : nodes) {
        if (node <= 0 || node >= ctx.legs.n_nodes()) {
            throw Error(ErrorCode::InvalidParams, "tour node out of range");
        }
    }
    AntSolution sol;
    sol.visit_order = task_ids_of(ctx, nodes);
    const auto points = concatenate_legs(ctx, nodes);
    sol.trajectory = simulate_times(points, ctx.scenario, ctx.wait, sol.visit_order);
    sol.feasibility = check_windows(sol.trajectory, ctx.scenario.tasks);
    sol.objectives =
        evaluate_objectives(sol.trajectory, ctx.scenario.map.resolution(), ctx.turn_threshold);
    sol.F = scalar_objective(sol.objectives, ctx.weights, ctx.norms);
    sol.complete = sol.feasibility.completion_fraction == 1.0;
    return sol;
}

const TourSummary &TourEvaluator::summary(const std::vector<int> &nodes) {
    auto it = memo_.find(nodes);
    if (it == memo_.end()) {
        const auto sol = evaluate_tour(ctx_, nodes);
        it = memo_.emplace(nodes, TourSummary{sol.objectives, sol.F,
                                              sol.feasibility.completion_fraction})
                 .first;
    }
    return it->second;
}

} // namespace colonyroute
