#pragma once

#include "colonyroute/legs.hpp"
#include "colonyroute/objectives.hpp"
#include "colonyroute/world.hpp"

#include <map>
#include <span>
#include <vector>

namespace colonyroute {

/// Everything needed to score a task order; shared by every planner.
struct PlanContext {
    const Scenario &scenario;
    const LegMatrix &legs;
    Weights weights{};
    Norms norms{};
    WaitPolicy wait = WaitPolicy::Allow;
    double turn_threshold = kDefaultTurnThreshold;
};

/// Planner output. `visit_order` holds task ids.
struct AntSolution {
    std::vector<int> visit_order;
    Trajectory trajectory;
    ObjectiveVector objectives;
    double F = 0.0;
    FeasibilityReport feasibility;
    bool complete = false;
};

/// Ranking data for a tour, without the geometry.
struct TourSummary {
    ObjectiveVector objectives;
    double F = 0.0;
    double completion = 0.0;
};

/// Completion descending, then F ascending. Strict: ties are not "better".
inline bool ranks_better(double completion_a, double f_a, double completion_b, double f_b) {
    if (completion_a != completion_b) {
        return completion_a > completion_b;
    }
    return f_a < f_b;
}

inline bool ranks_better(const TourSummary &a, const TourSummary &b) {
    return ranks_better(a.completion, a.F, b.completion, b.F);
}

/// Position of an ant on the task graph. Nodes: 0 = start, k = tasks[k-1].
struct TourState {
    int node = 0;
    double time = 0.0;
    std::vector<bool> visited; // indexed by node

    explicit TourState(int n_nodes) : visited(static_cast<std::size_t>(n_nodes), false) {
        visited[0] = true;
    }
};

/// Time at which the robot reaches `to` from `state` along its leg.
double leg_arrival(const PlanContext &ctx, const TourState &state, int to);

/// Unvisited task nodes whose window can still be met from `state`. With
/// WaitPolicy::Allow early arrival is admissible; with Forbid it is not.
std::vector<int> allowed_set(const PlanContext &ctx, const TourState &state);

/// Moves to `to`, waiting for window_start when the policy allows.
void advance(const PlanContext &ctx, TourState &state, int to);

/// Walks a permutation of task nodes, skipping any node that is not in the
/// allowed set when its turn comes. The result is a maximal feasible tour.
std::vector<int> decode_permutation(const PlanContext &ctx, std::span<const int> nodes);

std::vector<Cell> concatenate_legs(const PlanContext &ctx, std::span<const int> nodes);

/// Builds the full solution: leg concatenation, timing, windows, objectives.
AntSolution evaluate_tour(const PlanContext &ctx, std::span<const int> nodes);

/// Memoizing front end over evaluate_tour for planners that revisit the same
/// tours many times. Not thread-safe; use one per planner run.
class TourEvaluator {
public:
    explicit TourEvaluator(const PlanContext &ctx) : ctx_(ctx) {}

    const PlanContext &context() const noexcept { return ctx_; }
    const TourSummary &summary(const std::vector<int> &nodes);
    AntSolution solution(std::span<const int> nodes) const { return evaluate_tour(ctx_, nodes); }

private:
    const PlanContext &ctx_;
    std::map<std::vector<int>, TourSummary> memo_;
};

std::vector<int> task_ids_of(const PlanContext &ctx, std::span<const int> nodes);

} // namespace colonyroute
