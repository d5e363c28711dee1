#pragma once

#include "colonyroute/world.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace colonyroute {

inline constexpr double kDefaultTurnThreshold = std::numbers::pi / 12.0;

struct TaskVisit {
    int task_id;
    std::size_t index; // into Trajectory::points

    friend bool operator==(const TaskVisit &, const TaskVisit &) = default;
};

/// Timestamped cell sequence. A repeated cell is a waiting step.
struct Trajectory {
    std::vector<Cell> points;
    std::vector<double> arrival_times;
    std::vector<TaskVisit> task_visits;

    friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

struct ObjectiveVector {
    double f1_length = 0.0;     // m
    double f2_makespan = 0.0;   // s
    double f3_turns = 0.0;      // count
    double f4_smoothness = 0.0; // rad
    double curvature_std = 0.0; // 1/m

    friend bool operator==(const ObjectiveVector &, const ObjectiveVector &) = default;
};

struct Weights {
    double w1 = 0.4;
    double w2 = 0.3;
    double w3 = 0.2;
    double w4 = 0.1;

    /// Throws InvalidParams unless each weight is in [0,1] and they sum to 1.
    void validate() const;

    friend bool operator==(const Weights &, const Weights &) = default;
};

/// Per-objective scale divisors used by scalar_objective.
struct Norms {
    double length = 1.0;
    double makespan = 1.0;
    double turns = 20.0;
    double smoothness = std::numbers::pi;

    /// length: map diagonal; makespan: diagonal / speed; turns: 20; smoothness: pi.
    static Norms for_scenario(const Scenario &scenario);

    friend bool operator==(const Norms &, const Norms &) = default;
};

enum class WaitPolicy { Allow, Forbid };

enum class VisitStatus { Met, MissedEarly, MissedLate, Unvisited };

const char *to_string(VisitStatus status);

struct TaskOutcome {
    int task_id = 0;
    VisitStatus status = VisitStatus::Unvisited;
    std::optional<double> arrival_time;

    friend bool operator==(const TaskOutcome &, const TaskOutcome &) = default;
};

struct FeasibilityReport {
    std::vector<TaskOutcome> tasks; // scenario task order
    double completion_fraction = 0.0;

    std::size_t met_count() const;

    friend bool operator==(const FeasibilityReport &, const FeasibilityReport &) = default;
};

double path_length(std::span<const Cell> points, double resolution);
double path_length(const Trajectory &t, double resolution);

/// Turning angle in [0, pi] at each interior distinct position.
std::vector<double> heading_changes(std::span<const Cell> points);
std::vector<double> heading_changes(const Trajectory &t);

std::size_t turning_count(std::span<const double> headings, double threshold);
std::size_t turning_count(const Trajectory &t, double threshold = kDefaultTurnThreshold);

/// Sum of |theta_i - theta_{i-1}| over consecutive heading changes.
double smoothness(std::span<const double> headings);
double smoothness(const Trajectory &t);

/// Population std of theta_i / mean(adjacent segment lengths).
/// Throws DegeneratePath with fewer than 3 distinct positions.
double curvature_std(std::span<const Cell> points, double resolution);
double curvature_std(const Trajectory &t, double resolution);

/**
 * Times a grid-connected cell route starting at the scenario start.
 *
 * `route` lists task ids in visiting order; each is matched to the first
 * occurrence of its cell after the previous match. When empty, tasks are
 * matched in order of first appearance. With WaitPolicy::Allow an early
 * arrival gets a waiting step up to window_start, and the visit index points
 * at that waiting step.
 */
Trajectory simulate_times(std::span<const Cell> points, const Scenario &scenario,
                          WaitPolicy wait_policy, std::span<const int> route = {});

/// A task is met iff visited with window_start <= visit time <= window_end.
FeasibilityReport check_windows(const Trajectory &t, std::span<const Task> tasks);

ObjectiveVector evaluate_objectives(const Trajectory &t, double resolution,
                                    double turn_threshold = kDefaultTurnThreshold);

/// F = sum_k w_k * f_k / norm_k. Throws NonPositiveNorm.
double scalar_objective(const ObjectiveVector &v, const Weights &w, const Norms &norms);

} // namespace colonyroute
