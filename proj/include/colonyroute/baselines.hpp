#pragma once

#include "colonyroute/aco.hpp"
#include "colonyroute/solution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace colonyroute {

/// Nearest feasible task first (by leg length); ties by earlier window_end,
/// then smaller task id.
AntSolution astar_greedy_plan(const PlanContext &ctx);

struct GaParams {
    int population = 100;
    int generations = 300;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int tournament_size = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

GaParams load_ga_params(const std::string &json_text, GaParams base = {});
std::string save_ga_params(const GaParams &params);

struct GaResult {
    AntSolution best;
    ConvergenceTrace trace; // one point per generation, generation 0 = initial population
};

/**
 * Permutation GA over task nodes: tournament selection, order crossover
 * (OX1), swap mutation, one elite. Individuals decode through
 * decode_permutation, so fitness uses the same ranking as the ant colony.
 * `initial` (node permutations) replaces the random initial population.
 */
GaResult ga_plan(const PlanContext &ctx, const GaParams &params,
                 const std::vector<std::vector<int>> &initial = {});

inline constexpr int kExhaustiveMaxTasks = 8;

/// Best tour over every task permutation; ties keep the permutation that is
/// first in task-id lexicographic order. Throws TooManyTasks above 8 tasks.
AntSolution exhaustive_plan(const PlanContext &ctx);

/// OX1 on node permutations: copies parent_a[lo..hi] and fills the rest in
/// parent_b's order starting after hi.
std::vector<int> order_crossover(const std::vector<int> &parent_a,
                                 const std::vector<int> &parent_b, std::size_t lo,
                                 std::size_t hi);

} // namespace colonyroute
