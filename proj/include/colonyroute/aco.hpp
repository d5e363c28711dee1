#pragma once

#include "colonyroute/legs.hpp"
#include "colonyroute/objectives.hpp"
#include "colonyroute/rng.hpp"
#include "colonyroute/solution.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace colonyroute {

/**
 * Ant colony knobs. Exponent naming follows the selection rule used here:
 * `beta` weighs pheromone and `gamma` weighs the heuristic, while `alpha`
 * scales the turn penalty inside the heuristic (classic ACO calls the
 * pheromone/heuristic exponents alpha/beta).
 */
struct AcoParams {
    int n_ants = 30;
    int n_iterations = 1000;
    double tau0 = 1.0;
    double rho = 0.1;
    double alpha = 0.5;
    double beta = 1.0;
    double gamma = 2.0;
    double q_deposit = 1.0;
    Weights weights{};
    std::uint64_t seed = 0;
    // Unset bounds resolve to [0.01 * tau0, 100 * tau0].
    std::optional<double> tau_min;
    std::optional<double> tau_max;
    // Extra deposit for the iteration-best ant.
    bool elitist = true;

    double resolved_tau_min() const { return tau_min.value_or(0.01 * tau0); }
    double resolved_tau_max() const { return tau_max.value_or(100.0 * tau0); }

    /// Throws InvalidParams.
    void validate() const;
};

/// Reads any subset of AcoParams fields; missing keys keep their defaults.
AcoParams load_aco_params(const std::string &json_text, AcoParams base = {});
std::string save_aco_params(const AcoParams &params);

class PheromoneMatrix {
public:
    PheromoneMatrix(int n_nodes, double initial)
        : n_(n_nodes),
          tau_(static_cast<std::size_t>(n_nodes) * static_cast<std::size_t>(n_nodes), initial) {}

    int n_nodes() const noexcept { return n_; }
    double at(int i, int j) const { return tau_[idx(i, j)]; }
    double &at(int i, int j) { return tau_[idx(i, j)]; }
    std::span<const double> values() const noexcept { return tau_; }
    std::span<double> values() noexcept { return tau_; }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }

    int n_;
    std::vector<double> tau_;
};

struct TracePoint {
    int iteration = 0; // 1-based
    double best_F = 0.0;
    double best_length_m = 0.0;
    double best_completion = 0.0;
};

using ConvergenceTrace = std::vector<TracePoint>;

/// CSV with header `iteration,best_F,best_length_m,best_completion`.
std::string trace_csv(const ConvergenceTrace &trace);

/// eta_ij = (1 / d_ij) * 1 / (1 + alpha * turns_ij).
double heuristic(const LegMatrix &legs, int i, int j, double alpha);

/**
 * P_l proportional to tau_l^beta * eta_l^gamma over aligned spans (one entry per
 * allowed node). Weights are formed in log space and rescaled by their
 * maximum before normalizing. Throws EmptyAllowedSet.
 */
std::vector<double> transition_probabilities(std::span<const double> tau,
                                             std::span<const double> eta, double beta,
                                             double gamma);

/// Index drawn from `probabilities` with one uniform variate.
std::size_t sample_index(std::span<const double> probabilities, Rng &rng);

/// q_deposit * max(completion, 0.05) / F (F floored at 1e-12).
double deposit_amount(double completion, double F, const AcoParams &params);

struct AntTour {
    std::vector<int> nodes; // excluding the start node
    TourSummary summary;
};

/// Index of the best tour (completion desc, F asc, first wins); tours non-empty.
std::size_t iteration_best(std::span<const AntTour> tours);

/**
 * tau <- (1 - rho) tau, then every tour deposits deposit_amount on each
 * directed edge start->t1->t2..., the iteration best deposits once more when
 * params.elitist, and all entries are clamped to [tau_min, tau_max].
 */
void update_pheromone(PheromoneMatrix &tau, std::span<const AntTour> tours,
                      const AcoParams &params);

/// Heuristic values for every node pair (diagonal 0).
std::vector<double> heuristic_table(const LegMatrix &legs, double alpha);

/// One ant walk from the start node until nothing is allowed. Node ids.
std::vector<int> construct_tour(const PlanContext &ctx, const PheromoneMatrix &tau,
                                std::span<const double> eta_table, const AcoParams &params,
                                Rng &rng);

AntSolution construct_solution(const PlanContext &ctx, const PheromoneMatrix &tau,
                               const AcoParams &params, Rng &rng);

struct AcoResult {
    AntSolution best;
    ConvergenceTrace trace;
    int best_iteration = 0;
};

/// Ant streams are seeded from (seed, iteration, ant), never from run order.
AcoResult plan(const PlanContext &ctx, const AcoParams &params);

/// Builds legs with default options and norms from the scenario.
AcoResult plan(const Scenario &scenario, const AcoParams &params);

} // namespace colonyroute
