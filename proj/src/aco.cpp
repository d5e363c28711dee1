#include "colonyroute/aco.hpp"

#include "colonyroute/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace colonyroute {

using nlohmann::json;

void AcoParams::validate() const {
    auto fail = [](const std::string &what) { throw Error(ErrorCode::InvalidParams, what); };
    if (n_ants < 1) fail("n_ants must be >= 1");
    if (n_iterations < 1) fail("n_iterations must be >= 1");
    if (!(rho > 0.0 && rho < 1.0)) fail("rho must lie in (0, 1)");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0)) {
        fail("alpha, beta and gamma must be >= 0");
    }
    if (!(q_deposit > 0.0)) fail("q_deposit must be > 0");
    const double lo = resolved_tau_min();
    const double hi = resolved_tau_max();
    if (!(lo > 0.0 && lo <= tau0 && tau0 <= hi)) {
        fail("need 0 < tau_min <= tau0 <= tau_max");
    }
    weights.validate();
}

namespace {

Weights read_weights(const json &j) {
    Weights w;
    if (j.is_array()) {
        if (j.size() != 4) {
            throw Error(ErrorCode::InvalidParams, "weights array must have 4 entries");
        }
        w = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    } else if (j.is_object()) {
        w.w1 = j.value("w1", w.w1);
        w.w2 = j.value("w2", w.w2);
        w.w3 = j.value("w3", w.w3);
        w.w4 = j.value("w4", w.w4);
    } else {
        throw Error(ErrorCode::InvalidParams, "weights must be an array or object");
    }
    return w;
}

} // namespace

AcoParams load_aco_params(const std::string &json_text, AcoParams p) {
    try {
        const auto doc = json::parse(json_text);
        if (!doc.is_object()) {
            throw Error(ErrorCode::InvalidParams, "ACO params must be a JSON object");
        }
        p.n_ants = doc.value("n_ants", p.n_ants);
        p.n_iterations = doc.value("n_iterations", p.n_iterations);
        p.tau0 = doc.value("tau0", p.tau0);
        p.rho = doc.value("rho", p.rho);
        p.alpha = doc.value("alpha", p.alpha);
        p.beta = doc.value("beta", p.beta);
        p.gamma = doc.value("gamma", p.gamma);
        p.q_deposit = doc.value("q_deposit", p.q_deposit);
        p.seed = doc.value("seed", p.seed);
        p.elitist = doc.value("elitist", p.elitist);
        if (doc.contains("tau_min")) p.tau_min = doc["tau_min"].get<double>();
        if (doc.contains("tau_max")) p.tau_max = doc["tau_max"].get<double>();
        if (doc.contains("weights")) p.weights = read_weights(doc["weights"]);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::InvalidParams, std::string("bad ACO params: ") + e.what());
    }
    p.validate();
    return p;
}

std::string save_aco_params(const AcoParams &p) {
    json doc{{"n_ants", p.n_ants},
             {"n_iterations", p.n_iterations},
             {"tau0", p.tau0},
             {"rho", p.rho},
             {"alpha", p.alpha},
             {"beta", p.beta},
             {"gamma", p.gamma},
             {"q_deposit", p.q_deposit},
             {"weights", {p.weights.w1, p.weights.w2, p.weights.w3, p.weights.w4}},
             {"seed", p.seed},
             {"tau_min", p.resolved_tau_min()},
             {"tau_max", p.resolved_tau_max()},
             {"elitist", p.elitist}};
    return doc.dump(2) + "\n";
}

std::string trace_csv(const ConvergenceTrace &trace) {
    std::ostringstream out;
    out.precision(17);
    out << "iteration,best_F,best_length_m,best_completion\n";
    for (const auto &p : trace) {
        out << p.iteration << ',' << p.best_F << ',' << p.best_length_m << ','
            << p.best_completion << '\n';
    }
    return out.str();
}

double heuristic(const LegMatrix &legs, int i, int j, double alpha) {
    const Leg &leg = legs.at(i, j);
    return (1.0 / leg.length) * (1.0 / (1.0 + alpha * leg.turns));
}

std::vector<double> transition_probabilities(std::span<const double> tau,
                                             std::span<const double> eta, double beta,
                                             double gamma) {
    if (tau.empty()) {
        throw Error(ErrorCode::EmptyAllowedSet, "no allowed node to choose from");
    }
    std::vector<double> p(tau.size());
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tau.size(); ++k) {
        p[k] = beta * std::log(tau[k]) + gamma * std::log(eta[k]);
        max_log = std::max(max_log, p[k]);
    }
    double total = 0.0;
    for (auto &v : p) {
        v = std::exp(v - max_log);
        total += v;
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

std::size_t sample_index(std::span<const double> probabilities, Rng &rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < probabilities.size(); ++k) {
        cumulative += probabilities[k];
        if (u < cumulative) {
            return k;
        }
    }
    return probabilities.size() - 1;
}

double deposit_amount(double completion, double F, const AcoParams &params) {
    return params.q_deposit * std::max(completion, 0.05) / std::max(F, 1e-12);
}

std::size_t iteration_best(std::span<const AntTour> tours) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < tours.size(); ++k) {
        if (ranks_better(tours[k].summary, tours[best].summary)) {
            best = k;
        }
    }
    return best;
}

void update_pheromone(PheromoneMatrix &tau, std::span<const AntTour> tours,
                      const AcoParams &params) {
    for (auto &v : tau.values()) {
        v *= (1.0 - params.rho);
    }
    auto deposit = [&](const AntTour &tour) {
        const double amount = deposit_amount(tour.summary.completion, tour.summary.F, params);
        int prev = 0;
        for (int node : tour.nodes) {
            tau.at(prev, node) += amount;
            prev = node;
        }
    };
    for (const auto &tour : tours) {
        deposit(tour);
    }
    if (params.elitist && !tours.empty()) {
        deposit(tours[iteration_best(tours)]);
    }
    const double lo = params.resolved_tau_min();
    const double hi = params.resolved_tau_max();
    for (auto &v : tau.values()) {
        v = std::clamp(v, lo, hi);
    }
}

std::vector<double> heuristic_table(const LegMatrix &legs, double alpha) {
    const int n = legs.n_nodes();
    std::vector<double> eta(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                eta[static_cast<std::size_t>(i * n + j)] = heuristic(legs, i, j, alpha);
            }
        }
    }
    return eta;
}

std::vector<int> construct_tour(const PlanContext &ctx, const PheromoneMatrix &tau,
                                std::span<const double> eta_table, const AcoParams &params,
                                Rng &rng) {
    const int n = ctx.legs.n_nodes();
    TourState state(n);
    std::vector<int> tour;
    std::vector<double> tau_allowed;
    std::vector<double> eta_allowed;
    for (;;) {
        const auto allowed = allowed_set(ctx, state);
        if (allowed.empty()) {
            break;
        }
        tau_allowed.clear();
        eta_allowed.clear();
        for (int j : allowed) {
            tau_allowed.push_back(tau.at(state.node, j));
            eta_allowed.push_back(eta_table[static_cast<std::size_t>(state.node * n + j)]);
        }
        const auto probs =
            transition_probabilities(tau_allowed, eta_allowed, params.beta, params.gamma);
        const int next = allowed[sample_index(probs, rng)];
        advance(ctx, state, next);
        tour.push_back(next);
    }
    return tour;
}

AntSolution construct_solution(const PlanContext &ctx, const PheromoneMatrix &tau,
                               const AcoParams &params, Rng &rng) {
    const auto eta = heuristic_table(ctx.legs, params.alpha);
    return evaluate_tour(ctx, construct_tour(ctx, tau, eta, params, rng));
}

AcoResult plan(const PlanContext &ctx, const AcoParams &params) {
    params.validate();
    const int n = ctx.legs.n_nodes();
    PheromoneMatrix tau(n, params.tau0);
    const auto eta = heuristic_table(ctx.legs, params.alpha);
    TourEvaluator evaluator(ctx);

    AcoResult result;
    result.trace.reserve(static_cast<std::size_t>(params.n_iterations));
    std::vector<int> best_nodes;
    TourSummary best_summary;
    bool have_best = false;

    std::vector<AntTour> tours(static_cast<std::size_t>(params.n_ants));
    for (int it = 1; it <= params.n_iterations; ++it) {
        for (int ant = 0; ant < params.n_ants; ++ant) {
            Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(it),
                                   static_cast<std::uint64_t>(ant)));
            auto &tour = tours[static_cast<std::size_t>(ant)];
            tour.nodes = construct_tour(ctx, tau, eta, params, rng);
            tour.summary = evaluator.summary(tour.nodes);
        }
        const auto &champion = tours[iteration_best(tours)];
        if (!have_best || ranks_better(champion.summary, best_summary)) {
            best_nodes = champion.nodes;
            best_summary = champion.summary;
            result.best_iteration = it;
            have_best = true;
        }
        update_pheromone(tau, tours, params);
        result.trace.push_back({it, best_summary.F, best_summary.objectives.f1_length,
                                best_summary.completion});
    }
    result.best = evaluator.solution(best_nodes);
    return result;
}

AcoResult plan(const Scenario &scenario, const AcoParams &params) {
    const auto legs = build_leg_matrix(scenario);
    const PlanContext ctx{scenario, legs, params.weights, Norms::for_scenario(scenario)};
    return plan(ctx, params);
}

} // namespace colonyroute
