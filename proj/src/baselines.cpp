#include "colonyroute/baselines.hpp"

#include "colonyroute/error.hpp"
#include "colonyroute/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <tuple>

namespace colonyroute {

using nlohmann::json;

AntSolution astar_greedy_plan(const PlanContext &ctx) {
    TourState state(ctx.legs.n_nodes());
    std::vector<int> tour;
    for (;;) {
        const auto allowed = allowed_set(ctx, state);
        if (allowed.empty()) {
            break;
        }
        auto key = [&](int node) {
            const Task &task = ctx.scenario.tasks[static_cast<std::size_t>(node - 1)];
            return std::make_tuple(ctx.legs.at(state.node, node).length, task.window_end,
                                   task.id);
        };
        const int next = *std::min_element(allowed.begin(), allowed.end(),
                                           [&](int a, int b) { return key(a) < key(b); });
        advance(ctx, state, next);
        tour.push_back(next);
    }
    return evaluate_tour(ctx, tour);
}

void GaParams::validate() const {
    auto fail = [](const std::string &what) { throw Error(ErrorCode::InvalidParams, what); };
    if (population < 1) fail("population must be >= 1");
    if (generations < 0) fail("generations must be >= 0");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate in [0,1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate in [0,1]");
    if (tournament_size < 2) fail("tournament_size must be >= 2");
    if (population < tournament_size) fail("population must be >= tournament_size");
}

GaParams load_ga_params(const std::string &json_text, GaParams p) {
    try {
        const auto doc = json::parse(json_text);
        if (!doc.is_object()) {
            throw Error(ErrorCode::InvalidParams, "GA params must be a JSON object");
        }
        p.population = doc.value("population", p.population);
        p.generations = doc.value("generations", p.generations);
        p.crossover_rate = doc.value("crossover_rate", p.crossover_rate);
        p.mutation_rate = doc.value("mutation_rate", p.mutation_rate);
        p.tournament_size = doc.value("tournament_size", p.tournament_size);
        p.seed = doc.value("seed", p.seed);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::InvalidParams, std::string("bad GA params: ") + e.what());
    }
    p.validate();
    return p;
}

std::string save_ga_params(const GaParams &p) {
    json doc{{"population", p.population},           {"generations", p.generations},
             {"crossover_rate", p.crossover_rate},   {"mutation_rate", p.mutation_rate},
             {"tournament_size", p.tournament_size}, {"seed", p.seed}};
    return doc.dump(2) + "\n";
}

std::vector<int> order_crossover(const std::vector<int> &a, const std::vector<int> &b,
                                 std::size_t lo, std::size_t hi) {
    const std::size_t n = a.size();
    std::vector<int> child(n, -1);
    std::vector<bool> used(n + 1, false);
    for (std::size_t k = lo; k <= hi; ++k) {
        child[k] = a[k];
        used[static_cast<std::size_t>(a[k])] = true;
    }
    std::size_t write = (hi + 1) % n;
    for (std::size_t step = 0; step < n; ++step) {
        const int gene = b[(hi + 1 + step) % n];
        if (used[static_cast<std::size_t>(gene)]) {
            continue;
        }
        child[write] = gene;
        used[static_cast<std::size_t>(gene)] = true;
        write = (write + 1) % n;
    }
    return child;
}

namespace {

struct Individual {
    std::vector<int> genes;
    std::vector<int> tour;
    TourSummary summary;
};

} // namespace

GaResult ga_plan(const PlanContext &ctx, const GaParams &params,
                 const std::vector<std::vector<int>> &initial) {
    params.validate();
    const int n_tasks = ctx.legs.n_nodes() - 1;
    Rng rng(params.seed);
    TourEvaluator evaluator(ctx);

    auto make = [&](std::vector<int> genes) {
        Individual ind;
        ind.tour = decode_permutation(ctx, genes);
        ind.summary = evaluator.summary(ind.tour);
        ind.genes = std::move(genes);
        return ind;
    };

    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(params.population));
    for (int k = 0; k < params.population; ++k) {
        std::vector<int> genes;
        if (!initial.empty()) {
            genes = initial[static_cast<std::size_t>(k) % initial.size()];
        } else {
            genes.resize(static_cast<std::size_t>(n_tasks));
            std::iota(genes.begin(), genes.end(), 1);
            for (std::size_t i = genes.size(); i > 1; --i) {
                std::swap(genes[i - 1], genes[rng.below(i)]);
            }
        }
        population.push_back(make(std::move(genes)));
    }

    auto best_index = [](const std::vector<Individual> &pop) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pop.size(); ++k) {
            if (ranks_better(pop[k].summary, pop[best].summary)) {
                best = k;
            }
        }
        return best;
    };

    GaResult result;
    auto record = [&](int generation, const Individual &elite) {
        result.trace.push_back({generation, elite.summary.F, elite.summary.objectives.f1_length,
                                elite.summary.completion});
    };
    Individual elite = population[best_index(population)];
    record(0, elite);

    auto tournament = [&]() -> const Individual & {
        std::size_t winner = rng.below(population.size());
        for (int k = 1; k < params.tournament_size; ++k) {
            const std::size_t challenger = rng.below(population.size());
            if (ranks_better(population[challenger].summary, population[winner].summary)) {
                winner = challenger;
            }
        }
        return population[winner];
    };

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(population.size());
        next.push_back(elite);
        while (next.size() < population.size()) {
            const auto &pa = tournament();
            const auto &pb = tournament();
            std::vector<int> genes = pa.genes;
            if (n_tasks > 1 && rng.uniform() < params.crossover_rate) {
                auto i = rng.below(static_cast<std::uint64_t>(n_tasks));
                auto j = rng.below(static_cast<std::uint64_t>(n_tasks));
                if (i > j) {
                    std::swap(i, j);
                }
                genes = order_crossover(pa.genes, pb.genes, i, j);
            }
            if (n_tasks > 1 && rng.uniform() < params.mutation_rate) {
                const auto i = rng.below(static_cast<std::uint64_t>(n_tasks));
                const auto j = rng.below(static_cast<std::uint64_t>(n_tasks));
                std::swap(genes[i], genes[j]);
            }
            next.push_back(make(std::move(genes)));
        }
        population = std::move(next);
        const auto &champion = population[best_index(population)];
        if (ranks_better(champion.summary, elite.summary)) {
            elite = champion;
        }
        record(gen, elite);
    }
    result.best = evaluator.solution(elite.tour);
    return result;
}

AntSolution exhaustive_plan(const PlanContext &ctx) {
    const int n_tasks = ctx.legs.n_nodes() - 1;
    if (n_tasks > kExhaustiveMaxTasks) {
        throw Error(ErrorCode::TooManyTasks,
                    "exhaustive search supports at most 8 tasks, got " + std::to_string(n_tasks));
    }
    std::vector<int> perm(static_cast<std::size_t>(n_tasks));
    std::iota(perm.begin(), perm.end(), 1);
    auto id_of = [&](int node) { return ctx.scenario.tasks[static_cast<std::size_t>(node - 1)].id; };
    auto by_id = [&](int a, int b) { return id_of(a) < id_of(b); };
    std::sort(perm.begin(), perm.end(), by_id);

    TourEvaluator evaluator(ctx);
    std::vector<int> best_tour;
    TourSummary best_summary;
    bool have_best = false;
    do {
        auto tour = decode_permutation(ctx, perm);
        const auto &summary = evaluator.summary(tour);
        if (!have_best || ranks_better(summary, best_summary)) {
            best_summary = summary;
            best_tour = std::move(tour);
            have_best = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end(), by_id));
    return evaluator.solution(best_tour);
}

} // namespace colonyroute
