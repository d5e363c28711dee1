#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "colonyroute/baselines.hpp"
#include "colonyroute/error.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace colonyroute;

namespace {

void open_windows(Scenario &s) {
    for (auto &t : s.tasks) {
        t.window_start = 0.0;
        t.window_end = 1e6;
    }
}

Scenario random_scenario(Rng &rng, int n_tasks, double lo, double hi) {
    MapGenParams mp{40, 40, 0.1, 0.15, 2, 6};
    const auto map = generate_map(rng.next(), mp);
    return generate_scenario(rng.next(), map, ScenarioGenParams{n_tasks, lo, hi, 1.0});
}

// Brute force over every ordering of every subset, keeping only tours the
// window rules admit step by step.
TourSummary brute_force_best(const PlanContext &ctx) {
    const int n = ctx.legs.n_nodes() - 1;
    TourSummary best;
    bool have = false;
    std::vector<int> prefix;
    std::vector<bool> used(std::size_t(n + 1), false);
    auto visit = [&](auto &&self, const TourState &state) -> void {
        const auto sol = evaluate_tour(ctx, prefix);
        const TourSummary s{sol.objectives, sol.F, sol.feasibility.completion_fraction};
        if (!have || ranks_better(s, best)) {
            best = s;
            have = true;
        }
        for (int j : allowed_set(ctx, state)) {
            TourState next = state;
            advance(ctx, next, j);
            prefix.push_back(j);
            self(self, next);
            prefix.pop_back();
        }
    };
    visit(visit, TourState(n + 1));
    return best;
}

} // namespace

TEST_CASE("order crossover") {
    const std::vector<int> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<int> b{9, 3, 7, 8, 2, 6, 5, 1, 4};
    CHECK(order_crossover(a, b, 3, 6) == std::vector<int>{3, 8, 2, 4, 5, 6, 7, 1, 9});
    CHECK(order_crossover(a, b, 0, 8) == a);
    CHECK(order_crossover(a, a, 2, 4) == a);

    Rng rng(3);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + rng.below(10);
        std::vector<int> p(n), q(n);
        std::iota(p.begin(), p.end(), 1);
        std::iota(q.begin(), q.end(), 1);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(p[i - 1], p[rng.below(i)]);
            std::swap(q[i - 1], q[rng.below(i)]);
        }
        auto lo = rng.below(n), hi = rng.below(n);
        if (lo > hi) std::swap(lo, hi);
        auto child = order_crossover(p, q, lo, hi);
        for (auto i = lo; i <= hi; ++i) REQUIRE(child[i] == p[i]);
        std::sort(child.begin(), child.end());
        std::sort(q.begin(), q.end());
        REQUIRE(child == q);
    }
}

TEST_CASE("greedy picks the nearest feasible task") {
    SUBCASE("nearest first") {
        const auto s = oracle::ascii_scenario({"2.....S.1"});
        const auto legs = build_leg_matrix(s);
        const auto sol = astar_greedy_plan(PlanContext{s, legs});
        CHECK(sol.visit_order == std::vector<int>{1, 2});
        CHECK(sol.complete);
    }
    SUBCASE("distance ties go to the earlier deadline, then the smaller id") {
        auto s = oracle::ascii_scenario({"1...S...2"});
        const auto legs = build_leg_matrix(s);
        CHECK(astar_greedy_plan(PlanContext{s, legs}).visit_order == std::vector<int>{1, 2});
        s.tasks[1].window_end = 100.0;
        CHECK(astar_greedy_plan(PlanContext{s, legs}).visit_order == std::vector<int>{2, 1});
    }
    SUBCASE("an infeasible nearer task is skipped") {
        auto s = oracle::ascii_scenario({"2.....S.1"});
        s.tasks[0].window_end = 0.05;
        const auto legs = build_leg_matrix(s);
        const auto sol = astar_greedy_plan(PlanContext{s, legs});
        CHECK(sol.visit_order == std::vector<int>{2});
        CHECK(sol.feasibility.completion_fraction == 0.5);
    }
    SUBCASE("one task: same answer as the ant colony") {
        const auto s = oracle::ascii_scenario({"S..#", "...#", "#..1"});
        const auto legs = build_leg_matrix(s);
        const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
        AcoParams p;
        p.n_iterations = 3;
        const auto aco = plan(ctx, p);
        const auto greedy = astar_greedy_plan(ctx);
        CHECK(greedy.visit_order == aco.best.visit_order);
        CHECK(greedy.F == aco.best.F);
        CHECK(greedy.trajectory.points == aco.best.trajectory.points);
    }
}

TEST_CASE("exhaustive search") {
    SUBCASE("ties resolve to task id order") {
        const auto s = oracle::ascii_scenario({"2...S...1"});
        const auto legs = build_leg_matrix(s);
        const PlanContext ctx{s, legs};
        REQUIRE(evaluate_tour(ctx, std::vector<int>{1, 2}).F ==
                evaluate_tour(ctx, std::vector<int>{2, 1}).F);
        CHECK(exhaustive_plan(ctx).visit_order == std::vector<int>{1, 2});
    }
    SUBCASE("more than eight tasks is rejected") {
        Rng rng(1);
        const auto s = random_scenario(rng, 9, 5.0, 30.0);
        const auto legs = build_leg_matrix(s);
        try {
            exhaustive_plan(PlanContext{s, legs});
            FAIL("expected TooManyTasks");
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::TooManyTasks);
        }
    }
    SUBCASE("matches a subset-aware brute force") {
        Rng rng(17);
        for (int k = 0; k < 15; ++k) {
            const auto s = random_scenario(rng, 5, 1.0, 8.0);
            const auto legs = build_leg_matrix(s);
            const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
            const auto ex = exhaustive_plan(ctx);
            const auto ref = brute_force_best(ctx);
            REQUIRE(ex.feasibility.completion_fraction == ref.completion);
            REQUIRE(ex.F == doctest::Approx(ref.F).epsilon(1e-12));
        }
    }
    SUBCASE("no other planner ranks above it") {
        Rng rng(23);
        for (int k = 0; k < 15; ++k) {
            const auto s = random_scenario(rng, 6, 2.0, 10.0);
            const auto legs = build_leg_matrix(s);
            const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
            const auto ex = exhaustive_plan(ctx);
            const TourSummary ex_s{ex.objectives, ex.F, ex.feasibility.completion_fraction};
            auto summary = [](const AntSolution &a) {
                return TourSummary{a.objectives, a.F, a.feasibility.completion_fraction};
            };
            AcoParams ap;
            ap.n_iterations = 50;
            ap.n_ants = 10;
            GaParams gp;
            gp.generations = 30;
            gp.population = 30;
            REQUIRE_FALSE(ranks_better(summary(astar_greedy_plan(ctx)), ex_s));
            REQUIRE_FALSE(ranks_better(summary(plan(ctx, ap).best), ex_s));
            REQUIRE_FALSE(ranks_better(summary(ga_plan(ctx, gp).best), ex_s));
        }
    }
}

TEST_CASE("greedy is never shorter-and-better than the optimum on open windows") {
    Rng rng(5);
    for (int k = 0; k < 20; ++k) {
        auto s = random_scenario(rng, 6, 5.0, 30.0);
        open_windows(s);
        const auto legs = build_leg_matrix(s);
        const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
        const auto greedy = astar_greedy_plan(ctx);
        const auto ex = exhaustive_plan(ctx);
        REQUIRE(greedy.complete);
        REQUIRE(ex.complete);
        REQUIRE(greedy.F >= ex.F);
    }
}

TEST_CASE("genetic algorithm") {
    SUBCASE("a uniform population without mutation is a fixed point") {
        Rng rng(2);
        auto s = random_scenario(rng, 6, 5.0, 30.0);
        open_windows(s);
        const auto legs = build_leg_matrix(s);
        const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
        GaParams p;
        p.population = 20;
        p.generations = 15;
        p.mutation_rate = 0.0;
        const std::vector<int> genes{4, 2, 6, 1, 5, 3};
        const auto r = ga_plan(ctx, p, {genes});
        CHECK(r.best.visit_order == task_ids_of(ctx, genes));
        REQUIRE(r.trace.size() == 16);
        for (const auto &pt : r.trace) CHECK(pt.best_F == r.best.F);
        CHECK(r.trace.front().iteration == 0);
    }
    SUBCASE("finds the optimum on small instances") {
        Rng rng(41);
        int matches = 0;
        for (int k = 0; k < 20; ++k) {
            auto s = random_scenario(rng, 5, 5.0, 30.0);
            open_windows(s);
            const auto legs = build_leg_matrix(s);
            const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
            GaParams p;
            p.seed = std::uint64_t(k);
            p.generations = 100;
            const auto ga = ga_plan(ctx, p);
            const auto ex = exhaustive_plan(ctx);
            if (std::abs(ga.best.F - ex.F) <= 1e-9) ++matches;
        }
        CHECK(matches >= 18);
    }
    SUBCASE("the elite trace is monotone and deterministic") {
        Rng rng(8);
        const auto s = random_scenario(rng, 8, 2.0, 12.0);
        const auto legs = build_leg_matrix(s);
        const PlanContext ctx{s, legs, {}, Norms::for_scenario(s)};
        GaParams p;
        p.population = 40;
        p.generations = 60;
        p.seed = 99;
        const auto a = ga_plan(ctx, p);
        const auto b = ga_plan(ctx, p);
        CHECK(a.best.visit_order == b.best.visit_order);
        CHECK(trace_csv(a.trace) == trace_csv(b.trace));
        REQUIRE(a.trace.size() == 61);
        for (std::size_t i = 1; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].best_completion >= a.trace[i - 1].best_completion);
            if (a.trace[i].best_completion == a.trace[i - 1].best_completion)
                CHECK(a.trace[i].best_F <= a.trace[i - 1].best_F);
        }
        CHECK(a.trace.back().best_F == a.best.F);
    }
}

TEST_CASE("GA params JSON") {
    GaParams p;
    p.population = 12;
    p.generations = 7;
    p.mutation_rate = 0.25;
    p.seed = 5;
    const auto back = load_ga_params(save_ga_params(p));
    CHECK(back.population == 12);
    CHECK(back.generations == 7);
    CHECK(back.mutation_rate == 0.25);
    CHECK(back.crossover_rate == p.crossover_rate);
    CHECK(back.tournament_size == p.tournament_size);
    CHECK(back.seed == 5);
    CHECK_THROWS_AS(load_ga_params(R"({"population": 0})"), Error);
    CHECK_THROWS_AS(load_ga_params(R"({"mutation_rate": 2})"), Error);
    CHECK_THROWS_AS(load_ga_params(R"({"population": 2, "tournament_size": 3})"), Error);
    CHECK_THROWS_AS(load_ga_params("nope"), Error);
}
