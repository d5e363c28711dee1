#include "colonyroute/legs.hpp"

#include "colonyroute/error.hpp"
#include "colonyroute/parallel.hpp"
#include "colonyroute/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <tuple>

namespace colonyroute {

using nlohmann::json;

namespace {

constexpr int kNoHeading = 8;
constexpr int kHeadings = 9;

int direction_of(int dc, int dr) {
    // Same ordering as world.cpp: E, NE, N, NW, W, SW, S, SE.
    static constexpr int table[3][3] = {
        // dr = -1, 0, +1 for dc = -1
        {3, 4, 5},
        // dc = 0
        {2, -1, 6},
        // dc = +1
        {1, 0, 7},
    };
    return table[dc + 1][dr + 1];
}

double heading_delta(int a, int b) {
    const int diff = std::abs(a - b);
    return std::min(diff, 8 - diff) * (std::numbers::pi / 4.0);
}

struct OpenEntry {
    double f;
    double h;
    int col;
    int row;
    int heading;
    double g;

    // priority_queue pops the largest; invert for a min-heap with tie-breaks.
    bool operator<(const OpenEntry &o) const {
        return std::tie(f, h, col, row, heading) > std::tie(o.f, o.h, o.col, o.row, o.heading);
    }
};

} // namespace

std::vector<Cell> astar(const GridMap &map, Cell from, Cell to, double turn_weight,
                        double turn_threshold) {
    if (!map.free(from) || !map.free(to)) {
        throw Error(ErrorCode::BlockedCell, "astar endpoints must be free in-bounds cells");
    }
    if (from == to) {
        return {from};
    }
    const bool track_heading = turn_weight > 0.0;
    const double res = map.resolution();
    auto heuristic = [&](Cell c) {
        return std::hypot(static_cast<double>(c.col - to.col),
                          static_cast<double>(c.row - to.row)) *
               res;
    };

    const std::size_t n_states = map.cell_count() * kHeadings;
    std::vector<double> g(n_states, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n_states, -1);
    std::vector<std::uint8_t> closed(n_states, 0);
    auto state_of = [&](Cell c, int heading) {
        return map.index(c) * kHeadings + static_cast<std::size_t>(heading);
    };

    std::priority_queue<OpenEntry> open;
    const auto start_state = state_of(from, kNoHeading);
    g[start_state] = 0.0;
    const double h0 = heuristic(from);
    open.push({h0, h0, from.col, from.row, kNoHeading, 0.0});

    std::int64_t goal_state = -1;
    while (!open.empty()) {
        const OpenEntry cur = open.top();
        open.pop();
        const Cell c{cur.col, cur.row};
        const auto s = state_of(c, cur.heading);
        if (closed[s]) {
            continue;
        }
        closed[s] = 1;
        if (c == to) {
            goal_state = static_cast<std::int64_t>(s);
            break;
        }
        for (const auto &n : neighbors(map, c)) {
            const int dir = direction_of(n.cell.col - c.col, n.cell.row - c.row);
            double step = n.step_length;
            if (track_heading && cur.heading != kNoHeading &&
                heading_delta(cur.heading, dir) > turn_threshold) {
                step += turn_weight;
            }
            const int next_heading = track_heading ? dir : kNoHeading;
            const auto ns = state_of(n.cell, next_heading);
            const double ng = cur.g + step;
            if (closed[ns] || !(ng < g[ns])) {
                continue;
            }
            g[ns] = ng;
            parent[ns] = static_cast<std::int64_t>(s);
            const double h = heuristic(n.cell);
            open.push({ng + h, h, n.cell.col, n.cell.row, next_heading, ng});
        }
    }
    if (goal_state < 0) {
        throw Error(ErrorCode::NoPath, "no path between (" + std::to_string(from.col) + "," +
                                           std::to_string(from.row) + ") and (" +
                                           std::to_string(to.col) + "," +
                                           std::to_string(to.row) + ")");
    }
    std::vector<Cell> path;
    for (auto s = goal_state; s >= 0; s = parent[static_cast<std::size_t>(s)]) {
        path.push_back(map.cell_at(static_cast<std::size_t>(s) / kHeadings));
    }
    return {path.rbegin(), path.rend()};
}

LegMatrix build_leg_matrix(const Scenario &scenario, const LegOptions &options) {
    const int n_nodes = static_cast<int>(scenario.tasks.size()) + 1;
    auto node_cell = [&](int node) {
        return node == 0 ? scenario.start
                         : scenario.tasks[static_cast<std::size_t>(node - 1)].cell;
    };
    const double turn_weight = options.resolved_turn_weight(scenario.map);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = 0; j < n_nodes; ++j) {
            if (i != j) {
                pairs.emplace_back(i, j);
            }
        }
    }

    LegMatrix legs(n_nodes);
    parallel_for(pairs.size(), resolve_threads(options.threads), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        Leg leg;
        leg.from_node = i;
        leg.to_node = j;
        try {
            leg.cells = astar(scenario.map, node_cell(i), node_cell(j), turn_weight,
                              options.turn_threshold);
        } catch (const Error &e) {
            // Scenario validation guarantees reachability.
            throw Error(ErrorCode::NoPath,
                        "internal error: leg " + std::to_string(i) + "->" + std::to_string(j) +
                            " not found: " + e.what());
        }
        leg.length = path_length(leg.cells, scenario.map.resolution());
        const auto headings = heading_changes(leg.cells);
        leg.turns = static_cast<int>(turning_count(headings, options.turn_threshold));
        leg.smooth = smoothness(headings);
        legs.at(i, j) = std::move(leg);
    });
    return legs;
}

std::uint64_t leg_cache_key(const Scenario &scenario, const LegOptions &options) {
    std::ostringstream params;
    params.precision(17);
    params << "|tw=" << options.resolved_turn_weight(scenario.map)
           << "|th=" << options.turn_threshold;
    return fnv1a64(params.str(), fnv1a64(save_scenario(scenario)));
}

std::string save_leg_cache(const LegMatrix &legs, std::uint64_t key) {
    json doc;
    doc["key"] = std::to_string(key);
    doc["n_nodes"] = legs.n_nodes();
    doc["legs"] = json::array();
    for (int i = 0; i < legs.n_nodes(); ++i) {
        for (int j = 0; j < legs.n_nodes(); ++j) {
            if (i == j) {
                continue;
            }
            const Leg &leg = legs.at(i, j);
            json cells = json::array();
            for (const auto &c : leg.cells) {
                cells.push_back({c.col, c.row});
            }
            doc["legs"].push_back({{"from", i},
                                   {"to", j},
                                   {"cells", std::move(cells)},
                                   {"length", leg.length},
                                   {"turns", leg.turns},
                                   {"smooth", leg.smooth}});
        }
    }
    return doc.dump() + "\n";
}

std::optional<LegMatrix> load_leg_cache(const std::string &json_text, std::uint64_t key) {
    try {
        const auto doc = json::parse(json_text);
        if (doc.at("key").get<std::string>() != std::to_string(key)) {
            return std::nullopt;
        }
        LegMatrix legs(doc.at("n_nodes").get<int>());
        for (const auto &entry : doc.at("legs")) {
            Leg leg;
            leg.from_node = entry.at("from").get<int>();
            leg.to_node = entry.at("to").get<int>();
            for (const auto &c : entry.at("cells")) {
                leg.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
            }
            leg.length = entry.at("length").get<double>();
            leg.turns = entry.at("turns").get<int>();
            leg.smooth = entry.at("smooth").get<double>();
            if (leg.from_node < 0 || leg.to_node < 0 || leg.from_node >= legs.n_nodes() ||
                leg.to_node >= legs.n_nodes()) {
                return std::nullopt;
            }
            legs.at(leg.from_node, leg.to_node) = std::move(leg);
        }
        return legs;
    } catch (const json::exception &) {
        return std::nullopt;
    }
}

LegMatrix cached_leg_matrix(const Scenario &scenario, const LegOptions &options,
                            const std::filesystem::path &path) {
    const auto key = leg_cache_key(scenario, options);
    if (std::ifstream in(path); in) {
        std::ostringstream buffer;
        buffer << in.rdbuf();
        if (auto cached = load_leg_cache(buffer.str(), key)) {
            return std::move(*cached);
        }
    }
    auto legs = build_leg_matrix(scenario, options);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write leg cache: " + path.string());
    }
    out << save_leg_cache(legs, key);
    return legs;
}

} // namespace colonyroute
