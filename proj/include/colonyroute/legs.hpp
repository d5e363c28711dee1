#pragma once

#include "colonyroute/objectives.hpp"
#include "colonyroute/world.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace colonyroute {

/**
 * Grid A* under cost = Euclidean step lengths + turn_weight per heading
 * change larger than `turn_threshold`. The heuristic is straight-line
 * distance. With turn_weight > 0 the search state is (cell, incoming
 * heading). Open-list ties go to lower f, then lower h, then the smaller
 * (col, row).
 *
 * Throws BlockedCell for blocked endpoints and NoPath when unreachable.
 */
std::vector<Cell> astar(const GridMap &map, Cell from, Cell to, double turn_weight = 0.0,
                        double turn_threshold = kDefaultTurnThreshold);

struct Leg {
    int from_node = 0;
    int to_node = 0;
    std::vector<Cell> cells;
    double length = 0.0; // m
    int turns = 0;
    double smooth = 0.0; // rad

    friend bool operator==(const Leg &, const Leg &) = default;
};

/// Node 0 is the start, node k is scenario.tasks[k - 1].
class LegMatrix {
public:
    LegMatrix() = default;
    explicit LegMatrix(int n_nodes)
        : n_nodes_(n_nodes),
          legs_(static_cast<std::size_t>(n_nodes) * static_cast<std::size_t>(n_nodes)) {}

    int n_nodes() const noexcept { return n_nodes_; }
    const Leg &at(int from, int to) const {
        return legs_[static_cast<std::size_t>(from) * static_cast<std::size_t>(n_nodes_) +
                     static_cast<std::size_t>(to)];
    }
    Leg &at(int from, int to) {
        return legs_[static_cast<std::size_t>(from) * static_cast<std::size_t>(n_nodes_) +
                     static_cast<std::size_t>(to)];
    }

    friend bool operator==(const LegMatrix &, const LegMatrix &) = default;

private:
    int n_nodes_ = 0;
    std::vector<Leg> legs_;
};

struct LegOptions {
    /// Per-turn cost in meters; negative means "0.3 x map resolution".
    double turn_weight = -1.0;
    double turn_threshold = kDefaultTurnThreshold;
    /// 0 = hardware concurrency (or COLONYROUTE_THREADS when set).
    unsigned threads = 0;

    double resolved_turn_weight(const GridMap &map) const {
        return turn_weight < 0.0 ? 0.3 * map.resolution() : turn_weight;
    }
};

/// All ordered node pairs. Output does not depend on the thread count.
LegMatrix build_leg_matrix(const Scenario &scenario, const LegOptions &options = {});

/// Content hash of everything a leg matrix depends on.
std::uint64_t leg_cache_key(const Scenario &scenario, const LegOptions &options);

std::string save_leg_cache(const LegMatrix &legs, std::uint64_t key);
/// nullopt when the cache belongs to a different key or is unreadable.
std::optional<LegMatrix> load_leg_cache(const std::string &json_text, std::uint64_t key);

/// Reads `path` when it matches, otherwise builds and (re)writes it.
LegMatrix cached_leg_matrix(const Scenario &scenario, const LegOptions &options,
                            const std::filesystem::path &path);

} // namespace colonyroute
