#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace colonyroute {

struct Cell {
    int col = 0;
    int row = 0;

    friend auto operator<=>(const Cell &, const Cell &) = default;
};

/// Occupancy grid. Row 0 is the top row; `true` means blocked.
class GridMap {
public:
    GridMap() = default;
    GridMap(int width_cells, int height_cells, double resolution);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double resolution() const noexcept { return resolution_; }
    std::size_t cell_count() const noexcept { return occupancy_.size(); }

    bool in_bounds(Cell c) const noexcept {
        return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
    }
    bool blocked(Cell c) const { return occupancy_[index(c)] != 0; }
    bool free(Cell c) const noexcept { return in_bounds(c) && !blocked(c); }
    void set_blocked(Cell c, bool value) { occupancy_[index(c)] = value ? 1 : 0; }

    std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.col);
    }
    Cell cell_at(std::size_t index) const noexcept {
        return {static_cast<int>(index % static_cast<std::size_t>(width_)),
                static_cast<int>(index / static_cast<std::size_t>(width_))};
    }

    std::size_t blocked_count() const noexcept;
    double diagonal_m() const noexcept;

    friend bool operator==(const GridMap &, const GridMap &) = default;

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 0.1;
    std::vector<std::uint8_t> occupancy_;
};

struct Task {
    int id = 0;
    Cell cell;
    double window_start = 0.0;
    double window_end = 0.0;

    friend bool operator==(const Task &, const Task &) = default;
};

struct Scenario {
    GridMap map;
    Cell start;
    double speed = 1.0; // m/s
    std::vector<Task> tasks;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

// Map text format: "map <w> <h> <res>" then h lines of w chars, '#' blocked,
// '.' free.
GridMap load_map(std::string_view text);
std::string save_map(const GridMap &map);
GridMap load_map_file(const std::filesystem::path &path);

/**
 * Parses the scenario JSON schema:
 *
 *   { "map": "<inline map text or path>", "start": [col, row],
 *     "speed_mps": 1.0,
 *     "tasks": [ {"id": 1, "cell": [c, r], "window": [start_s, end_s]} ] }
 *
 * A relative map path is resolved against `base_dir`. The result is fully
 * validated (see validate_scenario).
 */
Scenario load_scenario(std::string_view json_text,
                       const std::filesystem::path &base_dir = {});
Scenario load_scenario_file(const std::filesystem::path &path);
/// Writes the map inline so the output is self-contained.
std::string save_scenario(const Scenario &scenario);

/// Throws Error on any invariant violation, including unreachable tasks.
void validate_scenario(const Scenario &scenario);

struct Neighbor {
    Cell cell;
    double step_length; // meters
};

/// 8-connected free neighbors without corner cutting. Blocked or
/// out-of-bounds input yields an empty list.
std::vector<Neighbor> neighbors(const GridMap &map, Cell c);

/// Flood fill over `neighbors`; marks[i] != 0 for every cell reachable from c.
std::vector<std::uint8_t> reachable_from(const GridMap &map, Cell c);

struct MapGenParams {
    int width_cells = 200;
    int height_cells = 200;
    double resolution = 0.1;
    double density = 0.15;
    int min_side = 2;
    int max_side = 10;
};

/// Random axis-aligned "shelf" rectangles until the blocked fraction reaches
/// the target density.
GridMap generate_map(std::uint64_t seed, const MapGenParams &params);

struct ScenarioGenParams {
    int n_tasks = 8;
    double window_lo = 5.0;
    double window_hi = 30.0;
    double speed = 1.0;
};

inline constexpr int kMinGeneratedTasks = 5;
inline constexpr int kMaxGeneratedTasks = 20;

/// Start and tasks are drawn from the largest free connected component.
Scenario generate_scenario(std::uint64_t seed, const GridMap &map,
                           const ScenarioGenParams &params);

} // namespace colonyroute
