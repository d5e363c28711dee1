#include "colonyroute/world.hpp"

#include "colonyroute/error.hpp"
#include "colonyroute/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace colonyroute {

using nlohmann::json;

GridMap::GridMap(int width_cells, int height_cells, double resolution)
    : width_(width_cells), height_(height_cells), resolution_(resolution) {
    if (width_cells <= 0 || height_cells <= 0) {
        throw Error(ErrorCode::MalformedHeader, "map dimensions must be positive");
    }
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw Error(ErrorCode::MalformedHeader, "map resolution must be > 0");
    }
    occupancy_.assign(static_cast<std::size_t>(width_cells) *
                          static_cast<std::size_t>(height_cells),
                      0);
}

std::size_t GridMap::blocked_count() const noexcept {
    return static_cast<std::size_t>(
        std::count(occupancy_.begin(), occupancy_.end(), std::uint8_t{1}));
}

double GridMap::diagonal_m() const noexcept {
    return std::hypot(static_cast<double>(width_), static_cast<double>(height_)) *
           resolution_;
}

namespace {

std::string format_double(double v) {
    // Shortest text that re-parses to the same double.
    std::ostringstream out;
    out.precision(17);
    out << v;
    std::string s = out.str();
    for (int precision = 1; precision < 17; ++precision) {
        std::ostringstream trial;
        trial.precision(precision);
        trial << v;
        if (std::stod(trial.str()) == v) {
            return trial.str();
        }
    }
    return s;
}

Cell parse_cell(const json &j, const char *what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer()) {
        throw Error(ErrorCode::MalformedScenario,
                    std::string(what) + " must be [col, row] integers");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

} // namespace

GridMap load_map(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) {
        throw Error(ErrorCode::MalformedHeader, "empty map text");
    }
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    std::istringstream header_in(header);
    std::string tag;
    long long width = 0;
    long long height = 0;
    double resolution = 0.0;
    std::string trailing;
    if (!(header_in >> tag >> width >> height >> resolution) || tag != "map" ||
        (header_in >> trailing)) {
        throw Error(ErrorCode::MalformedHeader,
                    "expected 'map <width> <height> <resolution>', got '" + header + "'");
    }
    if (width <= 0 || height <= 0 || width > 1'000'000 || height > 1'000'000 ||
        !(resolution > 0.0)) {
        throw Error(ErrorCode::MalformedHeader, "invalid map header values: " + header);
    }

    GridMap map(static_cast<int>(width), static_cast<int>(height), resolution);
    std::string line;
    for (int row = 0; row < height; ++row) {
        if (!std::getline(in, line)) {
            throw Error(ErrorCode::DimensionMismatch,
                        "expected " + std::to_string(height) + " rows, got " +
                            std::to_string(row));
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (static_cast<long long>(line.size()) != width) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(row) + " has " +
                            std::to_string(line.size()) + " cells, expected " +
                            std::to_string(width));
        }
        for (int col = 0; col < width; ++col) {
            const char ch = line[static_cast<std::size_t>(col)];
            if (ch == '#') {
                map.set_blocked({col, row}, true);
            } else if (ch != '.') {
                throw Error(ErrorCode::UnknownCell,
                            std::string("unknown cell character '") + ch + "' at (" +
                                std::to_string(col) + "," + std::to_string(row) + ")");
            }
        }
    }
    // Only blank lines may follow the grid.
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            throw Error(ErrorCode::DimensionMismatch, "extra rows after map grid");
        }
    }
    return map;
}

std::string save_map(const GridMap &map) {
    std::string out = "map " + std::to_string(map.width()) + " " +
                      std::to_string(map.height()) + " " +
                      format_double(map.resolution()) + "\n";
    out.reserve(out.size() + map.cell_count() + static_cast<std::size_t>(map.height()));
    for (int row = 0; row < map.height(); ++row) {
        for (int col = 0; col < map.width(); ++col) {
            out.push_back(map.blocked({col, row}) ? '#' : '.');
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

GridMap load_map_file(const std::filesystem::path &path) {
    return load_map(read_file(path));
}

Scenario load_scenario(std::string_view json_text,
                       const std::filesystem::path &base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::MalformedScenario,
                    std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::MalformedScenario, "scenario must be a JSON object");
    }
    for (const char *key : {"map", "start", "tasks"}) {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::MalformedScenario,
                        std::string("scenario is missing key '") + key + "'");
        }
    }

    Scenario s;
    if (!doc["map"].is_string()) {
        throw Error(ErrorCode::MalformedScenario, "'map' must be a string");
    }
    const auto map_ref = doc["map"].get<std::string>();
    if (map_ref.rfind("map ", 0) == 0 && map_ref.find('\n') != std::string::npos) {
        s.map = load_map(map_ref);
    } else {
        std::filesystem::path p(map_ref);
        if (p.is_relative() && !base_dir.empty()) {
            p = base_dir / p;
        }
        s.map = load_map_file(p);
    }
    s.start = parse_cell(doc["start"], "start");
    if (doc.contains("speed_mps")) {
        if (!doc["speed_mps"].is_number()) {
            throw Error(ErrorCode::MalformedScenario, "'speed_mps' must be a number");
        }
        s.speed = doc["speed_mps"].get<double>();
    }
    if (!doc["tasks"].is_array()) {
        throw Error(ErrorCode::MalformedScenario, "'tasks' must be an array");
    }
    for (const auto &t : doc["tasks"]) {
        if (!t.is_object() || !t.contains("id") || !t.contains("cell") ||
            !t.contains("window") || !t["id"].is_number_integer()) {
            throw Error(ErrorCode::MalformedScenario,
                        "each task needs integer 'id', 'cell' and 'window'");
        }
        const auto &w = t["window"];
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
            throw Error(ErrorCode::MalformedScenario,
                        "task 'window' must be [start_s, end_s]");
        }
        s.tasks.push_back(Task{t["id"].get<int>(), parse_cell(t["cell"], "task cell"),
                               w[0].get<double>(), w[1].get<double>()});
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario_file(const std::filesystem::path &path) {
    return load_scenario(read_file(path), path.parent_path());
}

std::string save_scenario(const Scenario &s) {
    json doc;
    doc["map"] = save_map(s.map);
    doc["start"] = {s.start.col, s.start.row};
    doc["speed_mps"] = s.speed;
    doc["tasks"] = json::array();
    for (const auto &t : s.tasks) {
        doc["tasks"].push_back({{"id", t.id},
                                {"cell", {t.cell.col, t.cell.row}},
                                {"window", {t.window_start, t.window_end}}});
    }
    return doc.dump(2) + "\n";
}

void validate_scenario(const Scenario &s) {
    if (!(s.speed > 0.0) || !std::isfinite(s.speed)) {
        throw Error(ErrorCode::MalformedScenario, "speed must be > 0");
    }
    if (s.tasks.empty()) {
        throw Error(ErrorCode::MalformedScenario, "scenario needs at least one task");
    }
    if (!s.map.free(s.start)) {
        throw Error(ErrorCode::BlockedCell, "start cell is blocked or out of bounds");
    }
    std::set<int> ids;
    std::set<Cell> cells;
    for (const auto &t : s.tasks) {
        if (!(t.window_start < t.window_end) || t.window_start < 0.0) {
            throw Error(ErrorCode::InvalidWindow,
                        "task " + std::to_string(t.id) + " has an invalid window");
        }
        if (!s.map.free(t.cell)) {
            throw Error(ErrorCode::BlockedCell,
                        "task " + std::to_string(t.id) + " is on a blocked cell");
        }
        if (!ids.insert(t.id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate task id " + std::to_string(t.id));
        }
        if (t.cell == s.start || !cells.insert(t.cell).second) {
            throw Error(ErrorCode::CoincidentCells,
                        "task " + std::to_string(t.id) +
                            " shares its cell with the start or another task");
        }
    }
    const auto marks = reachable_from(s.map, s.start);
    for (const auto &t : s.tasks) {
        if (!marks[s.map.index(t.cell)]) {
            throw Error(ErrorCode::Unreachable,
                        "task " + std::to_string(t.id) + " is unreachable from start");
        }
    }
}

namespace {

// Counter-clockwise from east; row grows downwards so north is row - 1.
constexpr int kDirCol[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDirRow[8] = {0, -1, -1, -1, 0, 1, 1, 1};

} // namespace

std::vector<Neighbor> neighbors(const GridMap &map, Cell c) {
    std::vector<Neighbor> out;
    if (!map.free(c)) {
        return out;
    }
    const double diagonal = map.resolution() * std::numbers::sqrt2;
    for (int d = 0; d < 8; ++d) {
        const Cell n{c.col + kDirCol[d], c.row + kDirRow[d]};
        if (!map.free(n)) {
            continue;
        }
        const bool is_diagonal = kDirCol[d] != 0 && kDirRow[d] != 0;
        if (is_diagonal && (!map.free({c.col + kDirCol[d], c.row}) ||
                            !map.free({c.col, c.row + kDirRow[d]}))) {
            continue;
        }
        out.push_back({n, is_diagonal ? diagonal : map.resolution()});
    }
    return out;
}

std::vector<std::uint8_t> reachable_from(const GridMap &map, Cell c) {
    std::vector<std::uint8_t> marks(map.cell_count(), 0);
    if (!map.free(c)) {
        return marks;
    }
    std::vector<Cell> stack{c};
    marks[map.index(c)] = 1;
    while (!stack.empty()) {
        const Cell cur = stack.back();
        stack.pop_back();
        for (const auto &n : neighbors(map, cur)) {
            auto &m = marks[map.index(n.cell)];
            if (!m) {
                m = 1;
                stack.push_back(n.cell);
            }
        }
    }
    return marks;
}

GridMap generate_map(std::uint64_t seed, const MapGenParams &p) {
    if (!(p.density >= 0.0 && p.density < 1.0) || p.min_side < 1 ||
        p.max_side < p.min_side) {
        throw Error(ErrorCode::InvalidParams, "invalid map generation parameters");
    }
    GridMap map(p.width_cells, p.height_cells, p.resolution);
    Rng rng(seed);
    const auto target = static_cast<std::size_t>(
        std::ceil(p.density * static_cast<double>(map.cell_count())));
    std::size_t blocked = 0;
    while (blocked < target) {
        const int w = static_cast<int>(rng.between(p.min_side, p.max_side));
        const int h = static_cast<int>(rng.between(p.min_side, p.max_side));
        const int col0 = static_cast<int>(rng.between(0, p.width_cells - 1));
        const int row0 = static_cast<int>(rng.between(0, p.height_cells - 1));
        for (int row = row0; row < std::min(row0 + h, p.height_cells) && blocked < target;
             ++row) {
            for (int col = col0; col < std::min(col0 + w, p.width_cells) && blocked < target;
                 ++col) {
                if (!map.blocked({col, row})) {
                    map.set_blocked({col, row}, true);
                    ++blocked;
                }
            }
        }
    }
    return map;
}

Scenario generate_scenario(std::uint64_t seed, const GridMap &map,
                           const ScenarioGenParams &p) {
    if (p.n_tasks < 1 || !(p.window_lo >= 0.0) || !(p.window_hi - 1.0 >= p.window_lo) ||
        !(p.speed > 0.0)) {
        throw Error(ErrorCode::InvalidParams, "invalid scenario generation parameters");
    }

    // Largest connected free component; ties go to the lowest cell index.
    std::vector<int> component(map.cell_count(), -1);
    std::vector<std::size_t> best_cells;
    int label = 0;
    for (std::size_t i = 0; i < map.cell_count(); ++i) {
        const Cell c = map.cell_at(i);
        if (map.blocked(c) || component[i] >= 0) {
            continue;
        }
        std::vector<std::size_t> members{i};
        component[i] = label;
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (const auto &n : neighbors(map, map.cell_at(members[k]))) {
                const auto j = map.index(n.cell);
                if (component[j] < 0) {
                    component[j] = label;
                    members.push_back(j);
                }
            }
        }
        if (members.size() > best_cells.size()) {
            best_cells = std::move(members);
        }
        ++label;
    }
    if (best_cells.size() < static_cast<std::size_t>(p.n_tasks) + 1) {
        throw Error(ErrorCode::InsufficientFreeCells,
                    "map has only " + std::to_string(best_cells.size()) +
                        " mutually reachable free cells, need " +
                        std::to_string(p.n_tasks + 1));
    }
    std::sort(best_cells.begin(), best_cells.end());

    Rng rng(seed);
    // Partial Fisher-Yates: the first n_tasks + 1 entries become start + tasks.
    const std::size_t picks = static_cast<std::size_t>(p.n_tasks) + 1;
    for (std::size_t k = 0; k < picks; ++k) {
        const auto j = k + rng.below(best_cells.size() - k);
        std::swap(best_cells[k], best_cells[j]);
    }

    Scenario s;
    s.map = map;
    s.speed = p.speed;
    s.start = map.cell_at(best_cells[0]);
    for (int k = 0; k < p.n_tasks; ++k) {
        Task t;
        t.id = k + 1;
        t.cell = map.cell_at(best_cells[static_cast<std::size_t>(k) + 1]);
        t.window_start = rng.uniform(p.window_lo, p.window_hi - 1.0);
        // (t_start, hi]: 1 - u lies in (0, 1].
        t.window_end = t.window_start + (p.window_hi - t.window_start) * (1.0 - rng.uniform());
        if (!(t.window_end > t.window_start)) {
            t.window_end = std::nextafter(t.window_start, p.window_hi);
        }
        s.tasks.push_back(t);
    }
    return s;
}

} // namespace colonyroute
