#include "latticeforge/algorithm_grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace latticeforge {

namespace {

constexpr int kChainLength = 5;
constexpr int kCnotChainLength = 7;

constexpr std::array<std::pair<TileKind, std::string_view>, 10> kKindNames{{
    {TileKind::Input, "input"},
    {TileKind::Readout, "readout"},
    {TileKind::Hadamard, "hadamard"},
    {TileKind::S, "s"},
    {TileKind::T, "t"},
    {TileKind::RotX, "rotx"},
    {TileKind::RotY, "roty"},
    {TileKind::RotZ, "rotz"},
    {TileKind::CNOT, "cnot"},
    {TileKind::Wire, "wire"},
}};

std::string coord_text(Coord c) { return "[" + std::to_string(c.row) + ", " + std::to_string(c.col) + "]"; }

int min_anchor_col(TileKind kind) {
    switch (kind) {
        case TileKind::CNOT: return kCnotChainLength - 1;
        case TileKind::Input:
        case TileKind::Readout:
        case TileKind::Wire: return 0;
        default: return kChainLength - 1;
    }
}

// Per-tile checks that do not depend on other tiles.
std::vector<Diagnostic> check_tile(const Tile& tile) {
    std::vector<Diagnostic> out;
    const auto name = tile.name();
    if (tile.theta && !is_rotation(tile.kind)) {
        out.push_back({Severity::Error, "theta", name + " cannot carry a rotation angle", {name}, {tile.anchor}});
    }
    if (tile.theta && !std::isfinite(*tile.theta)) {
        out.push_back({Severity::Error, "theta", name + " has a non-finite angle", {name}, {tile.anchor}});
    }
    if (!in_lattice_bounds(tile.anchor)) {
        out.push_back({Severity::Error, "bounds", name + " lies outside the [121, 121] lattice", {name}, {tile.anchor}});
        return out;
    }
    if (tile.kind == TileKind::CNOT && tile.anchor.row < 2) {
        out.push_back({Severity::Error, "geometry",
                       name + " needs its control row two rows above the anchor row", {name}, {tile.anchor}});
        return out;
    }
    if (tile.anchor.col < min_anchor_col(tile.kind)) {
        out.push_back({Severity::Error, "bounds", name + " extends west of column 0", {name}, {tile.anchor}});
        return out;
    }
    if (tile.theta && std::isfinite(*tile.theta) && !theta_in_range(*tile.theta)) {
        out.push_back({Severity::Warning, "theta-range",
                       name + " angle lies outside (-2pi, 2pi] and will be normalised", {name}, {tile.anchor}});
    }
    return out;
}

struct Occupant {
    std::size_t tile;
    std::optional<Segment> chain;  // nullopt for bridge cells
};

bool may_share(const Occupant& a, const Occupant& b, Coord cell) {
    if (!a.chain || !b.chain) return false;
    auto joins = [&](const Segment& left, const Segment& right) {
        return cell.col == left.east && cell.col == right.west && left.west < right.east;
    };
    return joins(*a.chain, *b.chain) || joins(*b.chain, *a.chain);
}

// Chain segments per logical row, sorted west to east.
std::map<int, std::vector<Segment>> chains_by_row(const std::vector<Tile>& tiles) {
    std::map<int, std::vector<Segment>> rows;
    for (const auto& t : tiles) {
        for (const auto& s : footprint(t).chains) rows[s.row].push_back(s);
    }
    for (auto& [_, segs] : rows) {
        std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
            return std::tie(a.west, a.east) < std::tie(b.west, b.east);
        });
    }
    return rows;
}

std::vector<Diagnostic> check_overlaps(const std::vector<Tile>& tiles, const std::vector<bool>& usable) {
    std::map<Coord, std::vector<Occupant>> cells;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (!usable[i]) continue;
        const auto fp = footprint(tiles[i]);
        for (const auto& s : fp.chains) {
            for (int c = s.west; c <= s.east; ++c) cells[{s.row, c}].push_back({i, s});
        }
        for (const auto& e : fp.extras) cells[e].push_back({i, std::nullopt});
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<Coord>> clashes;
    for (const auto& [cell, occ] : cells) {
        if (occ.size() == 2 && may_share(occ[0], occ[1], cell)) continue;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            for (std::size_t j = i + 1; j < occ.size(); ++j) {
                auto key = std::minmax(occ[i].tile, occ[j].tile);
                clashes[{key.first, key.second}].push_back(cell);
            }
        }
    }

    // A bridge may not sit inside a run of interposed wire qubits.
    std::vector<Tile> usable_tiles;
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (usable[i]) {
            usable_tiles.push_back(tiles[i]);
            origin.push_back(i);
        }
    }
    const auto rows = chains_by_row(usable_tiles);
    std::vector<Diagnostic> out;
    for (std::size_t k = 0; k < usable_tiles.size(); ++k) {
        for (const auto& e : footprint(usable_tiles[k]).extras) {
            auto it = rows.find(e.row);
            if (it == rows.end()) continue;
            const auto& segs = it->second;
            for (std::size_t s = 0; s + 1 < segs.size(); ++s) {
                if (e.col > segs[s].east && e.col < segs[s + 1].west) {
                    const auto name = tiles[origin[k]].name();
                    out.push_back({Severity::Error, "collision",
                                   name + " bridge at " + coord_text(e) + " interrupts a wire run", {name}, {e}});
                }
            }
        }
    }

    for (const auto& [pair, where] : clashes) {
        const auto a = tiles[pair.first].name();
        const auto b = tiles[pair.second].name();
        out.push_back({Severity::Error, "collision", a + " overlaps " + b, {a, b}, where});
    }
    return out;
}

ErrorKind kind_for_rule(const std::string& rule) {
    if (rule == "collision") return ErrorKind::Collision;
    if (rule == "bounds") return ErrorKind::Bounds;
    if (rule == "geometry") return ErrorKind::Geometry;
    return ErrorKind::Invariant;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Parse, path + ": " + what, {{"path", path}});
}

}  // namespace

// ---- kinds and tiles -----------------------------------------------------------

std::string_view to_string(TileKind kind) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<TileKind> parse_tile_kind(std::string_view text) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (name == text) return k;
    }
    return std::nullopt;
}

bool is_rotation(TileKind kind) noexcept {
    return kind == TileKind::RotX || kind == TileKind::RotY || kind == TileKind::RotZ;
}

std::string Tile::name() const { return std::string(to_string(kind)) + "@" + coord_text(anchor); }

std::vector<Coord> Footprint::cells() const {
    std::vector<Coord> out;
    for (const auto& s : chains) {
        for (int c = s.west; c <= s.east; ++c) out.push_back({s.row, c});
    }
    out.insert(out.end(), extras.begin(), extras.end());
    return out;
}

Footprint footprint(const Tile& tile) {
    const auto [row, col] = tile.anchor;
    switch (tile.kind) {
        case TileKind::CNOT:
            return {{{row - 2, col - (kCnotChainLength - 1), col}, {row, col - (kCnotChainLength - 1), col}},
                    {{row - 1, col - 3}}};
        case TileKind::Input:
        case TileKind::Readout:
        case TileKind::Wire:
            return {{{row, col, col}}, {}};
        default:
            return {{{row, col - (kChainLength - 1), col}}, {}};
    }
}

std::vector<Tile> AlgorithmGrid::sorted_tiles() const {
    std::vector<Tile> out = tiles_;
    std::stable_sort(out.begin(), out.end(), [](const Tile& a, const Tile& b) {
        return std::tie(a.anchor, a.kind) < std::tie(b.anchor, b.kind);
    });
    return out;
}

// ---- placement and validation -----------------------------------------------------

AlgorithmGrid with_tile_unchecked(AlgorithmGrid grid, const Tile& tile) {
    grid.tiles_.push_back(tile);
    return grid;
}

AlgorithmGrid place_tile(AlgorithmGrid grid, const Tile& tile) {
    auto own = check_tile(tile);
    for (const auto& d : own) {
        if (d.severity == Severity::Error) throw Error(kind_for_rule(d.rule), d.message, to_json(d));
    }
    auto next = with_tile_unchecked(std::move(grid), tile);
    const auto name = tile.name();
    for (const auto& d : validate(next)) {
        if (d.severity == Severity::Error && std::find(d.tiles.begin(), d.tiles.end(), name) != d.tiles.end()) {
            throw Error(kind_for_rule(d.rule), d.message, to_json(d));
        }
    }
    return next;
}

std::vector<Diagnostic> validate(const AlgorithmGrid& grid) {
    std::vector<Diagnostic> out;
    const auto& tiles = grid.tiles();
    std::vector<bool> usable(tiles.size(), true);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        for (auto& d : check_tile(tiles[i])) {
            if (d.severity == Severity::Error && d.rule != "theta") usable[i] = false;
            out.push_back(std::move(d));
        }
    }
    for (auto& d : check_overlaps(tiles, usable)) out.push_back(std::move(d));
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::vector<int> logical_rows(const AlgorithmGrid& grid) {
    std::vector<int> out;
    for (const auto& [row, _] : chains_by_row(grid.tiles())) out.push_back(row);
    return out;
}

std::vector<Coord> interposed_wire_cells(const AlgorithmGrid& grid) {
    std::vector<Coord> out;
    for (const auto& [row, segs] : chains_by_row(grid.tiles())) {
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            for (int c = segs[i].east + 1; c < segs[i + 1].west; ++c) out.push_back({row, c});
        }
    }
    return out;
}

Metrics metrics(const AlgorithmGrid& grid) {
    Metrics m;
    std::set<Coord> cells;
    for (const auto& t : grid.tiles()) {
        for (auto c : footprint(t).cells()) cells.insert(c);
        if (t.kind == TileKind::T) ++m.t_count;
    }
    if (cells.empty()) return m;
    for (auto c : interposed_wire_cells(grid)) cells.insert(c);
    for (auto c : cells) {
        m.min_rows = std::max(m.min_rows, c.row + 1);
        m.min_eastern_col = std::max(m.min_eastern_col, c.col);
    }
    m.qubit_count = cells.size();
    return m;
}

double normalise_theta(double theta) {
    constexpr double two_pi = 2 * std::numbers::pi;
    if (theta_in_range(theta)) return theta;
    double r = std::fmod(theta, two_pi);
    if (r <= -two_pi) r += two_pi;
    return r;
}

bool theta_in_range(double theta) {
    constexpr double two_pi = 2 * std::numbers::pi;
    return theta > -two_pi && theta <= two_pi;
}

// ---- JSON ---------------------------------------------------------------------------

nlohmann::json to_json(const Metrics& m) {
    return {{"min_lattice", {m.min_rows, m.min_eastern_col}}, {"qubit_count", m.qubit_count}, {"t_count", m.t_count}};
}

nlohmann::json to_json(const Diagnostic& d) {
    nlohmann::json coords = nlohmann::json::array();
    for (auto c : d.coords) coords.push_back({c.row, c.col});
    return {{"severity", d.severity == Severity::Error ? "error" : "warning"},
            {"rule", d.rule},
            {"message", d.message},
            {"tiles", d.tiles},
            {"coords", std::move(coords)}};
}

nlohmann::json to_json(const std::vector<Diagnostic>& ds) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : ds) out.push_back(to_json(d));
    return out;
}

nlohmann::json to_json(const AlgorithmGrid& grid) {
    nlohmann::json tiles = nlohmann::json::array();
    for (const auto& t : grid.sorted_tiles()) {
        nlohmann::json entry{{"kind", std::string(to_string(t.kind))}, {"row", t.anchor.row}, {"col", t.anchor.col}};
        if (t.theta) entry["theta"] = *t.theta;
        tiles.push_back(std::move(entry));
    }
    return {{"version", 1}, {"name", grid.name()}, {"tiles", std::move(tiles)}};
}

AlgorithmGrid grid_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) schema_error("$", "expected an object");
    if (!doc.contains("version")) schema_error("$.version", "missing");
    if (!doc["version"].is_number_integer()) schema_error("$.version", "expected an integer");
    if (doc["version"].get<int>() != 1) {
        throw Error(ErrorKind::Version, "unsupported algorithm version " + doc["version"].dump(),
                    {{"path", "$.version"}, {"expected", 1}});
    }
    AlgorithmGrid grid;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) schema_error("$.name", "expected a string");
        grid.name_ = doc["name"].get<std::string>();
    }
    if (!doc.contains("tiles") || !doc["tiles"].is_array()) schema_error("$.tiles", "expected an array");
    const auto& tiles = doc["tiles"];
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto path = "$.tiles[" + std::to_string(i) + "]";
        const auto& t = tiles[i];
        if (!t.is_object()) schema_error(path, "expected an object");
        if (!t.contains("kind") || !t["kind"].is_string()) schema_error(path + ".kind", "expected a string");
        const auto kind_text = t["kind"].get<std::string>();
        const auto kind = parse_tile_kind(kind_text);
        if (!kind) schema_error(path + ".kind", "unknown tile kind '" + kind_text + "'");
        for (const char* field : {"row", "col"}) {
            if (!t.contains(field) || !t[field].is_number_integer()) {
                schema_error(path + "." + field, "expected an integer");
            }
        }
        Tile tile{*kind, {t["row"].get<int>(), t["col"].get<int>()}, std::nullopt};
        if (!in_lattice_bounds(tile.anchor)) {
            throw Error(ErrorKind::Bounds, path + " anchor lies outside the [121, 121] lattice",
                        {{"path", path}, {"row", tile.anchor.row}, {"col", tile.anchor.col}});
        }
        if (t.contains("theta") && !t["theta"].is_null()) {
            if (!t["theta"].is_number()) schema_error(path + ".theta", "expected a number");
            tile.theta = t["theta"].get<double>();
        }
        grid.tiles_.push_back(tile);
    }
    return grid;
}

// ---- circuit ingestion -----------------------------------------------------------

AlgorithmGrid ingest_circuit_json(const nlohmann::json& doc) {
    if (!doc.is_object()) schema_error("$", "expected an object");
    if (!doc.contains("qubits") || !doc["qubits"].is_number_integer()) schema_error("$.qubits", "expected an integer");
    const int qubits = doc["qubits"].get<int>();
    if (qubits < 0) schema_error("$.qubits", "must be non-negative");
    if (2 * (qubits - 1) >= kMaxLatticeDim) {
        throw Error(ErrorKind::Bounds, std::to_string(qubits) + " wires do not fit in 121 lattice rows",
                    {{"qubits", qubits}});
    }
    const nlohmann::json ops = doc.contains("ops") ? doc["ops"] : nlohmann::json::array();
    if (!ops.is_array()) schema_error("$.ops", "expected an array");

    AlgorithmGrid grid;
    if (qubits == 0) return grid;

    auto row_of = [](int wire) { return 2 * wire; };
    std::vector<int> cursor(static_cast<std::size_t>(qubits), 0);
    for (int w = 0; w < qubits; ++w) grid = with_tile_unchecked(std::move(grid), {TileKind::Input, {row_of(w), 0}, {}});

    auto single = [&](int wire, TileKind kind, std::optional<double> theta) {
        auto& cur = cursor[static_cast<std::size_t>(wire)];
        cur += kChainLength - 1;
        grid = with_tile_unchecked(std::move(grid), {kind, {row_of(wire), cur}, theta});
    };
    auto cnot_north_to_south = [&](int north) {
        auto& a = cursor[static_cast<std::size_t>(north)];
        auto& b = cursor[static_cast<std::size_t>(north + 1)];
        const int anchor_col = std::max(a, b) + kCnotChainLength - 1;
        grid = with_tile_unchecked(std::move(grid), {TileKind::CNOT, {row_of(north + 1), anchor_col}, {}});
        a = b = anchor_col;
    };

    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto path = "$.ops[" + std::to_string(i) + "]";
        const auto& op = ops[i];
        if (!op.is_object()) schema_error(path, "expected an object");
        if (!op.contains("gate") || !op["gate"].is_string()) schema_error(path + ".gate", "expected a string");
        if (!op.contains("targets") || !op["targets"].is_array()) schema_error(path + ".targets", "expected an array");
        const auto gate = op["gate"].get<std::string>();
        std::vector<int> targets;
        for (std::size_t k = 0; k < op["targets"].size(); ++k) {
            const auto& t = op["targets"][k];
            const auto tpath = path + ".targets[" + std::to_string(k) + "]";
            if (!t.is_number_integer()) schema_error(tpath, "expected an integer");
            const int w = t.get<int>();
            if (w < 0 || w >= qubits) schema_error(tpath, "wire " + std::to_string(w) + " does not exist");
            targets.push_back(w);
        }
        std::optional<double> param;
        if (op.contains("param") && !op["param"].is_null()) {
            if (!op["param"].is_number()) schema_error(path + ".param", "expected a number");
            param = op["param"].get<double>();
        }

        static const std::map<std::string, TileKind> kSingle{
            {"h", TileKind::Hadamard}, {"s", TileKind::S},       {"t", TileKind::T},
            {"rx", TileKind::RotX},    {"ry", TileKind::RotY},   {"rz", TileKind::RotZ},
        };
        if (auto it = kSingle.find(gate); it != kSingle.end()) {
            if (targets.size() != 1) schema_error(path + ".targets", "'" + gate + "' takes one target");
            if (param && !is_rotation(it->second)) schema_error(path + ".param", "'" + gate + "' takes no parameter");
            single(targets[0], it->second, param);
        } else if (gate == "cx") {
            if (targets.size() != 2) schema_error(path + ".targets", "'cx' takes a control and a target");
            const int control = targets[0];
            const int target = targets[1];
            if (control == target) schema_error(path + ".targets", "control and target coincide");
            if (std::abs(control - target) != 1) {
                throw Error(ErrorKind::Routing,
                            "cx between wires " + std::to_string(control) + " and " + std::to_string(target) +
                                " needs routing across intermediate wires",
                            {{"path", path}, {"control", control}, {"target", target}});
            }
            if (control < target) {
                cnot_north_to_south(control);
            } else {
                // Control south of target: conjugate by Hadamards on both wires.
                single(control, TileKind::Hadamard, std::nullopt);
                single(target, TileKind::Hadamard, std::nullopt);
                cnot_north_to_south(target);
                single(control, TileKind::Hadamard, std::nullopt);
                single(target, TileKind::Hadamard, std::nullopt);
            }
        } else {
            throw Error(ErrorKind::UnsupportedGate, "gate '" + gate + "' has no tile", {{"path", path}, {"gate", gate}});
        }
    }

    const int readout_col = *std::max_element(cursor.begin(), cursor.end()) + 1;
    for (int w = 0; w < qubits; ++w) {
        grid = with_tile_unchecked(std::move(grid), {TileKind::Readout, {row_of(w), readout_col}, {}});
    }
    const auto diagnostics = validate(grid);
    if (has_errors(diagnostics)) {
        throw Error(ErrorKind::Validation, "ingested circuit does not fit on the lattice", to_json(diagnostics));
    }
    return grid;
}

}  // namespace latticeforge
