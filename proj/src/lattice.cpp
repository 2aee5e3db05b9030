#include "latticeforge/lattice.hpp"

#include <algorithm>
#include <set>

namespace latticeforge {

namespace {

const std::string kSigmaX = "σx";
const std::string kSigmaZ = "σz";
const std::string kReadout = "readout";

Highlight highlight_for(TileKind kind) {
    switch (kind) {
        case TileKind::T: return Highlight::NonCliffordBlue;
        case TileKind::Input:
        case TileKind::Readout: return Highlight::None;
        default: return Highlight::CliffordRed;
    }
}

struct Claim {
    std::size_t tile;
    TileKind kind;
    std::string label;
    bool west_end;
};

// Which tile speaks for a cell shared by two footprints: an input/readout tile
// always wins, otherwise the pattern that consumes the qubit as its input.
const Claim& owner(const std::vector<Claim>& claims) {
    for (const auto& c : claims) {
        if (c.kind == TileKind::Input || c.kind == TileKind::Readout) return c;
    }
    for (const auto& c : claims) {
        if (c.west_end) return c;
    }
    return claims.front();
}

}  // namespace

std::string_view to_string(QubitRole role) noexcept {
    switch (role) {
        case QubitRole::PatternMember: return "pattern-member";
        case QubitRole::Wire: return "wire";
        case QubitRole::Superfluous: return "superfluous";
        case QubitRole::Input: return "input";
        case QubitRole::Readout: return "readout";
        case QubitRole::Pending: return "pending";
    }
    return "unknown";
}

std::string_view to_string(Highlight highlight) noexcept {
    switch (highlight) {
        case Highlight::CliffordRed: return "clifford-red";
        case Highlight::NonCliffordBlue: return "nonclifford-blue";
        case Highlight::None: return "none";
    }
    return "unknown";
}

std::size_t Lattice::count(QubitRole role) const {
    return static_cast<std::size_t>(
        std::count_if(qubits.begin(), qubits.end(), [&](const auto& kv) { return kv.second.role == role; }));
}

const std::vector<std::string>& pattern_labels(TileKind kind) {
    // Member sequences of the standard one-way patterns; the last cell of each
    // chain is the output qubit handed to the next pattern.
    static const std::vector<std::string> hadamard{"σx", "σy", "σy", "σy", "out"};
    static const std::vector<std::string> phase{"σx", "σx", "σy", "σx", "out"};
    static const std::vector<std::string> rotation{"σx", "ξ", "η", "ζ", "out"};
    static const std::vector<std::string> cnot{
        "σx", "σy", "σy", "σy", "σy", "σy", "out",  // control chain
        "σx", "σx", "σx", "σy", "σx", "σx", "out",  // target chain
        "σy",                                       // bridge
    };
    static const std::vector<std::string> single{kSigmaX};
    static const std::vector<std::string> readout{kReadout};
    switch (kind) {
        case TileKind::Hadamard: return hadamard;
        case TileKind::S: return phase;
        case TileKind::T:
        case TileKind::RotX:
        case TileKind::RotY:
        case TileKind::RotZ: return rotation;
        case TileKind::CNOT: return cnot;
        case TileKind::Readout: return readout;
        case TileKind::Input:
        case TileKind::Wire: return single;
    }
    return single;
}

Lattice open_algorithm(const AlgorithmGrid& grid) {
    const auto diagnostics = validate(grid);
    if (has_errors(diagnostics)) {
        throw Error(ErrorKind::Validation, "algorithm grid does not validate", to_json(diagnostics));
    }

    Lattice lattice;
    if (grid.empty()) return lattice;
    const auto m = metrics(grid);
    lattice.rows = m.min_rows;
    lattice.cols = m.min_eastern_col + 1;

    const auto tiles = grid.sorted_tiles();
    std::map<Coord, std::vector<Claim>> claims;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto fp = footprint(tiles[i]);
        const auto cells = fp.cells();
        const auto& labels = pattern_labels(tiles[i].kind);
        std::set<Coord> west_ends;
        for (const auto& s : fp.chains) west_ends.insert({s.row, s.west});
        for (std::size_t k = 0; k < cells.size(); ++k) {
            claims[cells[k]].push_back({i, tiles[i].kind, labels[k], west_ends.contains(cells[k])});
        }
    }
    std::set<Coord> wire_run;
    for (auto c : interposed_wire_cells(grid)) wire_run.insert(c);

    for (int r = 0; r < lattice.rows; ++r) {
        for (int c = 0; c < lattice.cols; ++c) {
            const Coord at{r, c};
            LatticeQubit q;
            q.id = VertexId{r} * lattice.cols + c;
            q.coord = at;
            if (auto it = claims.find(at); it != claims.end()) {
                const auto& who = owner(it->second);
                q.tile = who.tile;
                q.label = who.label;
                q.highlight = highlight_for(who.kind);
                switch (who.kind) {
                    case TileKind::Input: q.role = QubitRole::Input; break;
                    case TileKind::Readout: q.role = QubitRole::Readout; break;
                    case TileKind::Wire: q.role = QubitRole::Wire; break;
                    default: q.role = QubitRole::PatternMember; break;
                }
            } else {
                q.role = QubitRole::Pending;
                q.label = std::to_string(q.id);
                q.on_wire_run = wire_run.contains(at);
            }
            lattice.graph.insert_vertex(q.id, at);
            lattice.qubits.emplace(at, std::move(q));
        }
    }
    for (int r = 0; r < lattice.rows; ++r) {
        for (int c = 0; c < lattice.cols; ++c) {
            const VertexId id = VertexId{r} * lattice.cols + c;
            if (c + 1 < lattice.cols) lattice.graph.add_edge(id, id + 1);
            if (r + 1 < lattice.rows) lattice.graph.add_edge(id, id + lattice.cols);
        }
    }
    return lattice;
}

Preparation prepare_with_log(const Lattice& lattice) {
    Preparation out{lattice, {}};
    auto& lat = out.lattice;
    // std::map iterates in ascending (row, col).
    for (auto& [coord, q] : lat.qubits) {
        if (q.role != QubitRole::Pending) continue;
        if (q.on_wire_run) {
            q.role = QubitRole::Wire;
            q.label = kSigmaX;
            continue;
        }
        q.role = QubitRole::Superfluous;
        q.label = kSigmaZ;
        auto [graph, record] = measure(std::move(lat.graph), q.id, {Axis::Z, Sign::Plus});
        lat.graph = std::move(graph);
        out.removals.push_back(std::move(record));
    }
    return out;
}

GraphState to_graph_state(const Lattice& lattice) { return lattice.graph; }

nlohmann::json to_json(const Lattice& lattice) {
    nlohmann::json qubits = nlohmann::json::array();
    for (const auto& [coord, q] : lattice.qubits) {
        nlohmann::json entry{{"id", q.id},
                             {"row", coord.row},
                             {"col", coord.col},
                             {"role", std::string(to_string(q.role))},
                             {"label", q.label},
                             {"highlight", std::string(to_string(q.highlight))}};
        if (q.tile) entry["tile"] = *q.tile;
        qubits.push_back(std::move(entry));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : lattice.graph.edges()) edges.push_back({e.a, e.b});
    return {{"dims", {lattice.rows, lattice.cols}}, {"qubits", std::move(qubits)}, {"edges", std::move(edges)}};
}

}  // namespace latticeforge
