#pragma once

#include "latticeforge/algorithm_grid.hpp"
#include "latticeforge/graph_state.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace latticeforge {

enum class QubitRole {
    PatternMember,
    Wire,
    Superfluous,
    Input,
    Readout,
    Pending,  // integer-ID qubit awaiting preparation
};

enum class Highlight { CliffordRed, NonCliffordBlue, None };

std::string_view to_string(QubitRole role) noexcept;
std::string_view to_string(Highlight highlight) noexcept;

struct LatticeQubit {
    VertexId id = 0;
    Coord coord;
    QubitRole role = QubitRole::Pending;
    std::string label;
    Highlight highlight = Highlight::None;
    std::optional<std::size_t> tile;  // index into the grid's sorted tiles
    bool on_wire_run = false;         // lies between two footprints on a logical row
};

struct Lattice {
    int rows = 0;
    int cols = 0;
    std::map<Coord, LatticeQubit> qubits;
    GraphState graph;

    std::size_t count(QubitRole role) const;
};

/// Measurement labels for the members of a tile footprint, in the order of
/// footprint(tile).cells().
const std::vector<std::string>& pattern_labels(TileKind kind);

Lattice open_algorithm(const AlgorithmGrid& grid);

struct Preparation {
    Lattice lattice;
    std::vector<MeasurementRecord> removals;  // sigma-z deletions, ascending (row, col)
};

Preparation prepare_with_log(const Lattice& lattice);
inline Lattice prepare(const Lattice& lattice) { return prepare_with_log(lattice).lattice; }

GraphState to_graph_state(const Lattice& lattice);

nlohmann::json to_json(const Lattice& lattice);

}  // namespace latticeforge
