#pragma once

#include "latticeforge/graph_state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace latticeforge {

enum class TileKind { Input, Readout, Hadamard, S, T, RotX, RotY, RotZ, CNOT, Wire };

std::string_view to_string(TileKind kind) noexcept;
std::optional<TileKind> parse_tile_kind(std::string_view text) noexcept;
bool is_rotation(TileKind kind) noexcept;

struct Tile {
    TileKind kind = TileKind::Wire;
    /// Southern row for CNOT; eastern column for every pattern.
    Coord anchor;
    std::optional<double> theta;  // radians, rotation kinds only

    std::string name() const;  // e.g. "rotz@[2, 14]"

    friend bool operator==(const Tile&, const Tile&) = default;
};

/// A horizontal run of footprint cells on one row.
struct Segment {
    int row;
    int west;
    int east;
};

struct Footprint {
    std::vector<Segment> chains;
    std::vector<Coord> extras;  // CNOT bridge qubit

    std::vector<Coord> cells() const;
};

/// Cell layout of a tile; assumes the anchor passes the geometry checks.
Footprint footprint(const Tile& tile);

struct Metrics {
    int min_rows = 0;
    int min_eastern_col = 0;
    std::size_t qubit_count = 0;
    std::size_t t_count = 0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string rule;  // "collision", "bounds", "geometry", "theta", "theta-range"
    std::string message;
    std::vector<std::string> tiles;
    std::vector<Coord> coords;
};

class AlgorithmGrid {
   public:
    AlgorithmGrid() = default;
    explicit AlgorithmGrid(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    const std::vector<Tile>& tiles() const { return tiles_; }
    bool empty() const { return tiles_.empty(); }

    /// Tiles ordered by (row, col) then kind, as they are serialised.
    std::vector<Tile> sorted_tiles() const;

    friend AlgorithmGrid with_tile_unchecked(AlgorithmGrid grid, const Tile& tile);
    friend AlgorithmGrid grid_from_json(const nlohmann::json& doc);

    /// Same tiles irrespective of placement order.
    friend bool operator==(const AlgorithmGrid& a, const AlgorithmGrid& b) {
        return a.name_ == b.name_ && a.sorted_tiles() == b.sorted_tiles();
    }

   private:
    std::string name_;
    std::vector<Tile> tiles_;
};

/// Rejects the tile with the first error diagnostic it would introduce.
AlgorithmGrid place_tile(AlgorithmGrid grid, const Tile& tile);

/// Placement without checks, for assembling grids that are validated later.
AlgorithmGrid with_tile_unchecked(AlgorithmGrid grid, const Tile& tile);

Metrics metrics(const AlgorithmGrid& grid);

std::vector<Diagnostic> validate(const AlgorithmGrid& grid);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Rows that carry a chain of qubits (bridge-only rows excluded), ascending.
std::vector<int> logical_rows(const AlgorithmGrid& grid);

/// For each logical row, the cells strictly between consecutive footprints.
std::vector<Coord> interposed_wire_cells(const AlgorithmGrid& grid);

double normalise_theta(double theta);
bool theta_in_range(double theta);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const Diagnostic& d);
nlohmann::json to_json(const std::vector<Diagnostic>& ds);

nlohmann::json to_json(const AlgorithmGrid& grid);
AlgorithmGrid grid_from_json(const nlohmann::json& doc);

/// Gate-list circuit: {"qubits": n, "ops": [{"gate", "targets", "param"?}]}.
AlgorithmGrid ingest_circuit_json(const nlohmann::json& doc);

}  // namespace latticeforge
