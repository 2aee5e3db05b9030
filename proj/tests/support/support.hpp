#pragma once

#include "latticeforge/algorithm_grid.hpp"
#include "latticeforge/graph_state.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace lftest {

// Adjacency rows as bitmasks; vertex i has id i.
struct SmallGraph {
    int n = 0;
    std::vector<std::uint32_t> adj;

    std::size_t edge_count() const;
    friend bool operator==(const SmallGraph&, const SmallGraph&) = default;
};

/// One representative per isomorphism class on n vertices.
const std::vector<SmallGraph>& graph_classes(int n);

bool connected(const SmallGraph& g);
SmallGraph random_graph(std::mt19937_64& rng, int n, double p);
SmallGraph from_graph_state(const latticeforge::GraphState& g);  // requires ids 0..n-1
latticeforge::GraphState to_graph_state(const SmallGraph& g);

SmallGraph path(int n);
SmallGraph star(int n);  // centre 0
SmallGraph complete(int n);

/// Labelled LC orbit by plain breadth-first search over adjacency rows.
std::set<std::vector<std::uint32_t>> brute_orbit(const SmallGraph& g);

/// Cells of every tile footprint, computed from the tile shapes directly.
std::vector<latticeforge::Coord> tile_cells(const latticeforge::Tile& tile);

/// Footprint cells plus the gaps between footprints along each chain row.
std::size_t independent_qubit_count(const std::vector<latticeforge::Tile>& tiles);

std::vector<latticeforge::Tile> reference_tiles();

/// Random collision-free grid: row-by-row chains of single-qubit tiles with
/// occasional CNOTs between rows two apart.
latticeforge::AlgorithmGrid random_valid_grid(std::mt19937_64& rng);

std::filesystem::path source_dir();
std::string read_file(const std::filesystem::path& path);

/// Loopback HTTP endpoint that answers every POST with a fixed reply.
class StubEndpoint {
   public:
    StubEndpoint(int status, std::string body);
    ~StubEndpoint();

    std::string url(const std::string& path = "/submit") const;
    std::string last_body() const;
    std::string last_content_type() const;
    std::size_t hits() const;

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Scoped environment variable override.
class EnvGuard {
   public:
    EnvGuard(const char* name, const char* value);  // nullptr unsets
    ~EnvGuard();

   private:
    std::string name_;
    std::optional<std::string> saved_;
};

}  // namespace lftest
