#pragma once

#include "latticeforge/error.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace latticeforge {

using VertexId = std::int64_t;

/// Largest lattice extent along either axis.
inline constexpr int kMaxLatticeDim = 121;

struct Coord {
    int row = 0;
    int col = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
};

bool in_lattice_bounds(Coord c) noexcept;

struct Edge {
    VertexId a;
    VertexId b;  // a < b

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph whose vertices are qubits and whose edges are CZ
/// interactions. Vertex ids are never reused once issued by add_vertex.
class GraphState {
   public:
    GraphState() = default;

    static GraphState with_vertices(const std::vector<VertexId>& ids);
    static GraphState from_edges(const std::vector<VertexId>& ids, const std::vector<std::pair<VertexId, VertexId>>& edges);

    bool contains(VertexId v) const { return adjacency_.contains(v); }
    const std::set<VertexId>& neighbours(VertexId v) const;
    bool has_edge(VertexId a, VertexId b) const;

    std::vector<VertexId> vertices() const;
    std::vector<Edge> edges() const;
    std::size_t vertex_count() const { return adjacency_.size(); }
    std::size_t edge_count() const;
    bool empty() const { return adjacency_.empty(); }

    std::optional<Coord> coord(VertexId v) const;
    bool has_coords() const { return !coords_.empty(); }
    VertexId next_id() const { return next_id_; }

    // In-place mutators. The free functions below wrap these as value-to-value
    // operations.
    VertexId add_vertex(std::optional<Coord> at = std::nullopt);
    void insert_vertex(VertexId id, std::optional<Coord> at = std::nullopt);
    void remove_vertex(VertexId v);
    void add_edge(VertexId a, VertexId b);
    void remove_edge(VertexId a, VertexId b);
    void toggle_edge(VertexId a, VertexId b);
    void local_complement(VertexId a);

    /// Same vertices, edges and coordinates. The id counter is not compared.
    friend bool operator==(const GraphState& lhs, const GraphState& rhs) {
        return lhs.adjacency_ == rhs.adjacency_ && lhs.coords_ == rhs.coords_;
    }

   private:
    void require(VertexId v) const;

    std::map<VertexId, std::set<VertexId>> adjacency_;
    std::map<VertexId, Coord> coords_;
    std::map<Coord, VertexId> occupied_;
    VertexId next_id_ = 0;
};

enum class Axis { X, Y, Z };
enum class Sign { Plus, Minus };

char to_char(Axis axis) noexcept;
Axis parse_axis(std::string_view text);

struct MeasurementBasis {
    Axis axis = Axis::Z;
    Sign sign = Sign::Plus;

    friend bool operator==(const MeasurementBasis&, const MeasurementBasis&) = default;
};

/// Opaque stand-in for the local Clifford a remaining vertex must absorb after
/// a Pauli measurement. Only the data needed to name it is kept.
struct CorrectionDescriptor {
    Axis axis;
    Sign sign;
    std::optional<VertexId> b0;

    std::string label() const;
    friend bool operator==(const CorrectionDescriptor&, const CorrectionDescriptor&) = default;
};

struct MeasurementRecord {
    VertexId vertex = 0;
    MeasurementBasis basis;
    std::optional<VertexId> chosen_b0;
    std::map<VertexId, CorrectionDescriptor> correction;
};

// ---- operations ---------------------------------------------------------

GraphState create_grid(int rows, int cols);

struct AddVertex {
    std::optional<Coord> at;
};
struct RemoveVertex {
    VertexId vertex;
};
struct AddEdge {
    VertexId a;
    VertexId b;
};
struct RemoveEdge {
    VertexId a;
    VertexId b;
};
using EditAction = std::variant<AddVertex, RemoveVertex, AddEdge, RemoveEdge>;

GraphState edit(GraphState g, const EditAction& action);

GraphState local_complement(GraphState g, VertexId a);

std::pair<GraphState, MeasurementRecord> measure(GraphState g, VertexId a, MeasurementBasis basis,
                                                 std::optional<VertexId> b0 = std::nullopt);

inline std::size_t cz_count(const GraphState& g) { return g.edge_count(); }

struct CzMinimisation {
    GraphState graph;
    std::vector<VertexId> sequence;  // local complementations, in application order
    std::size_t explored = 0;
    bool proven_minimal = false;     // false when the budget ran out first
};

CzMinimisation minimize_cz(const GraphState& g, std::size_t node_budget);

inline constexpr std::size_t kDefaultOrbitBudget = 2'000'000;

bool lc_equivalent(const GraphState& g1, const GraphState& g2, std::size_t node_budget = kDefaultOrbitBudget);

bool is_connected(const GraphState& g);

// ---- JSON -----------------------------------------------------------------

nlohmann::json to_json(const GraphState& g);
GraphState graph_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MeasurementRecord& record);

}  // namespace latticeforge
