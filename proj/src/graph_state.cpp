#include "latticeforge/graph_state.hpp"

#include "orbit.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace latticeforge {

namespace {

std::string vertex_name(VertexId v) { return "vertex " + std::to_string(v); }

[[noreturn]] void not_found(VertexId v) {
    throw Error(ErrorKind::NotFound, vertex_name(v) + " does not exist", {{"vertex", v}});
}

}  // namespace

bool in_lattice_bounds(Coord c) noexcept {
    return c.row >= 0 && c.row < kMaxLatticeDim && c.col >= 0 && c.col < kMaxLatticeDim;
}

// ---- GraphState -----------------------------------------------------------

GraphState GraphState::with_vertices(const std::vector<VertexId>& ids) {
    GraphState g;
    for (auto id : ids) g.insert_vertex(id);
    return g;
}

GraphState GraphState::from_edges(const std::vector<VertexId>& ids,
                                  const std::vector<std::pair<VertexId, VertexId>>& edges) {
    GraphState g = with_vertices(ids);
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

void GraphState::require(VertexId v) const {
    if (!contains(v)) not_found(v);
}

const std::set<VertexId>& GraphState::neighbours(VertexId v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) not_found(v);
    return it->second;
}

bool GraphState::has_edge(VertexId a, VertexId b) const {
    auto it = adjacency_.find(a);
    return it != adjacency_.end() && it->second.contains(b);
}

std::vector<VertexId> GraphState::vertices() const {
    std::vector<VertexId> out;
    out.reserve(adjacency_.size());
    for (const auto& [v, _] : adjacency_) out.push_back(v);
    return out;
}

std::vector<Edge> GraphState::edges() const {
    std::vector<Edge> out;
    for (const auto& [v, nbrs] : adjacency_) {
        for (auto u : nbrs) {
            if (v < u) out.push_back({v, u});
        }
    }
    return out;
}

std::size_t GraphState::edge_count() const {
    std::size_t twice = 0;
    for (const auto& [_, nbrs] : adjacency_) twice += nbrs.size();
    return twice / 2;
}

std::optional<Coord> GraphState::coord(VertexId v) const {
    auto it = coords_.find(v);
    if (it == coords_.end()) return std::nullopt;
    return it->second;
}

VertexId GraphState::add_vertex(std::optional<Coord> at) {
    const VertexId id = next_id_;
    insert_vertex(id, at);
    return id;
}

void GraphState::insert_vertex(VertexId id, std::optional<Coord> at) {
    if (id < 0) {
        throw Error(ErrorKind::Invariant, "vertex ids must be non-negative", {{"vertex", id}});
    }
    if (contains(id)) {
        throw Error(ErrorKind::Invariant, vertex_name(id) + " already exists", {{"vertex", id}});
    }
    if (at) {
        if (!in_lattice_bounds(*at)) {
            throw Error(ErrorKind::Bounds,
                        "coordinate [" + std::to_string(at->row) + ", " + std::to_string(at->col) +
                            "] lies outside the [121, 121] lattice",
                        {{"vertex", id}, {"row", at->row}, {"col", at->col}});
        }
        if (auto hit = occupied_.find(*at); hit != occupied_.end()) {
            throw Error(ErrorKind::Invariant,
                        "coordinate [" + std::to_string(at->row) + ", " + std::to_string(at->col) +
                            "] already holds " + vertex_name(hit->second),
                        {{"vertex", id}, {"occupant", hit->second}});
        }
        coords_[id] = *at;
        occupied_[*at] = id;
    }
    adjacency_[id];
    next_id_ = std::max(next_id_, id + 1);
}

void GraphState::remove_vertex(VertexId v) {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) not_found(v);
    for (auto u : it->second) adjacency_[u].erase(v);
    adjacency_.erase(it);
    if (auto c = coords_.find(v); c != coords_.end()) {
        occupied_.erase(c->second);
        coords_.erase(c);
    }
}

void GraphState::add_edge(VertexId a, VertexId b) {
    if (a == b) {
        throw Error(ErrorKind::Invariant, "self-join on " + vertex_name(a) + " is not a simple-graph edge",
                    {{"vertex", a}});
    }
    require(a);
    require(b);
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
}

void GraphState::remove_edge(VertexId a, VertexId b) {
    require(a);
    require(b);
    adjacency_[a].erase(b);
    adjacency_[b].erase(a);
}

void GraphState::toggle_edge(VertexId a, VertexId b) {
    if (has_edge(a, b)) {
        remove_edge(a, b);
    } else {
        add_edge(a, b);
    }
}

void GraphState::local_complement(VertexId a) {
    const std::vector<VertexId> nbrs(neighbours(a).begin(), neighbours(a).end());
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) toggle_edge(nbrs[i], nbrs[j]);
    }
}

// ---- bases and descriptors --------------------------------------------------

char to_char(Axis axis) noexcept {
    switch (axis) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

Axis parse_axis(std::string_view text) {
    if (text == "X" || text == "x") return Axis::X;
    if (text == "Y" || text == "y") return Axis::Y;
    if (text == "Z" || text == "z") return Axis::Z;
    throw Error(ErrorKind::Parse, "unknown measurement axis '" + std::string(text) + "'");
}

std::string CorrectionDescriptor::label() const {
    std::string out = "U[";
    out += to_char(axis);
    out += sign == Sign::Plus ? ",+" : ",-";
    if (b0) out += ",b0=" + std::to_string(*b0);
    out += "]";
    return out;
}

// ---- operations -------------------------------------------------------------

GraphState create_grid(int rows, int cols) {
    auto check = [](int value, const char* name) {
        if (value < 1 || value > kMaxLatticeDim) {
            throw Error(ErrorKind::Bounds,
                        std::string(name) + " = " + std::to_string(value) + " is outside [1, 121]",
                        {{"dimension", name}, {"value", value}});
        }
    };
    check(rows, "rows");
    check(cols, "cols");

    GraphState g;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) g.insert_vertex(VertexId{r} * cols + c, Coord{r, c});
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const VertexId id = VertexId{r} * cols + c;
            if (c + 1 < cols) g.add_edge(id, id + 1);
            if (r + 1 < rows) g.add_edge(id, id + cols);
        }
    }
    return g;
}

GraphState edit(GraphState g, const EditAction& action) {
    std::visit(
        [&](const auto& act) {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, AddVertex>) {
                g.add_vertex(act.at);
            } else if constexpr (std::is_same_v<T, RemoveVertex>) {
                g.remove_vertex(act.vertex);
            } else if constexpr (std::is_same_v<T, AddEdge>) {
                g.add_edge(act.a, act.b);
            } else {
                g.remove_edge(act.a, act.b);
            }
        },
        action);
    return g;
}

GraphState local_complement(GraphState g, VertexId a) {
    g.local_complement(a);
    return g;
}

std::pair<GraphState, MeasurementRecord> measure(GraphState g, VertexId a, MeasurementBasis basis,
                                                 std::optional<VertexId> b0) {
    const std::set<VertexId> n_a = g.neighbours(a);

    MeasurementRecord record;
    record.vertex = a;
    record.basis = basis;

    if (b0 && basis.axis != Axis::X) {
        throw Error(ErrorKind::InvalidChoice, "b0 only applies to X measurements", {{"b0", *b0}});
    }
    if (b0 && !n_a.contains(*b0)) {
        throw Error(ErrorKind::InvalidChoice,
                    vertex_name(*b0) + " is not a neighbour of " + vertex_name(a),
                    {{"vertex", a}, {"b0", *b0}});
    }

    std::set<VertexId> touched;
    switch (basis.axis) {
        case Axis::Z:
            touched = n_a;
            g.remove_vertex(a);
            break;
        case Axis::Y:
            touched = n_a;
            g.local_complement(a);
            g.remove_vertex(a);
            break;
        case Axis::X: {
            if (n_a.empty()) {
                g.remove_vertex(a);
                break;
            }
            const VertexId chosen = b0 ? *b0 : *n_a.begin();
            record.chosen_b0 = chosen;
            touched = n_a;
            const auto& n_b = g.neighbours(chosen);
            touched.insert(n_b.begin(), n_b.end());
            touched.insert(chosen);
            touched.erase(a);

            g.local_complement(chosen);
            g.local_complement(a);
            g.remove_vertex(a);
            g.local_complement(chosen);
            break;
        }
    }

    const CorrectionDescriptor descriptor{basis.axis, basis.sign, record.chosen_b0};
    for (auto v : touched) record.correction.emplace(v, descriptor);
    return {std::move(g), std::move(record)};
}

// ---- LC-orbit searches -------------------------------------------------------

namespace detail {

DenseGraph DenseGraph::from(const GraphState& g) {
    if (g.vertex_count() > kMaxDenseVertices) {
        throw Error(ErrorKind::Resource,
                    "orbit search supports at most 64 vertices, graph has " + std::to_string(g.vertex_count()));
    }
    DenseGraph d;
    d.ids = g.vertices();
    d.rows.assign(d.ids.size(), 0);
    std::unordered_map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < d.ids.size(); ++i) index[d.ids[i]] = i;
    for (const auto& e : g.edges()) {
        const auto i = index[e.a];
        const auto j = index[e.b];
        d.rows[i] |= std::uint64_t{1} << j;
        d.rows[j] |= std::uint64_t{1} << i;
    }
    return d;
}

}  // namespace detail

namespace {

struct OrbitNode {
    std::vector<std::uint64_t> rows;
    std::size_t parent;
    std::size_t via;  // vertex index applied to parent
};

constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

// Breadth-first walk over the labelled LC orbit. `visit` is called once per
// newly discovered node (root included) and may return true to stop early.
// Returns true if the whole orbit was enumerated.
template <typename Visit>
bool walk_orbit(const detail::DenseGraph& start, std::size_t budget, std::vector<OrbitNode>& nodes, Visit&& visit) {
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, detail::RowsHash> seen;
    nodes.clear();
    nodes.push_back({start.rows, kRoot, 0});
    seen.emplace(start.rows, 0);
    if (visit(std::size_t{0})) return false;

    const std::size_t n = start.rows.size();
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        for (std::size_t v = 0; v < n; ++v) {
            if (nodes[head].rows[v] == 0) continue;  // isolated vertex: tau is the identity
            detail::DenseGraph child{start.ids, nodes[head].rows};
            child.local_complement(v);
            if (seen.contains(child.rows)) continue;
            if (nodes.size() >= budget) return false;
            seen.emplace(child.rows, nodes.size());
            nodes.push_back({std::move(child.rows), head, v});
            if (visit(nodes.size() - 1)) return false;
        }
    }
    return true;
}

std::vector<std::size_t> path_to(const std::vector<OrbitNode>& nodes, std::size_t idx) {
    std::vector<std::size_t> path;
    while (nodes[idx].parent != kRoot) {
        path.push_back(nodes[idx].via);
        idx = nodes[idx].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::size_t popcount_edges(const std::vector<std::uint64_t>& rows) {
    std::size_t twice = 0;
    for (auto r : rows) twice += static_cast<std::size_t>(std::popcount(r));
    return twice / 2;
}

}  // namespace

CzMinimisation minimize_cz(const GraphState& g, std::size_t node_budget) {
    if (node_budget == 0) {
        throw Error(ErrorKind::Domain, "node budget must be positive");
    }
    const auto dense = detail::DenseGraph::from(g);

    std::vector<OrbitNode> nodes;
    std::size_t best = 0;
    std::size_t best_edges = dense.edge_count();
    const bool complete = walk_orbit(dense, node_budget, nodes, [&](std::size_t idx) {
        const auto edges = popcount_edges(nodes[idx].rows);
        if (edges < best_edges) {
            best_edges = edges;
            best = idx;
        }
        return false;
    });

    CzMinimisation result;
    result.graph = g;
    for (auto v : path_to(nodes, best)) {
        result.sequence.push_back(dense.ids[v]);
        result.graph.local_complement(dense.ids[v]);
    }
    result.explored = nodes.size();
    result.proven_minimal = complete;
    return result;
}

bool lc_equivalent(const GraphState& g1, const GraphState& g2, std::size_t node_budget) {
    if (g1.vertices() != g2.vertices()) {
        throw Error(ErrorKind::Comparability, "LC-equivalence needs identical vertex sets");
    }
    const auto a = detail::DenseGraph::from(g1);
    const auto b = detail::DenseGraph::from(g2);
    if (a.rows == b.rows) return true;

    std::vector<OrbitNode> nodes;
    bool found = false;
    const bool complete = walk_orbit(a, node_budget, nodes, [&](std::size_t idx) {
        found = nodes[idx].rows == b.rows;
        return found;
    });
    if (found) return true;
    if (!complete) {
        throw Error(ErrorKind::Resource,
                    "LC orbit exceeds the budget of " + std::to_string(node_budget) + " graphs",
                    {{"budget", node_budget}});
    }
    return false;
}

bool is_connected(const GraphState& g) {
    if (g.empty()) return true;
    std::set<VertexId> seen;
    std::deque<VertexId> queue{g.vertices().front()};
    seen.insert(queue.front());
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto u : g.neighbours(v)) {
            if (seen.insert(u).second) queue.push_back(u);
        }
    }
    return seen.size() == g.vertex_count();
}

// ---- JSON -----------------------------------------------------------------

nlohmann::json to_json(const GraphState& g) {
    nlohmann::json vertices = nlohmann::json::array();
    for (auto v : g.vertices()) {
        nlohmann::json entry{{"id", v}};
        if (auto c = g.coord(v)) {
            entry["row"] = c->row;
            entry["col"] = c->col;
        }
        vertices.push_back(std::move(entry));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.a, e.b});
    return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Parse, path + ": " + what, {{"path", path}});
}

std::int64_t require_int(const nlohmann::json& node, const std::string& path) {
    if (!node.is_number_integer()) schema_error(path, "expected an integer");
    return node.get<std::int64_t>();
}

}  // namespace

GraphState graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) schema_error("$", "expected an object");
    if (!doc.contains("vertices") || !doc["vertices"].is_array()) schema_error("$.vertices", "expected an array");
    GraphState g;
    const auto& vertices = doc["vertices"];
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto path = "$.vertices[" + std::to_string(i) + "]";
        const auto& v = vertices[i];
        if (!v.is_object()) schema_error(path, "expected an object");
        if (!v.contains("id")) schema_error(path + ".id", "missing");
        const auto id = require_int(v["id"], path + ".id");
        const bool has_row = v.contains("row") && !v["row"].is_null();
        const bool has_col = v.contains("col") && !v["col"].is_null();
        if (has_row != has_col) schema_error(path, "row and col must appear together");
        std::optional<Coord> at;
        if (has_row) {
            at = Coord{static_cast<int>(require_int(v["row"], path + ".row")),
                       static_cast<int>(require_int(v["col"], path + ".col"))};
        }
        g.insert_vertex(id, at);
    }
    if (doc.contains("edges")) {
        const auto& edges = doc["edges"];
        if (!edges.is_array()) schema_error("$.edges", "expected an array");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto path = "$.edges[" + std::to_string(i) + "]";
            if (!edges[i].is_array() || edges[i].size() != 2) schema_error(path, "expected a pair");
            g.add_edge(require_int(edges[i][0], path + "[0]"), require_int(edges[i][1], path + "[1]"));
        }
    }
    return g;
}

nlohmann::json to_json(const MeasurementRecord& record) {
    nlohmann::json out{{"vertex", record.vertex},
                       {"basis", std::string(1, to_char(record.basis.axis))},
                       {"sign", record.basis.sign == Sign::Plus ? "+" : "-"}};
    out["b0"] = record.chosen_b0 ? nlohmann::json(*record.chosen_b0) : nlohmann::json(nullptr);
    nlohmann::json correction = nlohmann::json::object();
    for (const auto& [v, d] : record.correction) correction[std::to_string(v)] = d.label();
    out["correction"] = std::move(correction);
    return out;
}

}  // namespace latticeforge
