#include "support.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace lftest {

using latticeforge::Coord;
using latticeforge::GraphState;
using latticeforge::Tile;
using latticeforge::TileKind;

std::size_t SmallGraph::edge_count() const {
    std::size_t twice = 0;
    for (auto row : adj) twice += std::popcount(row);
    return twice / 2;
}

namespace {

// Upper-triangle bit string of g relabelled by `order` (order[i] = old vertex
// placed at position i).
std::uint32_t encode(const SmallGraph& g, const std::vector<int>& order) {
    std::uint32_t code = 0;
    int bit = 0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j, ++bit) {
            if (g.adj[order[i]] >> order[j] & 1u) code |= 1u << bit;
        }
    }
    return code;
}

// Minimum encoding over all orderings that sort vertices by degree; permuting
// only within equal-degree blocks keeps the result label-independent.
std::pair<std::vector<int>, std::uint32_t> canonical(const SmallGraph& g) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    auto degree = [&](int v) { return std::popcount(g.adj[v]); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree(a) < degree(b); });

    std::vector<std::pair<int, int>> blocks;  // [begin, end)
    for (int i = 0; i < g.n;) {
        int j = i;
        while (j < g.n && degree(order[j]) == degree(order[i])) ++j;
        blocks.emplace_back(i, j);
        i = j;
    }
    for (auto [b, e] : blocks) std::sort(order.begin() + b, order.begin() + e);

    std::uint32_t best = UINT32_MAX;
    // Odometer over per-block permutations.
    while (true) {
        best = std::min(best, encode(g, order));
        std::size_t k = 0;
        for (; k < blocks.size(); ++k) {
            auto [b, e] = blocks[k];
            if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
        }
        if (k == blocks.size()) break;
    }
    std::vector<int> degrees(g.n);
    for (int i = 0; i < g.n; ++i) degrees[i] = degree(order[i]);
    std::sort(degrees.begin(), degrees.end());
    return {degrees, best};
}

SmallGraph empty_graph(int n) { return SmallGraph{n, std::vector<std::uint32_t>(n, 0)}; }

}  // namespace

const std::vector<SmallGraph>& graph_classes(int n) {
    static std::recursive_mutex mu;
    static std::map<int, std::vector<SmallGraph>> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    std::vector<SmallGraph> out;
    if (n == 0) {
        out.push_back(empty_graph(0));
    } else {
        const auto& smaller = graph_classes(n - 1);
        std::set<std::pair<std::vector<int>, std::uint32_t>> seen;
        for (const auto& base : smaller) {
            for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
                SmallGraph g = base;
                g.n = n;
                g.adj.push_back(mask);
                for (int v = 0; v < n - 1; ++v) {
                    if (mask >> v & 1u) g.adj[v] |= 1u << (n - 1);
                }
                if (seen.insert(canonical(g)).second) out.push_back(std::move(g));
            }
        }
    }
    return cache.emplace(n, std::move(out)).first->second;
}

bool connected(const SmallGraph& g) {
    if (g.n == 0) return true;
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int v = 0; v < g.n; ++v) {
            if (frontier >> v & 1u) next |= g.adj[v];
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (g.n == 32 ? UINT32_MAX : (1u << g.n) - 1);
}

SmallGraph random_graph(std::mt19937_64& rng, int n, double p) {
    SmallGraph g = empty_graph(n);
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng)) {
                g.adj[i] |= 1u << j;
                g.adj[j] |= 1u << i;
            }
        }
    }
    return g;
}

SmallGraph from_graph_state(const GraphState& gs) {
    SmallGraph g = empty_graph(static_cast<int>(gs.vertex_count()));
    for (const auto& e : gs.edges()) {
        g.adj[e.a] |= 1u << e.b;
        g.adj[e.b] |= 1u << e.a;
    }
    return g;
}

GraphState to_graph_state(const SmallGraph& g) {
    std::vector<latticeforge::VertexId> ids(g.n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<std::pair<latticeforge::VertexId, latticeforge::VertexId>> edges;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            if (g.adj[i] >> j & 1u) edges.emplace_back(i, j);
        }
    }
    return GraphState::from_edges(ids, edges);
}

SmallGraph path(int n) {
    SmallGraph g = empty_graph(n);
    for (int i = 0; i + 1 < n; ++i) {
        g.adj[i] |= 1u << (i + 1);
        g.adj[i + 1] |= 1u << i;
    }
    return g;
}

SmallGraph star(int n) {
    SmallGraph g = empty_graph(n);
    for (int i = 1; i < n; ++i) {
        g.adj[0] |= 1u << i;
        g.adj[i] |= 1u;
    }
    return g;
}

SmallGraph complete(int n) {
    SmallGraph g = empty_graph(n);
    const std::uint32_t all = (1u << n) - 1;
    for (int i = 0; i < n; ++i) g.adj[i] = all & ~(1u << i);
    return g;
}

std::set<std::vector<std::uint32_t>> brute_orbit(const SmallGraph& g) {
    std::set<std::vector<std::uint32_t>> seen{g.adj};
    std::deque<std::vector<std::uint32_t>> queue{g.adj};
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (int a = 0; a < g.n; ++a) {
            auto next = cur;
            const std::uint32_t nbrs = cur[a];
            for (int u = 0; u < g.n; ++u) {
                if (nbrs >> u & 1u) next[u] ^= nbrs & ~(1u << u);
            }
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
    return seen;
}

std::vector<Coord> tile_cells(const Tile& tile) {
    const int r = tile.anchor.row;
    const int c = tile.anchor.col;
    std::vector<Coord> cells;
    switch (tile.kind) {
        case TileKind::Wire:
        case TileKind::Input:
        case TileKind::Readout:
            cells.push_back({r, c});
            break;
        case TileKind::CNOT:
            for (int k = c - 6; k <= c; ++k) cells.push_back({r - 2, k});
            for (int k = c - 6; k <= c; ++k) cells.push_back({r, k});
            cells.push_back({r - 1, c - 3});
            break;
        default:
            for (int k = c - 4; k <= c; ++k) cells.push_back({r, k});
            break;
    }
    return cells;
}

std::size_t independent_qubit_count(const std::vector<Tile>& tiles) {
    std::set<Coord> cells;
    std::map<int, std::pair<int, int>> chain_span;  // row -> [min, max] of chain cells
    for (const auto& t : tiles) {
        for (const auto& cell : tile_cells(t)) {
            cells.insert(cell);
            const bool bridge = t.kind == TileKind::CNOT && cell.row == t.anchor.row - 1;
            if (bridge) continue;
            auto [it, fresh] = chain_span.try_emplace(cell.row, cell.col, cell.col);
            if (!fresh) {
                it->second.first = std::min(it->second.first, cell.col);
                it->second.second = std::max(it->second.second, cell.col);
            }
        }
    }
    for (const auto& [row, span] : chain_span) {
        for (int c = span.first; c <= span.second; ++c) cells.insert({row, c});
    }
    return cells.size();
}

std::vector<Tile> reference_tiles() {
    const std::vector<std::tuple<TileKind, int, int>> rows{
        {TileKind::Hadamard, 0, 4},  {TileKind::Hadamard, 2, 4},  {TileKind::Hadamard, 4, 4},
        {TileKind::Hadamard, 5, 4},  {TileKind::Hadamard, 7, 4},  {TileKind::CNOT, 2, 10},
        {TileKind::RotZ, 2, 14},     {TileKind::S, 0, 28},        {TileKind::S, 2, 28},
        {TileKind::CNOT, 4, 34},     {TileKind::T, 4, 38},        {TileKind::CNOT, 4, 44},
        {TileKind::CNOT, 7, 10},     {TileKind::T, 7, 14},        {TileKind::CNOT, 7, 24},
        {TileKind::RotZ, 0, 48},     {TileKind::RotZ, 2, 48},     {TileKind::RotZ, 4, 48},
        {TileKind::RotZ, 5, 48},     {TileKind::Hadamard, 0, 53}, {TileKind::Hadamard, 2, 53},
        {TileKind::Hadamard, 4, 53}, {TileKind::Hadamard, 5, 53}, {TileKind::Hadamard, 7, 53},
    };
    std::vector<Tile> out;
    for (auto [kind, r, c] : rows) out.push_back(Tile{kind, {r, c}, std::nullopt});
    return out;
}

latticeforge::AlgorithmGrid random_valid_grid(std::mt19937_64& rng) {
    using latticeforge::AlgorithmGrid;
    const int wires = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<int> cursor(wires, -1);  // eastern chain column per wire, -1 when empty
    std::vector<bool> shareable(wires, false);  // a pattern may start on the cursor cell
    AlgorithmGrid grid("random");

    const std::vector<TileKind> singles{TileKind::Hadamard, TileKind::S,    TileKind::T,
                                        TileKind::RotX,     TileKind::RotY, TileKind::RotZ};
    std::uniform_int_distribution<int> gap(0, 3);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    std::bernoulli_distribution coin(0.5);

    if (coin(rng)) {
        for (int w = 0; w < wires; ++w) {
            grid = latticeforge::place_tile(grid, Tile{TileKind::Input, {2 * w, 0}, std::nullopt});
            cursor[w] = 0;
            shareable[w] = true;
        }
    }

    const int steps = std::uniform_int_distribution<int>(0, 14)(rng);
    for (int s = 0; s < steps; ++s) {
        const int choice = std::uniform_int_distribution<int>(0, 9)(rng);
        if (choice < 7 || wires < 2) {
            const int w = std::uniform_int_distribution<int>(0, wires - 1)(rng);
            const int west = cursor[w] < 0 ? gap(rng) : cursor[w] + gap(rng) + (shareable[w] ? 0 : 1);
            if (west + 4 >= latticeforge::kMaxLatticeDim) continue;
            Tile t{singles[std::uniform_int_distribution<std::size_t>(0, singles.size() - 1)(rng)], {2 * w, west + 4},
                   std::nullopt};
            if (latticeforge::is_rotation(t.kind) && coin(rng)) t.theta = angle(rng);
            grid = latticeforge::place_tile(grid, t);
            cursor[w] = west + 4;
            shareable[w] = true;
        } else if (choice < 9) {
            const int w = std::uniform_int_distribution<int>(1, wires - 1)(rng);
            const int base = std::max(cursor[w], cursor[w - 1]);
            const bool share = (cursor[w] < base || shareable[w]) && (cursor[w - 1] < base || shareable[w - 1]);
            const int west = base < 0 ? gap(rng) : base + gap(rng) + (share ? 0 : 1);
            if (west + 6 >= latticeforge::kMaxLatticeDim) continue;
            grid = latticeforge::place_tile(grid, Tile{TileKind::CNOT, {2 * w, west + 6}, std::nullopt});
            cursor[w] = cursor[w - 1] = west + 6;
            shareable[w] = shareable[w - 1] = true;
        } else {
            const int w = std::uniform_int_distribution<int>(0, wires - 1)(rng);
            const int at = cursor[w] + 1 + gap(rng);
            if (at >= latticeforge::kMaxLatticeDim) continue;
            grid = latticeforge::place_tile(grid, Tile{TileKind::Wire, {2 * w, at}, std::nullopt});
            cursor[w] = at;
            shareable[w] = false;
        }
    }
    return grid;
}

std::filesystem::path source_dir() { return LF_SOURCE_DIR; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct StubEndpoint::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    mutable std::mutex mu;
    std::string body;
    std::string content_type;
    std::size_t hits = 0;
};

StubEndpoint::StubEndpoint(int status, std::string reply) : impl_(std::make_unique<Impl>()) {
    impl_->server.Post(".*", [this, status, reply](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard lock(impl_->mu);
            impl_->body = req.body;
            impl_->content_type = req.get_header_value("Content-Type");
            ++impl_->hits;
        }
        res.status = status;
        res.set_content(reply, "text/plain");
    });
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

StubEndpoint::~StubEndpoint() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubEndpoint::url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + path;
}

std::string StubEndpoint::last_body() const {
    std::lock_guard lock(impl_->mu);
    return impl_->body;
}

std::string StubEndpoint::last_content_type() const {
    std::lock_guard lock(impl_->mu);
    return impl_->content_type;
}

std::size_t StubEndpoint::hits() const {
    std::lock_guard lock(impl_->mu);
    return impl_->hits;
}

EnvGuard::EnvGuard(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) saved_ = old;
    if (value) {
        ::setenv(name, value, 1);
    } else {
        ::unsetenv(name);
    }
}

EnvGuard::~EnvGuard() {
    if (saved_) {
        ::setenv(name_.c_str(), saved_->c_str(), 1);
    } else {
        ::unsetenv(name_.c_str());
    }
}

}  // namespace lftest
