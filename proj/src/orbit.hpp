#pragma once

// Dense bitmask view of a GraphState used by the LC-orbit searches.

#include "latticeforge/graph_state.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace latticeforge::detail {

inline constexpr std::size_t kMaxDenseVertices = 64;

struct DenseGraph {
    std::vector<VertexId> ids;         // ascending; position = bit index
    std::vector<std::uint64_t> rows;   // adjacency rows

    static DenseGraph from(const GraphState& g);

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (auto r : rows) twice += static_cast<std::size_t>(std::popcount(r));
        return twice / 2;
    }

    void local_complement(std::size_t a) {
        const std::uint64_t nb = rows[a];
        for (std::uint64_t rest = nb; rest != 0; rest &= rest - 1) {
            const auto u = static_cast<std::size_t>(std::countr_zero(rest));
            rows[u] ^= nb & ~(std::uint64_t{1} << u);
        }
    }
};

struct RowsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& rows) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto r : rows) {
            h ^= std::hash<std::uint64_t>{}(r) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace latticeforge::detail
