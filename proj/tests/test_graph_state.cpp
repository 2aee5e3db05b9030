#include "latticeforge/graph_state.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace latticeforge;

namespace {

GraphState p3() { return GraphState::from_edges({1, 2, 3}, {{1, 2}, {2, 3}}); }

template <typename F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Invariant;
}

}  // namespace

TEST(CreateGrid, DegenerateAndSmall) {
    auto g11 = create_grid(1, 1);
    EXPECT_EQ(g11.vertex_count(), 1u);
    EXPECT_EQ(g11.edge_count(), 0u);

    auto g22 = create_grid(2, 2);
    EXPECT_EQ(g22.vertex_count(), 4u);
    EXPECT_EQ(g22.edge_count(), 4u);

    auto g33 = create_grid(3, 3);
    EXPECT_EQ(g33.vertex_count(), 9u);
    EXPECT_EQ(cz_count(g33), 12u);
}

TEST(CreateGrid, EdgesJoinOnlyNearestNeighbours) {
    const int rows = 4, cols = 6;
    auto g = create_grid(rows, cols);
    std::size_t expected = 0;
    for (auto v : g.vertices()) {
        for (auto u : g.vertices()) {
            if (u <= v) continue;
            auto a = *g.coord(v), b = *g.coord(u);
            const bool adjacent = std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
            EXPECT_EQ(g.has_edge(u, v), adjacent);
            expected += adjacent;
        }
    }
    EXPECT_EQ(g.edge_count(), expected);
    EXPECT_EQ(expected, static_cast<std::size_t>(rows * (cols - 1) + cols * (rows - 1)));
}

TEST(CreateGrid, Bounds) {
    EXPECT_EQ(kind_of([] { create_grid(122, 5); }), ErrorKind::Bounds);
    EXPECT_EQ(kind_of([] { create_grid(5, 122); }), ErrorKind::Bounds);
    EXPECT_EQ(kind_of([] { create_grid(0, 5); }), ErrorKind::Bounds);
    EXPECT_NO_THROW(create_grid(121, 1));
    try {
        create_grid(3, 200);
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("col"), std::string::npos);
    }
}

TEST(Edit, SelfEdgeRejectedAndDuplicateIdempotent) {
    auto g = GraphState::with_vertices({1, 2});
    EXPECT_EQ(kind_of([&] { edit(g, AddEdge{1, 1}); }), ErrorKind::Invariant);
    g = edit(g, AddEdge{1, 2});
    g = edit(g, AddEdge{2, 1});
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(kind_of([&] { edit(g, AddEdge{1, 9}); }), ErrorKind::NotFound);
    EXPECT_EQ(kind_of([&] { edit(g, RemoveVertex{9}); }), ErrorKind::NotFound);
}

TEST(Edit, RemoveVertexDropsIncidentEdges) {
    auto g = edit(p3(), RemoveVertex{2});
    EXPECT_EQ(g.vertices(), (std::vector<VertexId>{1, 3}));
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Edit, VertexIdsAreNeverReused) {
    GraphState g;
    auto a = g.add_vertex();
    auto b = g.add_vertex();
    g.remove_vertex(b);
    auto c = g.add_vertex();
    EXPECT_NE(c, b);
    EXPECT_NE(c, a);
}

TEST(Edit, CoordinatesAreInjectiveAndBounded) {
    GraphState g;
    g.add_vertex(Coord{0, 0});
    EXPECT_EQ(kind_of([&] { g.add_vertex(Coord{0, 0}); }), ErrorKind::Invariant);
    EXPECT_EQ(kind_of([&] { g.add_vertex(Coord{0, 121}); }), ErrorKind::Bounds);
    EXPECT_EQ(kind_of([&] { g.add_vertex(Coord{-1, 0}); }), ErrorKind::Bounds);
}

TEST(LocalComplement, TriangleBecomesPath) {
    auto tri = GraphState::from_edges({1, 2, 3}, {{1, 2}, {1, 3}, {2, 3}});
    auto g = local_complement(tri, 1);
    EXPECT_EQ(g, GraphState::from_edges({1, 2, 3}, {{1, 2}, {1, 3}}));
}

TEST(LocalComplement, StarCentreCompletes) {
    auto s = lftest::to_graph_state(lftest::star(5));
    auto g = local_complement(s, 0);
    EXPECT_EQ(g, lftest::to_graph_state(lftest::complete(5)));
}

TEST(LocalComplement, UnknownVertex) {
    EXPECT_EQ(kind_of([] { local_complement(p3(), 7); }), ErrorKind::NotFound);
}

TEST(LocalComplement, RandomInvolution) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 9)(rng);
        auto g = lftest::to_graph_state(lftest::random_graph(rng, n, 0.45));
        const VertexId a = std::uniform_int_distribution<int>(0, n - 1)(rng);
        EXPECT_EQ(local_complement(local_complement(g, a), a), g);
        EXPECT_EQ(local_complement(g, a).vertices(), g.vertices());
    }
}

TEST(Measure, ZDeletesVertex) {
    auto [g, rec] = measure(p3(), 2, {Axis::Z, Sign::Plus});
    EXPECT_EQ(g, GraphState::with_vertices({1, 3}));
    EXPECT_FALSE(rec.chosen_b0);
}

TEST(Measure, YJoinsNeighbours) {
    auto [g, rec] = measure(p3(), 2, {Axis::Y, Sign::Plus});
    EXPECT_EQ(g, GraphState::from_edges({1, 3}, {{1, 3}}));
    EXPECT_FALSE(rec.chosen_b0);
}

TEST(Measure, XWithExplicitAndDefaultB0) {
    auto [g1, rec1] = measure(p3(), 2, {Axis::X, Sign::Plus}, VertexId{1});
    EXPECT_EQ(g1, GraphState::from_edges({1, 3}, {{1, 3}}));
    ASSERT_TRUE(rec1.chosen_b0);
    EXPECT_EQ(*rec1.chosen_b0, 1);

    auto [g2, rec2] = measure(p3(), 2, {Axis::X, Sign::Minus});
    ASSERT_TRUE(rec2.chosen_b0);
    EXPECT_EQ(*rec2.chosen_b0, 1);  // smallest-id neighbour
    EXPECT_EQ(g2, g1);
}

TEST(Measure, XOnIsolatedVertexDeletes) {
    auto g0 = GraphState::from_edges({1, 2, 3}, {{2, 3}});
    auto [g, rec] = measure(g0, 1, {Axis::X, Sign::Plus});
    EXPECT_EQ(g, GraphState::from_edges({2, 3}, {{2, 3}}));
    EXPECT_FALSE(rec.chosen_b0);
}

TEST(Measure, Errors) {
    EXPECT_EQ(kind_of([] { measure(p3(), 9, {Axis::Z, Sign::Plus}); }), ErrorKind::NotFound);
    EXPECT_EQ(kind_of([] { measure(p3(), 1, {Axis::X, Sign::Plus}, VertexId{3}); }), ErrorKind::InvalidChoice);
    EXPECT_EQ(kind_of([] { measure(p3(), 2, {Axis::Z, Sign::Plus}, VertexId{1}); }), ErrorKind::InvalidChoice);
    EXPECT_EQ(kind_of([] { measure(GraphState{}, 0, {Axis::Z, Sign::Plus}); }), ErrorKind::NotFound);
}

TEST(Measure, RecordInvariants) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        auto g = lftest::to_graph_state(lftest::random_graph(rng, n, 0.4));
        const VertexId a = std::uniform_int_distribution<int>(0, n - 1)(rng);
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            auto [out, rec] = measure(g, a, {axis, Sign::Plus});
            EXPECT_EQ(out.vertex_count(), g.vertex_count() - 1);
            EXPECT_FALSE(out.contains(a));
            EXPECT_EQ(rec.chosen_b0.has_value(), axis == Axis::X && !g.neighbours(a).empty());
            for (const auto& [v, _] : rec.correction) EXPECT_TRUE(out.contains(v));
        }
    }
}

TEST(Measure, CorrectionLabel) {
    CorrectionDescriptor d{Axis::X, Sign::Plus, VertexId{3}};
    EXPECT_EQ(d.label(), "U[X,+,b0=3]");
}

TEST(CzCount, Basics) {
    EXPECT_EQ(cz_count(GraphState{}), 0u);
    EXPECT_EQ(cz_count(lftest::to_graph_state(lftest::complete(4))), 6u);
}

TEST(MinimizeCz, K4BecomesStar) {
    auto result = minimize_cz(lftest::to_graph_state(lftest::complete(4)), 1000);
    EXPECT_EQ(cz_count(result.graph), 3u);
    EXPECT_TRUE(result.proven_minimal);
    // replaying the sequence reproduces the graph
    auto g = lftest::to_graph_state(lftest::complete(4));
    for (auto v : result.sequence) g = local_complement(g, v);
    EXPECT_EQ(g, result.graph);
}

TEST(MinimizeCz, StarAndEdgelessUnchanged) {
    auto s = lftest::to_graph_state(lftest::star(5));
    auto r = minimize_cz(s, 10000);
    EXPECT_EQ(r.graph, s);
    EXPECT_TRUE(r.sequence.empty());

    auto e = GraphState::with_vertices({4, 5, 6});
    auto r2 = minimize_cz(e, 10);
    EXPECT_EQ(r2.graph, e);
    EXPECT_TRUE(r2.proven_minimal);
}

TEST(MinimizeCz, BudgetExhaustionIsFlagged) {
    auto g = lftest::to_graph_state(lftest::path(8));
    auto r = minimize_cz(g, 3);
    EXPECT_FALSE(r.proven_minimal);
    EXPECT_LE(cz_count(r.graph), cz_count(g));
    EXPECT_EQ(r.graph.vertices(), g.vertices());
}

TEST(MinimizeCz, Deterministic) {
    std::mt19937_64 rng(3);
    auto g = lftest::to_graph_state(lftest::random_graph(rng, 7, 0.5));
    auto a = minimize_cz(g, 500);
    auto b = minimize_cz(g, 500);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.sequence, b.sequence);
}

TEST(LcEquivalent, Examples) {
    auto p = p3();
    EXPECT_TRUE(lc_equivalent(p, p));
    auto tri = GraphState::from_edges({1, 2, 3}, {{1, 2}, {1, 3}, {2, 3}});
    EXPECT_TRUE(lc_equivalent(p, tri));
    EXPECT_FALSE(lc_equivalent(lftest::to_graph_state(lftest::path(4)), lftest::to_graph_state(lftest::star(4))));
}

TEST(LcEquivalent, P4AndStar4OrbitsAreDisjoint) {
    auto a = lftest::brute_orbit(lftest::path(4));
    auto b = lftest::brute_orbit(lftest::star(4));
    for (const auto& g : a) EXPECT_FALSE(b.contains(g));
}

TEST(LcEquivalent, Errors) {
    EXPECT_EQ(kind_of([] { lc_equivalent(p3(), GraphState::with_vertices({1, 2})); }), ErrorKind::Comparability);
    auto big = lftest::to_graph_state(lftest::path(10));
    auto other = lftest::to_graph_state(lftest::star(10));
    EXPECT_EQ(kind_of([&] { lc_equivalent(big, other, 5); }), ErrorKind::Resource);
}

TEST(Json, RoundTripAndSchema) {
    auto g = create_grid(2, 3);
    const auto doc = to_json(g);
    EXPECT_EQ(graph_from_json(doc), g);
    EXPECT_EQ(doc["vertices"][0]["id"], 0);
    EXPECT_TRUE(doc["vertices"][0].contains("row"));

    auto plain = GraphState::from_edges({5, 2}, {{5, 2}});
    const auto pd = to_json(plain);
    EXPECT_EQ(pd["edges"][0], nlohmann::json::array({2, 5}));
    EXPECT_EQ(pd["vertices"][0]["id"], 2);
    EXPECT_FALSE(pd["vertices"][0].contains("row"));
}

TEST(Json, ParseErrorsCarryPath) {
    auto doc = nlohmann::json::parse(R"({"vertices":[{"id":0},{"id":1}],"edges":[[0,"x"]]})");
    try {
        graph_from_json(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_EQ(e.detail()["path"], "$.edges[0][1]");
    }
    auto self = nlohmann::json::parse(R"({"vertices":[{"id":0}],"edges":[[0,0]]})");
    EXPECT_THROW(graph_from_json(self), Error);
}
