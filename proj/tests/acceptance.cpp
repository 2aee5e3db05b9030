// One line per acceptance criterion: PASS or FAIL, a name, and what was measured.

#include "latticeforge/algorithm_grid.hpp"
#include "latticeforge/graph_state.hpp"
#include "latticeforge/qasm.hpp"
#include "latticeforge/service.hpp"
#include "latticeforge/stabilizer.hpp"

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace latticeforge;
using Clock = std::chrono::steady_clock;

namespace {

// Thrown by require() with a description of the first mismatch.
struct Mismatch {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Mismatch{what};
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

int failures = 0;

void criterion(const char* name, const std::function<std::string()>& body) {
    std::string summary;
    bool ok = true;
    try {
        summary = body();
    } catch (const Mismatch& m) {
        ok = false;
        summary = m.what;
    } catch (const std::exception& e) {
        ok = false;
        summary = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, summary.c_str());
    std::fflush(stdout);
}

AlgorithmGrid reference_grid() {
    AlgorithmGrid grid("reference");
    for (const auto& t : lftest::reference_tiles()) grid = place_tile(grid, t);
    return grid;
}

std::string describe(const lftest::SmallGraph& g) {
    std::ostringstream out;
    out << "n=" << g.n << " edges=";
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            if (g.adj[i] >> j & 1u) out << i << '-' << j << ' ';
        }
    }
    return out.str();
}

// measure() against the stabilizer projection, for every vertex and axis.
void check_oracle(const lftest::SmallGraph& small, std::size_t& checks) {
    const auto g = lftest::to_graph_state(small);
    const auto tableau = stabilizer::from_graph(g);
    for (int a = 0; a < small.n; ++a) {
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            const auto [after, record] = measure(g, a, {axis, Sign::Plus});
            const auto projected = stabilizer::project(tableau, static_cast<std::size_t>(a), axis, Sign::Plus);
            const std::string where = describe(small) + " vertex " + std::to_string(a) + " axis " + to_char(axis);
            require(projected.qubit_ids() == after.vertices(), "qubit sets differ: " + where);
            if (after.empty()) {
                require(projected.qubit_count() == 0, "oracle kept qubits: " + where);
            } else {
                require(stabilizer::equal_up_to_local_clifford(stabilizer::from_graph(after), projected),
                        "not LC-equal to oracle: " + where);
            }
            ++checks;
        }
    }
}

std::size_t orbit_min(const lftest::SmallGraph& g) {
    std::size_t best = g.edge_count();
    for (const auto& adj : lftest::brute_orbit(g)) {
        std::size_t twice = 0;
        for (auto row : adj) twice += static_cast<std::size_t>(__builtin_popcount(row));
        best = std::min(best, twice / 2);
    }
    return best;
}

}  // namespace

int main() {
    criterion("reference-fixture", [] {
        const auto start = Clock::now();
        const auto grid = grid_from_json(nlohmann::json::parse(lftest::read_file(lftest::source_dir() / "tests/fixtures/reference.json")));
        require(grid.tiles().size() == 24, "expected 24 placements");
        const auto m = metrics(grid);
        const double elapsed = seconds_since(start);
        require(m.min_rows == 8 && m.min_eastern_col == 53,
                "min_lattice [" + std::to_string(m.min_rows) + "," + std::to_string(m.min_eastern_col) + "]");
        require(m.t_count == 2, "t_count " + std::to_string(m.t_count));
        require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
        return "min_lattice [8,53], t_count 2, " + std::to_string(elapsed) + " s (limit 1 s)";
    });

    criterion("oracle-equivalence", [] {
        const auto start = Clock::now();
        const std::size_t expected_connected[] = {1, 1, 2, 6, 21, 112, 853};
        const std::size_t expected_total[] = {1, 2, 4, 11, 34, 156, 1044};
        std::size_t checks = 0, classes = 0;
        for (int n = 1; n <= 7; ++n) {
            std::size_t connected = 0;
            for (const auto& g : lftest::graph_classes(n)) {
                if (!lftest::connected(g)) continue;
                ++connected;
                check_oracle(g, checks);
            }
            require(lftest::graph_classes(n).size() == expected_total[n - 1],
                    "n=" + std::to_string(n) + " classes " + std::to_string(lftest::graph_classes(n).size()));
            require(connected == expected_connected[n - 1],
                    "n=" + std::to_string(n) + " connected classes " + std::to_string(connected));
            classes += connected;
        }
        std::mt19937_64 rng(1009);
        for (int trial = 0; trial < 500; ++trial) {
            const int n = std::uniform_int_distribution<int>(1, 10)(rng);
            const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
            check_oracle(lftest::random_graph(rng, n, p), checks);
        }
        const double elapsed = seconds_since(start);
        require(elapsed < 300.0, "took " + std::to_string(elapsed) + " s");
        return std::to_string(classes) + " connected classes n<=7 + 500 random n<=10, " + std::to_string(checks) +
               " measurements, exact, " + std::to_string(elapsed) + " s (limit 300 s)";
    });

    criterion("lc-properties", [] {
        std::mt19937_64 rng(2003);
        for (int trial = 0; trial < 10000; ++trial) {
            const int n = std::uniform_int_distribution<int>(1, 12)(rng);
            const auto g = lftest::to_graph_state(lftest::random_graph(rng, n, 0.5));
            const VertexId a = std::uniform_int_distribution<int>(0, n - 1)(rng);
            const auto once = local_complement(g, a);
            require(once.vertices() == g.vertices(), "vertex set changed at trial " + std::to_string(trial));
            require(local_complement(once, a) == g, "involution failed at trial " + std::to_string(trial));
        }
        std::size_t choices = 0;
        for (int n = 2; n <= 7; ++n) {
            for (const auto& small : lftest::graph_classes(n)) {
                const auto g = lftest::to_graph_state(small);
                for (VertexId a = 0; a < n; ++a) {
                    const auto nbrs = g.neighbours(a);
                    if (nbrs.size() < 2) continue;
                    const auto reference = measure(g, a, {Axis::X, Sign::Plus}, *nbrs.begin()).first;
                    for (auto b0 : nbrs) {
                        const auto other = measure(g, a, {Axis::X, Sign::Plus}, b0).first;
                        require(lc_equivalent(reference, other),
                                "b0 dependence: " + describe(small) + " a=" + std::to_string(a) + " b0=" + std::to_string(b0));
                        ++choices;
                    }
                }
            }
        }
        return "10000 random involutions; " + std::to_string(choices) + " b0 choices over all graphs n<=7, exact";
    });

    criterion("cz-minimisation", [] {
        const auto k4 = minimize_cz(lftest::to_graph_state(lftest::complete(4)), 100000);
        require(cz_count(k4.graph) == 3, "K4 minimised to " + std::to_string(cz_count(k4.graph)));
        std::size_t graphs = 0;
        for (int n = 1; n <= 6; ++n) {
            for (const auto& small : lftest::graph_classes(n)) {
                const auto result = minimize_cz(lftest::to_graph_state(small), 1'000'000);
                require(result.proven_minimal, "budget exhausted: " + describe(small));
                const auto truth = orbit_min(small);
                require(cz_count(result.graph) == truth, "reported " + std::to_string(cz_count(result.graph)) +
                                                             " vs orbit " + std::to_string(truth) + ": " + describe(small));
                ++graphs;
            }
        }
        return "K4 -> 3 edges; " + std::to_string(graphs) + " graph classes n<=6 match orbit minima, exact";
    });

    criterion("lc-orbit-separation", [] {
        const auto p4 = lftest::to_graph_state(lftest::path(4));
        const auto s4 = lftest::to_graph_state(lftest::star(4));
        const auto p3 = lftest::to_graph_state(lftest::path(3));
        const auto k3 = lftest::to_graph_state(lftest::complete(3));
        require(!lc_equivalent(p4, s4), "P4 ~ star4");
        require(lc_equivalent(p3, k3), "P3 !~ K3");
        require(!stabilizer::equal_up_to_local_clifford(stabilizer::from_graph(p4), stabilizer::from_graph(s4)),
                "oracle says P4 ~ star4");
        require(stabilizer::equal_up_to_local_clifford(stabilizer::from_graph(p3), stabilizer::from_graph(k3)),
                "oracle says P3 !~ K3");
        return "P4/star4 false, P3/K3 true, oracle agrees";
    });

    criterion("qasm-validity", [] {
        const auto start = Clock::now();
        std::mt19937_64 rng(3001);
        std::uniform_real_distribution<double> angle(-6.0, 6.0);
        std::size_t total_cx = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto grid = lftest::random_valid_grid(rng);
            std::vector<qasm::ThetaBinding> bindings;
            for (const auto& r : qasm::collect_rotations(grid)) bindings.push_back({r.kind, r.coord, angle(rng)});
            const auto program = qasm::emit(grid, bindings);
            const auto parsed = qasm::parse(program.text);
            std::size_t cnots = 0, cx = 0;
            for (const auto& t : grid.tiles()) cnots += t.kind == TileKind::CNOT;
            for (const auto& g : parsed.gates) cx += g.name == "cx";
            require(cx == cnots, "trial " + std::to_string(trial) + ": cx " + std::to_string(cx) + " vs CNOT " +
                                     std::to_string(cnots));
            total_cx += cx;
        }
        const auto half_pi = qasm::render_angle(std::numbers::pi / 2);
        require(half_pi == "pi/2", "pi/2 rendered as " + half_pi);
        const auto rz = qasm::emit(place_tile(AlgorithmGrid{}, Tile{TileKind::RotZ, {0, 4}, std::nullopt}),
                                   {{TileKind::RotZ, {0, 4}, std::numbers::pi / 2}});
        require(rz.text.find("rz(pi/2) q[0];") != std::string::npos, "emitted rz lacks pi/2");
        const double elapsed = seconds_since(start);
        require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
        return "200 random grids parse, " + std::to_string(total_cx) + " cx all matched, pi/2 symbolic, " +
               std::to_string(elapsed) + " s (limit 10 s)";
    });

    criterion("compile-gating", [] {
        const auto grid = reference_grid();
        const std::vector<Coord> expected{{0, 48}, {2, 14}, {2, 48}, {4, 48}, {5, 48}};
        try {
            qasm::emit(grid, {});
            require(false, "compiled without bindings");
        } catch (const Error& e) {
            require(e.kind() == ErrorKind::UnboundTheta, std::string("wrong error ") + e.what());
            const auto& missing = e.detail()["missing"];
            require(missing.size() == expected.size(), "listed " + std::to_string(missing.size()) + " rotations");
            for (std::size_t i = 0; i < expected.size(); ++i) {
                require(missing[i]["row"] == expected[i].row && missing[i]["col"] == expected[i].col,
                        "missing entry " + std::to_string(i) + " is " + missing[i].dump());
            }
        }
        const auto bindings = qasm::bindings_from_json(
            nlohmann::json::parse(lftest::read_file(lftest::source_dir() / "tests/fixtures/reference_bindings.json")));
        const auto golden = lftest::read_file(lftest::source_dir() / "tests/golden/reference.qasm.txt");
        const auto path = std::filesystem::temp_directory_path() / ("lf_accept_" + std::to_string(::getpid()) + ".txt");
        qasm::write_script(qasm::emit(grid, bindings), path);
        const auto first = lftest::read_file(path);
        qasm::write_script(qasm::emit(grid, bindings), path);
        const auto second = lftest::read_file(path);
        std::filesystem::remove(path);
        require(first == golden, "written script differs from golden file");
        require(second == first, "second write differs");
        return "5 unbound rotations listed with coordinates; bound program equals golden file byte for byte";
    });

    criterion("submission", [] {
        for (int status : {200, 400}) {
            lftest::StubEndpoint stub(status, "reply-" + std::to_string(status));
            service::SubmitOptions options;
            options.endpoint = stub.url();
            const auto r = service::submit("OPENQASM 3.0;\n", options);
            require(r.status == status, "recorded status " + std::to_string(r.status));
            require(r.body == "reply-" + std::to_string(status), "recorded body " + r.body);
            require(stub.last_body() == "OPENQASM 3.0;\n", "stub received " + stub.last_body());
        }
        lftest::EnvGuard env(service::kEndpointVariable, nullptr);
        try {
            service::submit("OPENQASM 3.0;\n", {});
            require(false, "submitted with no endpoint");
        } catch (const Error& e) {
            require(e.kind() == ErrorKind::Configuration, std::string("wrong error ") + e.what());
        }
        return "200 and 400 recorded verbatim; missing endpoint is a configuration error";
    });

    criterion("bounds", [] {
        try {
            create_grid(122, 5);
            require(false, "create_grid(122, 5) accepted");
        } catch (const Error& e) {
            require(e.kind() == ErrorKind::Bounds, std::string("wrong error ") + e.what());
        }
        require(create_grid(121, 5).vertex_count() == 605, "create_grid(121, 5) rejected");
        std::size_t rejected = 0;
        for (TileKind kind : {TileKind::Hadamard, TileKind::S, TileKind::T, TileKind::RotX, TileKind::RotY, TileKind::RotZ,
                              TileKind::CNOT, TileKind::Wire, TileKind::Input, TileKind::Readout}) {
            for (int col : {121, 122, 500}) {
                try {
                    place_tile(AlgorithmGrid{}, Tile{kind, {2, col}, std::nullopt});
                    require(false, std::string(to_string(kind)) + " accepted at col " + std::to_string(col));
                } catch (const Error& e) {
                    require(e.kind() == ErrorKind::Bounds, std::string("wrong error ") + e.what());
                    ++rejected;
                }
            }
        }
        return "create_grid(122, 5) rejected; " + std::to_string(rejected) + " placements at col >= 121 rejected";
    });

    return failures == 0 ? 0 : 1;
}
