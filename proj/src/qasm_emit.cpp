#include "latticeforge/qasm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <system_error>

#include <unistd.h>

namespace latticeforge::qasm {

namespace {

std::string coord_text(Coord c) { return "[" + std::to_string(c.row) + ", " + std::to_string(c.col) + "]"; }

std::string site_name(TileKind kind, Coord c) { return std::string(to_string(kind)) + "@" + coord_text(c); }

const char* gate_name(TileKind kind) {
    switch (kind) {
        case TileKind::Hadamard: return "h";
        case TileKind::S: return "s";
        case TileKind::T: return "t";
        case TileKind::RotX: return "rx";
        case TileKind::RotY: return "ry";
        case TileKind::RotZ: return "rz";
        case TileKind::CNOT: return "cx";
        default: return nullptr;
    }
}

}  // namespace

std::vector<RotationSite> collect_rotations(const AlgorithmGrid& grid) {
    std::vector<RotationSite> out;
    for (const auto& t : grid.sorted_tiles()) {
        if (is_rotation(t.kind) && !t.theta) out.push_back({t.kind, t.anchor});
    }
    return out;
}

std::string render_angle(double theta) {
    if (theta == 0.0) return "0";
    for (int k = 0; k <= 4; ++k) {
        const double scaled = theta * static_cast<double>(1 << k) / std::numbers::pi;
        const double nearest = std::round(scaled);
        if (nearest == 0.0 || std::abs(scaled - nearest) > 1e-9) continue;
        const auto m = static_cast<long long>(nearest);
        std::string out = m == 1 ? "pi" : m == -1 ? "-pi" : std::to_string(m) + "*pi";
        if (k > 0) out += "/" + std::to_string(1 << k);
        return out;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", theta);
    return buf;
}

QasmProgram emit(const AlgorithmGrid& grid, const std::vector<ThetaBinding>& bindings) {
    const auto diagnostics = validate(grid);
    if (has_errors(diagnostics)) {
        throw Error(ErrorKind::Validation, "algorithm grid does not validate", to_json(diagnostics));
    }

    const auto pending = collect_rotations(grid);
    std::map<std::pair<TileKind, Coord>, double> bound;
    for (const auto& b : bindings) {
        if (!std::isfinite(b.theta)) {
            throw Error(ErrorKind::Invariant, "angle for " + site_name(b.kind, b.coord) + " is not finite",
                        to_json(b));
        }
        const bool known = std::any_of(pending.begin(), pending.end(), [&](const RotationSite& r) {
            return r.kind == b.kind && r.coord == b.coord;
        });
        if (!known || bound.contains({b.kind, b.coord})) {
            throw Error(ErrorKind::UnknownTarget,
                        site_name(b.kind, b.coord) + (known ? " is bound twice" : " is not an unbound rotation tile"),
                        to_json(b));
        }
        bound[{b.kind, b.coord}] = b.theta;
    }
    nlohmann::json missing = nlohmann::json::array();
    std::string missing_text;
    for (const auto& r : pending) {
        if (bound.contains({r.kind, r.coord})) continue;
        missing.push_back(to_json(r));
        missing_text += (missing_text.empty() ? "" : ", ") + site_name(r.kind, r.coord);
    }
    if (!missing.empty()) {
        throw Error(ErrorKind::UnboundTheta, "rotations without an angle: " + missing_text, {{"missing", missing}});
    }

    const auto rows = logical_rows(grid);
    std::map<int, std::size_t> qubit_of;
    for (std::size_t i = 0; i < rows.size(); ++i) qubit_of[rows[i]] = i;

    auto tiles = grid.tiles();
    std::stable_sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) {
        return std::tie(a.anchor.col, a.anchor.row) < std::tie(b.anchor.col, b.anchor.row);
    });

    QasmProgram program;
    program.qubit_count = rows.size();
    program.bindings = bindings;
    std::string& text = program.text;
    text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    if (rows.empty()) return program;

    const auto n = std::to_string(rows.size());
    text += "qubit[" + n + "] q;\n";
    text += "bit[" + n + "] c;\n";
    auto q = [&](int row) { return "q[" + std::to_string(qubit_of.at(row)) + "]"; };
    for (const auto& t : tiles) {
        const char* gate = gate_name(t.kind);
        if (!gate) continue;
        text += gate;
        if (is_rotation(t.kind)) {
            const double theta = t.theta ? *t.theta : bound.at({t.kind, t.anchor});
            text += "(" + render_angle(normalise_theta(theta)) + ")";
        }
        if (t.kind == TileKind::CNOT) {
            text += " " + q(t.anchor.row - 2) + ", " + q(t.anchor.row) + ";\n";
        } else {
            text += " " + q(t.anchor.row) + ";\n";
        }
    }
    text += "c = measure q;\n";
    return program;
}

void write_script(const QasmProgram& program, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::File, "cannot write " + path.string() + ": " + why, {{"path", path.string()}});
    };
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) fail("directory does not exist");

    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot create temporary file");
        out.write(program.text.data(), static_cast<std::streamsize>(program.text.size()));
        if (program.text.empty() || program.text.back() != '\n') out.put('\n');
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            fail("write failed");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ec.message());
    }
}

// ---- JSON -------------------------------------------------------------------------

nlohmann::json to_json(const ThetaBinding& b) {
    return {{"kind", std::string(to_string(b.kind))}, {"row", b.coord.row}, {"col", b.coord.col}, {"theta", b.theta}};
}

nlohmann::json to_json(const RotationSite& r) {
    return {{"kind", std::string(to_string(r.kind))}, {"row", r.coord.row}, {"col", r.coord.col}};
}

ThetaBinding binding_from_json(const nlohmann::json& doc, const std::string& path) {
    auto fail = [&](const std::string& field, const std::string& what) {
        throw Error(ErrorKind::Parse, path + field + ": " + what, {{"path", path + field}});
    };
    if (!doc.is_object()) fail("", "expected an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) fail(".kind", "expected a string");
    const auto kind = parse_tile_kind(doc["kind"].get<std::string>());
    if (!kind || !is_rotation(*kind)) fail(".kind", "expected rotx, roty or rotz");
    for (const char* f : {"row", "col"}) {
        if (!doc.contains(f) || !doc[f].is_number_integer()) fail(std::string(".") + f, "expected an integer");
    }
    ThetaBinding b{*kind, {doc["row"].get<int>(), doc["col"].get<int>()}, 0.0};
    if (!doc.contains("theta")) fail(".theta", "missing");
    if (doc["theta"].is_number()) {
        b.theta = doc["theta"].get<double>();
    } else if (doc["theta"].is_string()) {
        b.theta = parse_angle(doc["theta"].get<std::string>());
    } else {
        fail(".theta", "expected a number");
    }
    return b;
}

std::vector<ThetaBinding> bindings_from_json(const nlohmann::json& doc) {
    const nlohmann::json* list = &doc;
    std::string base = "$";
    if (doc.is_object()) {
        if (!doc.contains("bindings")) return {};
        list = &doc["bindings"];
        base = "$.bindings";
    }
    if (!list->is_array()) throw Error(ErrorKind::Parse, base + ": expected an array", {{"path", base}});
    std::vector<ThetaBinding> out;
    for (std::size_t i = 0; i < list->size(); ++i) {
        out.push_back(binding_from_json((*list)[i], base + "[" + std::to_string(i) + "]"));
    }
    return out;
}

}  // namespace latticeforge::qasm
