#pragma once

#include "latticeforge/algorithm_grid.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace latticeforge::qasm {

struct ThetaBinding {
    TileKind kind = TileKind::RotZ;
    Coord coord;
    double theta = 0.0;

    friend bool operator==(const ThetaBinding&, const ThetaBinding&) = default;
};

struct RotationSite {
    TileKind kind;
    Coord coord;

    friend bool operator==(const RotationSite&, const RotationSite&) = default;
};

struct QasmProgram {
    std::string text;
    std::size_t qubit_count = 0;
    std::vector<ThetaBinding> bindings;
};

/// Rotation tiles still waiting for an angle, ordered by (row, col).
std::vector<RotationSite> collect_rotations(const AlgorithmGrid& grid);

QasmProgram emit(const AlgorithmGrid& grid, const std::vector<ThetaBinding>& bindings);

/// Writes through a temporary file in the same directory, then renames.
void write_script(const QasmProgram& program, const std::filesystem::path& path);

/// "pi/2", "-3*pi/4", "pi", "0" for multiples of pi/2^k (k <= 4), otherwise
/// twelve significant digits.
std::string render_angle(double theta);

// ---- parsing ------------------------------------------------------------------

/// Evaluates the constant angle expressions the emitter produces (and a bit
/// more): numbers, pi, unary minus, + - * / and parentheses.
double parse_angle(std::string_view text);

struct GateCall {
    std::string name;
    std::vector<double> params;
    std::vector<std::size_t> qubits;
};

struct ParsedProgram {
    std::string version;
    std::vector<std::string> includes;
    std::size_t qubit_count = 0;
    std::size_t bit_count = 0;
    std::vector<GateCall> gates;
    bool measures_all = false;
};

/// Recursive-descent parser for the OpenQASM 3.0 subset this project emits:
/// version header, includes, qubit/bit registers, standard gate calls and
/// measurement assignments. Throws Error(Parse) with line:column on failure.
ParsedProgram parse(std::string_view source);

nlohmann::json to_json(const ThetaBinding& b);
ThetaBinding binding_from_json(const nlohmann::json& doc, const std::string& path = "$");
std::vector<ThetaBinding> bindings_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RotationSite& r);

}  // namespace latticeforge::qasm
