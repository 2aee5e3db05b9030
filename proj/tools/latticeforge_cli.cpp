#include "latticeforge/latticeforge.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kValidation = 1, kUsage = 2, kIo = 3, kNetwork = 4 };

// Thrown out of a subcommand once the error JSON has been written.
struct Failure {
    int code;
};

int exit_code_for(lf_status status) {
    switch (status) {
        case LF_ERR_FILE: return kIo;
        case LF_ERR_CONFIGURATION:
        case LF_ERR_TRANSPORT: return kNetwork;
        case LF_ERR_ARGUMENT: return kUsage;
        default: return kValidation;
    }
}

void check(lf_status status) {
    if (status == LF_OK) return;
    std::cerr << lf_last_error_json() << '\n';
    throw Failure{exit_code_for(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", message}}.dump() << '\n';
    throw Failure{kUsage};
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { lf_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) {
        std::cerr << nlohmann::json{{"error", "file"}, {"message", "cannot write " + out_path}, {"detail", {{"path", out_path}}}}.dump()
                  << '\n';
        throw Failure{kIo};
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << nlohmann::json{{"error", "file"}, {"message", "cannot read " + path}, {"detail", {{"path", path}}}}.dump()
                  << '\n';
        throw Failure{kIo};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GridHandle {
    lf_grid* ptr = nullptr;
    explicit GridHandle(const std::string& path) { check(lf_grid_load(path.c_str(), &ptr)); }
    ~GridHandle() { lf_grid_free(ptr); }
};

struct GraphHandle {
    lf_graph* ptr = nullptr;
    ~GraphHandle() { lf_graph_free(ptr); }
};

// kind@row,col=value, value being a number or a pi expression.
nlohmann::json parse_theta_flag(const std::string& flag) {
    static const std::regex pattern(R"(^\s*(rotx|roty|rotz)\s*@\s*(-?\d+)\s*,\s*(-?\d+)\s*=\s*(.+)$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(flag, m, pattern)) {
        usage_error("--theta '" + flag + "' is not of the form kind@row,col=value");
    }
    double theta = 0.0;
    if (lf_parse_angle(m[4].str().c_str(), &theta) != LF_OK) {
        usage_error("--theta '" + flag + "': " + lf_last_error_message());
    }
    std::string kind = m[1];
    for (auto& ch : kind) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return {{"kind", kind}, {"row", std::stoi(m[2])}, {"col", std::stoi(m[3])}, {"theta", theta}};
}

int cmd_validate(const std::string& file) {
    GridHandle grid(file);
    OwnedString diagnostics;
    int has_errors = 0;
    check(lf_grid_validate(grid.ptr, &diagnostics.ptr, &has_errors));
    const auto list = nlohmann::json::parse(diagnostics.str());
    std::cout << list.dump(2) << '\n';
    return list.empty() ? kOk : kValidation;
}

int cmd_metrics(const std::string& file) {
    GridHandle grid(file);
    OwnedString out;
    check(lf_grid_metrics_json(grid.ptr, &out.ptr));
    std::cout << out.str() << '\n';
    return kOk;
}

int cmd_layout(const std::string& file, const std::string& out_path) {
    GridHandle grid(file);
    lf_lattice* opened = nullptr;
    check(lf_lattice_open(grid.ptr, &opened));
    lf_lattice* prepared = nullptr;
    const auto status = lf_lattice_prepare(opened, &prepared);
    lf_lattice_free(opened);
    check(status);
    OwnedString text;
    const auto dumped = lf_lattice_to_json(prepared, &text.ptr);
    lf_lattice_free(prepared);
    check(dumped);
    emit_text(text.str(), out_path);
    return kOk;
}

int cmd_reduce(const std::string& graph_file, const std::string& script_file, const std::string& out_path,
               const std::string& log_path) {
    GraphHandle input;
    check(lf_graph_load(graph_file.c_str(), &input.ptr));
    const auto script = read_text(script_file);
    GraphHandle result;
    OwnedString log;
    check(lf_graph_reduce(input.ptr, script.c_str(), &result.ptr, &log.ptr));
    OwnedString graph;
    check(lf_graph_to_json(result.ptr, &graph.ptr));
    if (out_path.empty()) {
        nlohmann::json doc{{"graph", nlohmann::json::parse(graph.str())}, {"log", nlohmann::json::parse(log.str())}};
        std::cout << doc.dump(2) << '\n';
        return kOk;
    }
    emit_text(graph.str(), out_path);
    if (log_path.empty()) {
        std::cout << log.str() << '\n';
    } else {
        emit_text(log.str(), log_path);
    }
    return kOk;
}

int cmd_compile(const std::string& file, const std::vector<std::string>& thetas, const std::string& out_path) {
    nlohmann::json bindings = nlohmann::json::array();
    for (const auto& t : thetas) bindings.push_back(parse_theta_flag(t));
    GridHandle grid(file);
    lf_program* program = nullptr;
    check(lf_compile(grid.ptr, bindings.dump().c_str(), &program));
    if (out_path.empty()) {
        std::cout << lf_program_text(program);
        lf_program_free(program);
        return kOk;
    }
    const auto status = lf_program_write(program, out_path.c_str());
    lf_program_free(program);
    check(status);
    return kOk;
}

int cmd_submit(const std::string& file, const std::string& endpoint, bool json_body) {
    const auto text = read_text(file);
    OwnedString result;
    check(lf_submit(text.c_str(), endpoint.empty() ? nullptr : endpoint.c_str(), json_body ? 1 : 0, &result.ptr));
    const auto doc = nlohmann::json::parse(result.str());
    std::cout << doc.dump(2) << '\n';
    if (doc.contains("warning")) {
        std::cerr << nlohmann::json{{"warning", doc["warning"]}}.dump() << '\n';
    }
    return kOk;
}

int cmd_serve(const std::string& host, int port) {
    lf_service* service = nullptr;
    check(lf_service_create(&service));
    int bound = 0;
    auto status = lf_service_start(service, host.c_str(), port, &bound);
    if (status == LF_OK) {
        std::cerr << nlohmann::json{{"listening", host + ":" + std::to_string(bound)}}.dump() << '\n';
        lf_service_wait(service);
    }
    lf_service_free(service);
    check(status);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice layout, graph-state reduction and OpenQASM export for measurement-based algorithms"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lf_version());

    std::string file;
    std::string out_path;

    auto* validate = app.add_subcommand("validate", "Check an algorithm grid; exit 0 only if there are no diagnostics");
    validate->add_option("FILE", file, "Algorithm JSON")->required();

    auto* metrics = app.add_subcommand("metrics", "Print lattice metrics of an algorithm grid");
    metrics->add_option("FILE", file, "Algorithm JSON")->required();

    auto* layout = app.add_subcommand("layout", "Open an algorithm onto the lattice and prepare it");
    layout->add_option("FILE", file, "Algorithm JSON")->required();
    layout->add_option("-o,--output", out_path, "Lattice JSON output (stdout if omitted)");

    std::string script_file;
    std::string log_path;
    auto* reduce = app.add_subcommand("reduce", "Replay measurements and local complementations on a graph");
    reduce->add_option("GRAPH", file, "Graph JSON")->required();
    reduce->add_option("--script", script_file, "Reduction script JSON")->required();
    reduce->add_option("-o,--output", out_path, "Final graph JSON (graph and log to stdout if omitted)");
    reduce->add_option("--log", log_path, "Write the record log here instead of stdout");

    std::vector<std::string> thetas;
    auto* compile = app.add_subcommand("compile", "Emit OpenQASM 3.0 for an algorithm grid");
    compile->add_option("FILE", file, "Algorithm JSON")->required();
    compile->add_option("--theta", thetas, "Rotation angle, kind@row,col=value (repeatable)");
    compile->add_option("-o,--output", out_path, "Script output (stdout if omitted)");

    std::string endpoint;
    bool json_body = false;
    auto* submit = app.add_subcommand("submit", "POST a compiled script to a REST endpoint");
    submit->add_option("FILE", file, "OpenQASM script")->required();
    submit->add_option("--endpoint", endpoint, "Endpoint URL (defaults to $TUQ_QASM_ENDPOINT)");
    submit->add_flag("--json-body", json_body, "Send {\"qasm\": ...} instead of text/plain");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return kUsage;
    }

    try {
        if (*validate) return cmd_validate(file);
        if (*metrics) return cmd_metrics(file);
        if (*layout) return cmd_layout(file, out_path);
        if (*reduce) return cmd_reduce(file, script_file, out_path, log_path);
        if (*compile) return cmd_compile(file, thetas, out_path);
        if (*submit) return cmd_submit(file, endpoint, json_body);
        if (*serve) return cmd_serve(host, port);
    } catch (const Failure& f) {
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return kValidation;
    }
    return kUsage;
}
