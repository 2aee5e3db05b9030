#include "latticeforge/latticeforge.h"

#include "latticeforge/algorithm_grid.hpp"
#include "latticeforge/graph_state.hpp"
#include "latticeforge/lattice.hpp"
#include "latticeforge/qasm.hpp"
#include "latticeforge/reduction.hpp"
#include "latticeforge/service.hpp"
#include "latticeforge/stabilizer.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace latticeforge;

struct lf_grid {
    AlgorithmGrid grid;
};
struct lf_graph {
    GraphState graph;
};
struct lf_lattice {
    Lattice lattice;
};
struct lf_program {
    qasm::QasmProgram program;
};
struct lf_service {
    service::SessionService service;
};

namespace {

thread_local std::string g_error_json = R"({"error":"none","message":""})";
thread_local std::string g_error_message;

lf_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Bounds: return LF_ERR_BOUNDS;
        case ErrorKind::NotFound: return LF_ERR_NOT_FOUND;
        case ErrorKind::Invariant: return LF_ERR_INVARIANT;
        case ErrorKind::InvalidChoice: return LF_ERR_INVALID_CHOICE;
        case ErrorKind::Comparability: return LF_ERR_COMPARABILITY;
        case ErrorKind::Resource: return LF_ERR_RESOURCE;
        case ErrorKind::Domain: return LF_ERR_DOMAIN;
        case ErrorKind::BranchImpossible: return LF_ERR_BRANCH_IMPOSSIBLE;
        case ErrorKind::Collision: return LF_ERR_COLLISION;
        case ErrorKind::Geometry: return LF_ERR_GEOMETRY;
        case ErrorKind::Parse: return LF_ERR_PARSE;
        case ErrorKind::Version: return LF_ERR_VERSION;
        case ErrorKind::UnsupportedGate: return LF_ERR_UNSUPPORTED_GATE;
        case ErrorKind::Routing: return LF_ERR_ROUTING;
        case ErrorKind::UnboundTheta: return LF_ERR_UNBOUND_THETA;
        case ErrorKind::UnknownTarget: return LF_ERR_UNKNOWN_TARGET;
        case ErrorKind::File: return LF_ERR_FILE;
        case ErrorKind::Configuration: return LF_ERR_CONFIGURATION;
        case ErrorKind::Transport: return LF_ERR_TRANSPORT;
        case ErrorKind::Validation: return LF_ERR_VALIDATION;
        case ErrorKind::Conflict: return LF_ERR_CONFLICT;
    }
    return LF_ERR_INTERNAL;
}

lf_status fail(lf_status status, const nlohmann::json& body) {
    g_error_json = body.dump();
    g_error_message = body.value("message", std::string());
    return status;
}

lf_status argument_error(const char* what) {
    return fail(LF_ERR_ARGUMENT, {{"error", "argument"}, {"message", what}});
}

template <typename F>
lf_status guarded(F&& body) {
    try {
        body();
        return LF_OK;
    } catch (const Error& e) {
        return fail(status_of(e.kind()), e.to_json());
    } catch (const nlohmann::json::exception& e) {
        return fail(LF_ERR_PARSE, {{"error", "parse"}, {"message", e.what()}});
    } catch (const std::bad_alloc&) {
        return fail(LF_ERR_RESOURCE, {{"error", "resource"}, {"message", "out of memory"}});
    } catch (const std::exception& e) {
        return fail(LF_ERR_INTERNAL, {{"error", "internal"}, {"message", e.what()}});
    } catch (...) {
        return fail(LF_ERR_INTERNAL, {{"error", "internal"}, {"message", "unknown failure"}});
    }
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json parse_json(const char* text) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::Parse, "input is not valid JSON");
    return doc;
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::File, std::string("cannot read ") + path, {{"path", path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const char* path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw Error(ErrorKind::File, std::string("cannot write ") + path, {{"path", path}});
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::File, std::string("cannot write ") + path, {{"path", path}});
    }
}

}  // namespace

extern "C" {

const char* lf_version(void) { return "0.1.0"; }
const char* lf_last_error_json(void) { return g_error_json.c_str(); }
const char* lf_last_error_message(void) { return g_error_message.c_str(); }
void lf_string_free(char* s) { std::free(s); }

// ---- grids

lf_status lf_grid_from_json(const char* json, lf_grid** out) {
    if (!json || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_grid{grid_from_json(parse_json(json))}; });
}

lf_status lf_grid_load(const char* path, lf_grid** out) {
    if (!path || !out) return argument_error("null argument");
    return guarded([&] {
        auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorKind::Parse, std::string(path) + " is not valid JSON", {{"path", path}});
        *out = new lf_grid{grid_from_json(doc)};
    });
}

lf_status lf_grid_ingest_circuit(const char* json, lf_grid** out) {
    if (!json || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_grid{ingest_circuit_json(parse_json(json))}; });
}

lf_status lf_grid_to_json(const lf_grid* grid, char** out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] { *out = dup_string(to_json(grid->grid).dump(2)); });
}

lf_status lf_grid_save(const lf_grid* grid, const char* path) {
    if (!grid || !path) return argument_error("null argument");
    return guarded([&] { write_file(path, to_json(grid->grid).dump(2) + "\n"); });
}

lf_status lf_grid_tile_count(const lf_grid* grid, size_t* out) {
    if (!grid || !out) return argument_error("null argument");
    *out = grid->grid.tiles().size();
    return LF_OK;
}

lf_status lf_grid_validate(const lf_grid* grid, char** diagnostics_json, int* has_errors_out) {
    if (!grid) return argument_error("null argument");
    return guarded([&] {
        const auto ds = validate(grid->grid);
        if (has_errors_out) *has_errors_out = has_errors(ds) ? 1 : 0;
        if (diagnostics_json) *diagnostics_json = dup_string(to_json(ds).dump(2));
    });
}

lf_status lf_grid_metrics(const lf_grid* grid, lf_metrics* out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] {
        const auto m = metrics(grid->grid);
        *out = {m.min_rows, m.min_eastern_col, m.qubit_count, m.t_count};
    });
}

lf_status lf_grid_metrics_json(const lf_grid* grid, char** out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] { *out = dup_string(to_json(metrics(grid->grid)).dump()); });
}

lf_status lf_grid_rotations(const lf_grid* grid, char** out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& r : qasm::collect_rotations(grid->grid)) list.push_back(qasm::to_json(r));
        *out = dup_string(list.dump());
    });
}

void lf_grid_free(lf_grid* grid) { delete grid; }

// ---- graphs

lf_status lf_graph_create_grid(int rows, int cols, lf_graph** out) {
    if (!out) return argument_error("null argument");
    return guarded([&] { *out = new lf_graph{create_grid(rows, cols)}; });
}

lf_status lf_graph_from_json(const char* json, lf_graph** out) {
    if (!json || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_graph{graph_from_json(parse_json(json))}; });
}

lf_status lf_graph_load(const char* path, lf_graph** out) {
    if (!path || !out) return argument_error("null argument");
    return guarded([&] {
        auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorKind::Parse, std::string(path) + " is not valid JSON", {{"path", path}});
        *out = new lf_graph{graph_from_json(doc)};
    });
}

lf_status lf_graph_to_json(const lf_graph* graph, char** out) {
    if (!graph || !out) return argument_error("null argument");
    return guarded([&] { *out = dup_string(to_json(graph->graph).dump(2)); });
}

lf_status lf_graph_save(const lf_graph* graph, const char* path) {
    if (!graph || !path) return argument_error("null argument");
    return guarded([&] { write_file(path, to_json(graph->graph).dump(2) + "\n"); });
}

lf_status lf_graph_clone(const lf_graph* graph, lf_graph** out) {
    if (!graph || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_graph{graph->graph}; });
}

lf_status lf_graph_vertex_count(const lf_graph* graph, size_t* out) {
    if (!graph || !out) return argument_error("null argument");
    *out = graph->graph.vertex_count();
    return LF_OK;
}

lf_status lf_graph_cz_count(const lf_graph* graph, size_t* out) {
    if (!graph || !out) return argument_error("null argument");
    *out = cz_count(graph->graph);
    return LF_OK;
}

lf_status lf_graph_local_complement(lf_graph* graph, int64_t vertex) {
    if (!graph) return argument_error("null argument");
    return guarded([&] { graph->graph = local_complement(graph->graph, vertex); });
}

lf_status lf_graph_measure(lf_graph* graph, int64_t vertex, char axis, int sign, const int64_t* b0,
                           char** record_json) {
    if (!graph) return argument_error("null argument");
    if (sign != 1 && sign != -1) return argument_error("sign must be +1 or -1");
    return guarded([&] {
        MeasurementBasis basis{parse_axis(std::string(1, axis)), sign > 0 ? Sign::Plus : Sign::Minus};
        std::optional<VertexId> chosen;
        if (b0) chosen = *b0;
        auto [next, record] = measure(graph->graph, vertex, basis, chosen);
        char* text = record_json ? dup_string(to_json(record).dump()) : nullptr;
        graph->graph = std::move(next);
        if (record_json) *record_json = text;
    });
}

lf_status lf_graph_minimize_cz(const lf_graph* graph, size_t budget, lf_graph** out, char** report_json) {
    if (!graph || !out) return argument_error("null argument");
    return guarded([&] {
        auto result = minimize_cz(graph->graph, budget);
        if (report_json) {
            *report_json = dup_string(nlohmann::json{{"cz_count", cz_count(result.graph)},
                                                     {"sequence", result.sequence},
                                                     {"explored", result.explored},
                                                     {"proven_minimal", result.proven_minimal}}
                                          .dump());
        }
        *out = new lf_graph{std::move(result.graph)};
    });
}

lf_status lf_graph_lc_equivalent(const lf_graph* a, const lf_graph* b, size_t budget, int* out) {
    if (!a || !b || !out) return argument_error("null argument");
    return guarded([&] { *out = lc_equivalent(a->graph, b->graph, budget) ? 1 : 0; });
}

lf_status lf_graph_lc_equivalent_algebraic(const lf_graph* a, const lf_graph* b, int* out) {
    if (!a || !b || !out) return argument_error("null argument");
    return guarded([&] {
        if (a->graph.vertices() != b->graph.vertices()) {
            throw Error(ErrorKind::Comparability, "graphs have different vertex sets");
        }
        if (a->graph.empty()) {
            *out = 1;
            return;
        }
        *out = stabilizer::equal_up_to_local_clifford(stabilizer::from_graph(a->graph),
                                                      stabilizer::from_graph(b->graph))
                   ? 1
                   : 0;
    });
}

lf_status lf_graph_reduce(const lf_graph* graph, const char* script_json, lf_graph** out, char** log_json) {
    if (!graph || !script_json || !out) return argument_error("null argument");
    return guarded([&] {
        const auto steps = parse_reduction_script(parse_json(script_json));
        auto result = replay(graph->graph, steps);
        if (log_json) {
            nlohmann::json log = nlohmann::json::array();
            for (const auto& entry : result.log) log.push_back(to_json(entry));
            *log_json = dup_string(log.dump(2));
        }
        *out = new lf_graph{std::move(result.graph)};
    });
}

void lf_graph_free(lf_graph* graph) { delete graph; }

// ---- lattices

lf_status lf_lattice_open(const lf_grid* grid, lf_lattice** out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_lattice{open_algorithm(grid->grid)}; });
}

lf_status lf_lattice_prepare(const lf_lattice* lattice, lf_lattice** out) {
    if (!lattice || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_lattice{prepare(lattice->lattice)}; });
}

lf_status lf_lattice_to_json(const lf_lattice* lattice, char** out) {
    if (!lattice || !out) return argument_error("null argument");
    return guarded([&] { *out = dup_string(to_json(lattice->lattice).dump(2)); });
}

lf_status lf_lattice_graph(const lf_lattice* lattice, lf_graph** out) {
    if (!lattice || !out) return argument_error("null argument");
    return guarded([&] { *out = new lf_graph{to_graph_state(lattice->lattice)}; });
}

void lf_lattice_free(lf_lattice* lattice) { delete lattice; }

// ---- qasm

lf_status lf_compile(const lf_grid* grid, const char* bindings_json, lf_program** out) {
    if (!grid || !out) return argument_error("null argument");
    return guarded([&] {
        std::vector<qasm::ThetaBinding> bindings;
        if (bindings_json) bindings = qasm::bindings_from_json(parse_json(bindings_json));
        *out = new lf_program{qasm::emit(grid->grid, bindings)};
    });
}

const char* lf_program_text(const lf_program* program) { return program ? program->program.text.c_str() : ""; }

size_t lf_program_qubit_count(const lf_program* program) { return program ? program->program.qubit_count : 0; }

lf_status lf_program_write(const lf_program* program, const char* path) {
    if (!program || !path) return argument_error("null argument");
    return guarded([&] { qasm::write_script(program->program, path); });
}

void lf_program_free(lf_program* program) { delete program; }

lf_status lf_parse_angle(const char* text, double* out) {
    if (!text || !out) return argument_error("null argument");
    return guarded([&] { *out = qasm::parse_angle(text); });
}

lf_status lf_qasm_check(const char* text, char** summary_json) {
    if (!text) return argument_error("null argument");
    return guarded([&] {
        const auto program = qasm::parse(text);
        std::map<std::string, std::size_t> counts;
        for (const auto& g : program.gates) ++counts[g.name];
        if (summary_json) {
            *summary_json = dup_string(nlohmann::json{{"version", program.version},
                                                      {"qubits", program.qubit_count},
                                                      {"bits", program.bit_count},
                                                      {"gate_counts", counts},
                                                      {"measures_all", program.measures_all}}
                                           .dump());
        }
    });
}

// ---- submission and service

lf_status lf_submit(const char* qasm_text, const char* endpoint, int json_body, char** result_json) {
    if (!qasm_text) return argument_error("null argument");
    return guarded([&] {
        service::SubmitOptions options;
        if (endpoint) options.endpoint = endpoint;
        options.format = json_body ? service::BodyFormat::Json : service::BodyFormat::PlainText;
        const auto result = service::submit(qasm_text, options);
        if (result_json) *result_json = dup_string(service::to_json(result).dump());
    });
}

lf_status lf_service_create(lf_service** out) {
    if (!out) return argument_error("null argument");
    return guarded([&] { *out = new lf_service; });
}

lf_status lf_service_start(lf_service* service, const char* host, int port, int* bound_port) {
    if (!service || !host) return argument_error("null argument");
    return guarded([&] {
        const int bound = service->service.start(host, port);
        if (bound_port) *bound_port = bound;
    });
}

lf_status lf_service_run(lf_service* service, const char* host, int port) {
    if (!service || !host) return argument_error("null argument");
    return guarded([&] { service->service.run(host, port); });
}

lf_status lf_service_handle(lf_service* service, const char* method, const char* path, const char* body,
                            int* status, char** response_body) {
    if (!service || !method || !path || !status) return argument_error("null argument");
    return guarded([&] {
        auto response = service->service.handle(method, path, body ? body : "");
        *status = response.status;
        if (response_body) *response_body = dup_string(response.body);
    });
}

void lf_service_wait(lf_service* service) {
    if (service) service->service.wait();
}

void lf_service_stop(lf_service* service) {
    if (service) service->service.stop();
}

void lf_service_free(lf_service* service) { delete service; }

}  // extern "C"
