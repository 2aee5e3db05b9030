/* C interface to the latticeforge core.
 *
 * Every function returns an lf_status. On failure the thread's last error is
 * set; lf_last_error_json() describes it as {"error", "message", "detail"?}.
 * Strings handed out through char** parameters are owned by the caller and
 * released with lf_string_free(). Handles are released with their _free
 * function; passing NULL to any _free function is a no-op.
 */
#ifndef LATTICEFORGE_H
#define LATTICEFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(LF_BUILDING_LIBRARY)
#define LF_API __attribute__((visibility("default")))
#else
#define LF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
    LF_OK = 0,
    LF_ERR_ARGUMENT = 1,
    LF_ERR_BOUNDS,
    LF_ERR_NOT_FOUND,
    LF_ERR_INVARIANT,
    LF_ERR_INVALID_CHOICE,
    LF_ERR_COMPARABILITY,
    LF_ERR_RESOURCE,
    LF_ERR_DOMAIN,
    LF_ERR_BRANCH_IMPOSSIBLE,
    LF_ERR_COLLISION,
    LF_ERR_GEOMETRY,
    LF_ERR_PARSE,
    LF_ERR_VERSION,
    LF_ERR_UNSUPPORTED_GATE,
    LF_ERR_ROUTING,
    LF_ERR_UNBOUND_THETA,
    LF_ERR_UNKNOWN_TARGET,
    LF_ERR_FILE,
    LF_ERR_CONFIGURATION,
    LF_ERR_TRANSPORT,
    LF_ERR_VALIDATION,
    LF_ERR_CONFLICT,
    LF_ERR_INTERNAL = 99
} lf_status;

typedef struct lf_grid lf_grid;
typedef struct lf_graph lf_graph;
typedef struct lf_lattice lf_lattice;
typedef struct lf_program lf_program;
typedef struct lf_service lf_service;

typedef struct lf_metrics {
    int min_rows;
    int min_eastern_col;
    size_t qubit_count;
    size_t t_count;
} lf_metrics;

LF_API const char* lf_version(void);

/* Valid until the next failing call on the same thread. Never NULL. */
LF_API const char* lf_last_error_json(void);
LF_API const char* lf_last_error_message(void);
LF_API void lf_string_free(char* s);

/* ---- algorithm grids ---- */

LF_API lf_status lf_grid_from_json(const char* json, lf_grid** out);
LF_API lf_status lf_grid_load(const char* path, lf_grid** out);
LF_API lf_status lf_grid_ingest_circuit(const char* json, lf_grid** out);
LF_API lf_status lf_grid_to_json(const lf_grid* grid, char** out);
LF_API lf_status lf_grid_save(const lf_grid* grid, const char* path);
LF_API lf_status lf_grid_tile_count(const lf_grid* grid, size_t* out);
/* Diagnostics as a JSON array; *has_errors is set when any has error severity. */
LF_API lf_status lf_grid_validate(const lf_grid* grid, char** diagnostics_json, int* has_errors);
LF_API lf_status lf_grid_metrics(const lf_grid* grid, lf_metrics* out);
LF_API lf_status lf_grid_metrics_json(const lf_grid* grid, char** out);
/* Rotation tiles awaiting an angle, ordered by (row, col). */
LF_API lf_status lf_grid_rotations(const lf_grid* grid, char** out);
LF_API void lf_grid_free(lf_grid* grid);

/* ---- graph states ---- */

LF_API lf_status lf_graph_create_grid(int rows, int cols, lf_graph** out);
LF_API lf_status lf_graph_from_json(const char* json, lf_graph** out);
LF_API lf_status lf_graph_load(const char* path, lf_graph** out);
LF_API lf_status lf_graph_to_json(const lf_graph* graph, char** out);
LF_API lf_status lf_graph_save(const lf_graph* graph, const char* path);
LF_API lf_status lf_graph_clone(const lf_graph* graph, lf_graph** out);
LF_API lf_status lf_graph_vertex_count(const lf_graph* graph, size_t* out);
LF_API lf_status lf_graph_cz_count(const lf_graph* graph, size_t* out);
/* In place; the graph is unchanged on failure. */
LF_API lf_status lf_graph_local_complement(lf_graph* graph, int64_t vertex);
/* axis is 'X', 'Y' or 'Z'; sign is +1 or -1; b0 may be NULL. record_json may be NULL. */
LF_API lf_status lf_graph_measure(lf_graph* graph, int64_t vertex, char axis, int sign, const int64_t* b0,
                                  char** record_json);
LF_API lf_status lf_graph_minimize_cz(const lf_graph* graph, size_t budget, lf_graph** out, char** report_json);
LF_API lf_status lf_graph_lc_equivalent(const lf_graph* a, const lf_graph* b, size_t budget, int* out);
/* Same question answered with stabilizer algebra instead of an orbit search. */
LF_API lf_status lf_graph_lc_equivalent_algebraic(const lf_graph* a, const lf_graph* b, int* out);
LF_API lf_status lf_graph_reduce(const lf_graph* graph, const char* script_json, lf_graph** out, char** log_json);
LF_API void lf_graph_free(lf_graph* graph);

/* ---- lattices ---- */

LF_API lf_status lf_lattice_open(const lf_grid* grid, lf_lattice** out);
LF_API lf_status lf_lattice_prepare(const lf_lattice* lattice, lf_lattice** out);
LF_API lf_status lf_lattice_to_json(const lf_lattice* lattice, char** out);
LF_API lf_status lf_lattice_graph(const lf_lattice* lattice, lf_graph** out);
LF_API void lf_lattice_free(lf_lattice* lattice);

/* ---- OpenQASM ---- */

/* bindings_json: {"bindings": [...]} or a bare array; NULL means none. */
LF_API lf_status lf_compile(const lf_grid* grid, const char* bindings_json, lf_program** out);
LF_API const char* lf_program_text(const lf_program* program);
LF_API size_t lf_program_qubit_count(const lf_program* program);
LF_API lf_status lf_program_write(const lf_program* program, const char* path);
LF_API void lf_program_free(lf_program* program);
LF_API lf_status lf_parse_angle(const char* text, double* out);
/* Parses a program in the supported subset and summarises it as JSON. */
LF_API lf_status lf_qasm_check(const char* text, char** summary_json);

/* ---- submission and service ---- */

/* endpoint may be NULL to fall back to TUQ_QASM_ENDPOINT. */
LF_API lf_status lf_submit(const char* qasm_text, const char* endpoint, int json_body, char** result_json);

LF_API lf_status lf_service_create(lf_service** out);
/* Serves in the background; port 0 picks a free port. */
LF_API lf_status lf_service_start(lf_service* service, const char* host, int port, int* bound_port);
/* Blocks until the service is stopped. */
LF_API lf_status lf_service_run(lf_service* service, const char* host, int port);
/* Blocks until a started service is stopped. */
LF_API void lf_service_wait(lf_service* service);
LF_API lf_status lf_service_handle(lf_service* service, const char* method, const char* path, const char* body,
                                   int* status, char** response_body);
LF_API void lf_service_stop(lf_service* service);
LF_API void lf_service_free(lf_service* service);

#ifdef __cplusplus
}
#endif

#endif /* LATTICEFORGE_H */
