/* C interface to the polyroute library. All objects are opaque handles that
 * must be released with the matching *_free function. Functions return a
 * pr_status; on failure pr_last_error_message() describes the problem (per
 * thread). Strings returned through char** are released with pr_string_free. */
#ifndef POLYROUTE_H
#define POLYROUTE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PR_API __declspec(dllexport)
#else
#define PR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pr_status {
    PR_OK = 0,
    PR_INVALID_ARGUMENT = 1,
    PR_IO_ERROR = 2,
    PR_PARSE_ERROR = 3,
    PR_NON_TRIANGULAR = 4,
    PR_NOT_CLOSED = 5,
    PR_NON_CONVEX = 6,
    PR_DEGENERATE_SEGMENT = 7,
    PR_DEGENERATE_FACE = 8,
    PR_NOT_ADJACENT = 9,
    PR_UNBOUNDED_SKETCH = 10,
    PR_DISCONNECTED_SPANNER = 11,
    PR_UNKNOWN_VERTEX = 12,
    PR_TRIVIAL_ROUTE = 13,
    PR_NO_EXIT_FACE = 14,
    PR_HOP_LIMIT_EXCEEDED = 15,
    PR_FORMAT_VERSION_MISMATCH = 16,
    PR_CHECKSUM_MISMATCH = 17,
    PR_TRUNCATED_STREAM = 18,
    PR_INTERNAL = 99
} pr_status;

typedef struct pr_mesh pr_mesh;
typedef struct pr_network pr_network;
typedef struct pr_trace pr_trace;
typedef struct pr_report pr_report;

PR_API const char* pr_last_error_message(void);
PR_API const char* pr_status_name(pr_status status);
PR_API void pr_string_free(char* s);

/* Meshes ------------------------------------------------------------------ */

PR_API pr_status pr_mesh_load_off(const char* path, pr_mesh** out);
PR_API pr_status pr_mesh_from_off_string(const char* text, pr_mesh** out);
/* shape: "tetra", "cube", "octa" or "sphere" (n points, seed). */
PR_API pr_status pr_mesh_generate(const char* shape, uint32_t n, uint64_t seed, pr_mesh** out);
PR_API pr_status pr_mesh_write_off(const pr_mesh* mesh, const char* path);
PR_API pr_status pr_mesh_to_off(const pr_mesh* mesh, char** out);
PR_API size_t pr_mesh_vertex_count(const pr_mesh* mesh);
PR_API size_t pr_mesh_face_count(const pr_mesh* mesh);
PR_API void pr_mesh_free(pr_mesh* mesh);

typedef struct pr_mesh_report {
    uint32_t vertices;
    uint32_t faces;
    uint32_t edges;
    double theta_m;
    double theta_m_fan;
    double min_corner_angle;
    double diameter;
    double surface_area;
    uint32_t patches;               /* at the given delta */
    double max_normal_cone_width;   /* radians */
} pr_mesh_report;

PR_API pr_status pr_mesh_validate(const pr_mesh* mesh, double delta, pr_mesh_report* out);

/* Preprocessing ----------------------------------------------------------- */

typedef struct pr_config {
    double eps;     /* in (0, 1) */
    double delta;   /* <= 0: same as eps */
    uint64_t seed;
    int use_seed;   /* nonzero: seeded landmark sampling */
} pr_config;

typedef struct pr_stats {
    double eps;
    double delta;
    uint32_t vertices;
    uint32_t patches;
    uint32_t reps;
    uint32_t spanner_nodes;
    uint32_t steiner_nodes;
    uint32_t spanner_edges;
    uint64_t table_entries;
    uint64_t table_bytes;
    double theta_m;
    double d_hat;
    double wall_seconds;   /* 0 for networks loaded from disk */
} pr_stats;

PR_API pr_status pr_preprocess(const pr_mesh* mesh, const pr_config* config, pr_network** out);
PR_API pr_status pr_network_stats(const pr_network* net, pr_stats* out);
PR_API pr_status pr_network_summary(const pr_network* net, char** out);
PR_API pr_status pr_network_save(const pr_network* net, const char* path);
PR_API pr_status pr_network_load(const char* path, pr_network** out);
PR_API pr_status pr_network_to_json(const pr_network* net, char** out);
/* Only available for networks built in this process. */
PR_API pr_status pr_network_spanner_dump(const pr_network* net, char** out);
PR_API size_t pr_network_vertex_count(const pr_network* net);
PR_API void pr_network_free(pr_network* net);

/* Routing ----------------------------------------------------------------- */

typedef enum pr_hop_case {
    PR_HOP_FIRST = 0,
    PR_HOP_GENERAL = 1,
    PR_HOP_VERTEX_HIT = 2,
    PR_HOP_TIE_BREAK = 3,
    PR_HOP_PSEUDO_SWITCH = 4
} pr_hop_case;

/* hop_mult <= 0 selects the default of 4 (hop limit = hop_mult * n). */
PR_API pr_status pr_route(const pr_network* net, uint32_t s, uint32_t t, double hop_mult, pr_trace** out);
PR_API size_t pr_trace_hop_count(const pr_trace* trace);
/* i in [0, hop_count]; vertex 0 is the source. */
PR_API uint32_t pr_trace_vertex(const pr_trace* trace, size_t i);
/* i in [0, hop_count). */
PR_API pr_hop_case pr_trace_hop_case(const pr_trace* trace, size_t i);
PR_API double pr_trace_length(const pr_trace* trace);
PR_API size_t pr_trace_degenerate_events(const pr_trace* trace);
PR_API pr_status pr_trace_format(const pr_trace* trace, char** out);
PR_API void pr_trace_free(pr_trace* trace);

/* Packet header size in bits: identifiers, and the guiding plane counted apart. */
PR_API pr_status pr_network_header_bits(const pr_network* net, double hop_mult, uint64_t* label_bits,
                                        uint64_t* plane_bits);

/* Oracles and benchmarks -------------------------------------------------- */

PR_API pr_status pr_oracle_distance(const pr_network* net, uint32_t s, uint32_t t, uint32_t subdiv, double* out);
PR_API pr_status pr_oracle_edge_distance(const pr_network* net, uint32_t s, uint32_t t, double* out);
PR_API pr_status pr_bench(const pr_network* net, size_t pairs, uint64_t seed, uint32_t subdiv, double hop_mult,
                          pr_report** out);
/* Same as pr_bench over an explicit list of (s[i], t[i]) pairs. */
PR_API pr_status pr_bench_pairs(const pr_network* net, const uint32_t* s, const uint32_t* t, size_t count,
                                uint32_t subdiv, double hop_mult, pr_report** out);
PR_API size_t pr_report_pair_count(const pr_report* report);
PR_API size_t pr_report_violations(const pr_report* report);
PR_API double pr_report_max_ratio(const pr_report* report);
PR_API double pr_report_mean_ratio(const pr_report* report);
PR_API double pr_report_mu(const pr_report* report);
PR_API pr_status pr_report_csv(const pr_report* report, char** out);
PR_API void pr_report_free(pr_report* report);

#ifdef __cplusplus
}
#endif

#endif
