#include "polyroute/polyroute.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "polyroute/oracle.hpp"
#include "polyroute/pipeline.hpp"
#include "polyroute/shapes.hpp"

using namespace polyroute;

struct pr_mesh {
    TriangulatedPolytope mesh;
};

struct pr_network {
    TableSet tables;
    std::optional<PreprocessSummary> summary;
    std::string spanner_dump;
};

struct pr_trace {
    RouteTrace trace;
};

struct pr_report {
    StretchReport report;
};

namespace {

thread_local std::string g_error;

pr_status fail(pr_status s, std::string msg)
{
    g_error = std::move(msg);
    return s;
}

// Runs fn, turning exceptions into status codes.
template <class Fn>
pr_status guarded(Fn&& fn)
{
    try {
        g_error.clear();
        fn();
        return PR_OK;
    } catch (const Error& e) {
        return fail(static_cast<pr_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(PR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define PR_REQUIRE(cond, what)                                    \
    do {                                                          \
        if (!(cond))                                              \
            return fail(PR_INVALID_ARGUMENT, what);               \
    } while (0)

} // namespace

extern "C" {

const char* pr_last_error_message(void) { return g_error.c_str(); }

const char* pr_status_name(pr_status status) { return error_code_name(static_cast<ErrorCode>(status)); }

void pr_string_free(char* s) { std::free(s); }

pr_status pr_mesh_load_off(const char* path, pr_mesh** out)
{
    PR_REQUIRE(path && out, "null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, std::string("cannot open ") + path);
        auto m = std::make_unique<pr_mesh>();
        m->mesh = load_off(in);
        *out = m.release();
    });
}

pr_status pr_mesh_from_off_string(const char* text, pr_mesh** out)
{
    PR_REQUIRE(text && out, "null argument");
    return guarded([&] {
        auto m = std::make_unique<pr_mesh>();
        m->mesh = load_off(std::string_view(text));
        *out = m.release();
    });
}

pr_status pr_mesh_generate(const char* shape, uint32_t n, uint64_t seed, pr_mesh** out)
{
    PR_REQUIRE(shape && out, "null argument");
    return guarded([&] {
        auto m = std::make_unique<pr_mesh>();
        const std::string s = shape;
        if (s == "tetra")
            m->mesh = make_tetrahedron();
        else if (s == "cube")
            m->mesh = make_cube();
        else if (s == "octa")
            m->mesh = make_octahedron();
        else if (s == "sphere")
            m->mesh = make_sphere_hull(n, seed);
        else
            throw Error(ErrorCode::InvalidArgument, "unknown shape '" + s + "'");
        *out = m.release();
    });
}

pr_status pr_mesh_write_off(const pr_mesh* mesh, const char* path)
{
    PR_REQUIRE(mesh && path, "null argument");
    return guarded([&] {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error(ErrorCode::IoError, std::string("cannot write ") + path);
        os << to_off(mesh->mesh);
        if (!os)
            throw Error(ErrorCode::IoError, std::string("write failed: ") + path);
    });
}

pr_status pr_mesh_to_off(const pr_mesh* mesh, char** out)
{
    PR_REQUIRE(mesh && out, "null argument");
    return guarded([&] { *out = dup_string(to_off(mesh->mesh)); });
}

size_t pr_mesh_vertex_count(const pr_mesh* mesh) { return mesh ? mesh->mesh.vertex_count() : 0; }
size_t pr_mesh_face_count(const pr_mesh* mesh) { return mesh ? mesh->mesh.face_count() : 0; }
void pr_mesh_free(pr_mesh* mesh) { delete mesh; }

pr_status pr_mesh_validate(const pr_mesh* mesh, double delta, pr_mesh_report* out)
{
    PR_REQUIRE(mesh && out, "null argument");
    PR_REQUIRE(delta > 0, "delta must be positive");
    return guarded([&] {
        const auto& p = mesh->mesh;
        const auto m = compute_theta_m(p);
        const auto d = compute_patches(p, delta);
        build_sketch(p, d);
        pr_mesh_report r{};
        r.vertices = static_cast<uint32_t>(p.vertex_count());
        r.faces = static_cast<uint32_t>(p.face_count());
        r.edges = static_cast<uint32_t>(p.edge_count());
        r.theta_m = m.theta_m;
        r.theta_m_fan = m.theta_m_fan;
        r.min_corner_angle = m.min_corner_angle;
        r.diameter = p.diameter();
        r.surface_area = p.surface_area();
        r.patches = static_cast<uint32_t>(d.patches.size());
        for (const auto& patch : d.patches)
            r.max_normal_cone_width = std::max(r.max_normal_cone_width, patch.normal_cone_width);
        *out = r;
    });
}

pr_status pr_preprocess(const pr_mesh* mesh, const pr_config* config, pr_network** out)
{
    PR_REQUIRE(mesh && config && out, "null argument");
    return guarded([&] {
        PreprocessConfig cfg;
        cfg.eps = config->eps;
        cfg.delta = config->delta;
        if (config->use_seed)
            cfg.seed = config->seed;
        Preprocessed pre = preprocess(mesh->mesh, cfg);
        auto net = std::make_unique<pr_network>();
        net->summary = pre.summary;
        net->spanner_dump = pre.spanner.dump();
        net->tables = std::move(pre.tables);
        *out = net.release();
    });
}

pr_status pr_network_stats(const pr_network* net, pr_stats* out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] {
        pr_stats s{};
        const auto& m = net->tables.meta;
        s.eps = m.eps;
        s.delta = m.delta;
        s.vertices = static_cast<uint32_t>(net->tables.tables.size());
        s.patches = m.patch_count;
        s.spanner_nodes = m.node_count;
        s.theta_m = m.theta_m;
        s.d_hat = m.d_hat;
        for (const auto& t : net->tables.tables)
            s.reps += t.node != kNone ? 1 : 0;
        s.table_entries = net->tables.entry_count();
        s.table_bytes = serialized_size(net->tables);
        if (net->summary) {
            s.steiner_nodes = static_cast<uint32_t>(net->summary->steiner_nodes);
            s.spanner_edges = static_cast<uint32_t>(net->summary->spanner_edges);
            s.wall_seconds = net->summary->wall_seconds;
        }
        *out = s;
    });
}

pr_status pr_network_summary(const pr_network* net, char** out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] {
        if (!net->summary)
            throw Error(ErrorCode::InvalidArgument, "no preprocessing summary for a loaded network");
        *out = dup_string(net->summary->text());
    });
}

pr_status pr_network_save(const pr_network* net, const char* path)
{
    PR_REQUIRE(net && path, "null argument");
    return guarded([&] {
        const auto bytes = serialize(net->tables);
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error(ErrorCode::IoError, std::string("cannot write ") + path);
        os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!os)
            throw Error(ErrorCode::IoError, std::string("write failed: ") + path);
    });
}

pr_status pr_network_load(const char* path, pr_network** out)
{
    PR_REQUIRE(path && out, "null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, std::string("cannot open ") + path);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto net = std::make_unique<pr_network>();
        net->tables = deserialize(bytes);
        *out = net.release();
    });
}

pr_status pr_network_to_json(const pr_network* net, char** out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] { *out = dup_string(to_json(net->tables)); });
}

pr_status pr_network_spanner_dump(const pr_network* net, char** out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] {
        if (!net->summary)
            throw Error(ErrorCode::InvalidArgument, "spanner is not stored in table files");
        *out = dup_string(net->spanner_dump);
    });
}

size_t pr_network_vertex_count(const pr_network* net) { return net ? net->tables.tables.size() : 0; }
void pr_network_free(pr_network* net) { delete net; }

pr_status pr_route(const pr_network* net, uint32_t s, uint32_t t, double hop_mult, pr_trace** out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] {
        RouteOptions opt;
        if (hop_mult > 0)
            opt.hop_mult = hop_mult;
        auto tr = std::make_unique<pr_trace>();
        tr->trace = route(s, t, net->tables, opt);
        *out = tr.release();
    });
}

size_t pr_trace_hop_count(const pr_trace* trace) { return trace ? trace->trace.hops.size() : 0; }

uint32_t pr_trace_vertex(const pr_trace* trace, size_t i)
{
    return trace && i < trace->trace.vertices.size() ? trace->trace.vertices[i] : UINT32_MAX;
}

pr_hop_case pr_trace_hop_case(const pr_trace* trace, size_t i)
{
    return trace && i < trace->trace.hops.size() ? static_cast<pr_hop_case>(trace->trace.hops[i]) : PR_HOP_GENERAL;
}

double pr_trace_length(const pr_trace* trace) { return trace ? trace->trace.length : 0; }
size_t pr_trace_degenerate_events(const pr_trace* trace) { return trace ? trace->trace.degenerate_events : 0; }

pr_status pr_trace_format(const pr_trace* trace, char** out)
{
    PR_REQUIRE(trace && out, "null argument");
    return guarded([&] { *out = dup_string(format_trace(trace->trace)); });
}

void pr_trace_free(pr_trace* trace) { delete trace; }

pr_status pr_network_header_bits(const pr_network* net, double hop_mult, uint64_t* label_bits,
                                 uint64_t* plane_bits)
{
    PR_REQUIRE(net && label_bits && plane_bits, "null argument");
    return guarded([&] {
        RouteOptions opt;
        if (hop_mult > 0)
            opt.hop_mult = hop_mult;
        const HeaderSize h = header_size(net->tables, opt);
        *label_bits = h.label_bits;
        *plane_bits = h.plane_bits;
    });
}

pr_status pr_oracle_distance(const pr_network* net, uint32_t s, uint32_t t, uint32_t subdiv, double* out)
{
    PR_REQUIRE(net && out, "null argument");
    PR_REQUIRE(s < net->tables.tables.size() && t < net->tables.tables.size(), "vertex id out of range");
    return guarded([&] { *out = subdivided_geodesic(net->tables.mesh, s, t, subdiv); });
}

pr_status pr_oracle_edge_distance(const pr_network* net, uint32_t s, uint32_t t, double* out)
{
    PR_REQUIRE(net && out, "null argument");
    PR_REQUIRE(s < net->tables.tables.size() && t < net->tables.tables.size(), "vertex id out of range");
    return guarded([&] { *out = edge_dijkstra(net->tables.mesh, s, t); });
}

pr_status pr_bench(const pr_network* net, size_t pairs, uint64_t seed, uint32_t subdiv, double hop_mult,
                   pr_report** out)
{
    PR_REQUIRE(net && out, "null argument");
    return guarded([&] {
        SweepOptions opt;
        opt.subdiv = subdiv;
        if (hop_mult > 0)
            opt.route.hop_mult = hop_mult;
        auto r = std::make_unique<pr_report>();
        r->report = stretch_sweep(net->tables, random_pairs(net->tables.tables.size(), pairs, seed), opt);
        *out = r.release();
    });
}

pr_status pr_bench_pairs(const pr_network* net, const uint32_t* s, const uint32_t* t, size_t count,
                         uint32_t subdiv, double hop_mult, pr_report** out)
{
    PR_REQUIRE(net && out && (count == 0 || (s && t)), "null argument");
    return guarded([&] {
        SweepOptions opt;
        opt.subdiv = subdiv;
        if (hop_mult > 0)
            opt.route.hop_mult = hop_mult;
        std::vector<std::pair<VertexId, VertexId>> pairs;
        for (size_t i = 0; i < count; ++i)
            pairs.emplace_back(s[i], t[i]);
        auto r = std::make_unique<pr_report>();
        r->report = stretch_sweep(net->tables, pairs, opt);
        *out = r.release();
    });
}

size_t pr_report_pair_count(const pr_report* r) { return r ? r->report.pairs.size() : 0; }
size_t pr_report_violations(const pr_report* r) { return r ? r->report.violations : 0; }
double pr_report_max_ratio(const pr_report* r) { return r ? r->report.max_ratio : 0; }
double pr_report_mean_ratio(const pr_report* r) { return r ? r->report.mean_ratio : 0; }
double pr_report_mu(const pr_report* r) { return r ? r->report.mu : 0; }

pr_status pr_report_csv(const pr_report* r, char** out)
{
    PR_REQUIRE(r && out, "null argument");
    return guarded([&] { *out = dup_string(r->report.csv()); });
}

void pr_report_free(pr_report* r) { delete r; }

} // extern "C"
