#include "polyroute/pipeline.hpp"

#include <chrono>
#include <cstdio>

#include "polyroute/oracle.hpp"

namespace polyroute {

std::string PreprocessSummary::text() const
{
    std::string s;
    char buf[160];
    const auto line = [&](const char* key, const char* fmt, auto v) {
        std::snprintf(buf, sizeof buf, "%-15s", key);
        s += buf;
        std::snprintf(buf, sizeof buf, fmt, v);
        s += buf;
        s += '\n';
    };
    line("eps", "%g", eps);
    line("delta", "%g", delta);
    if (seeded)
        line("seed", "%llu", static_cast<unsigned long long>(seed));
    else
        line("seed", "%s", "none (degree-ordered landmarks)");
    line("vertices", "%zu", vertices);
    line("patches", "%zu", patches);
    line("reps", "%zu", reps);
    line("spanner_nodes", "%zu", spanner_nodes);
    line("steiner_nodes", "%zu", steiner_nodes);
    line("spanner_edges", "%zu", spanner_edges);
    line("landmarks", "%zu", landmarks);
    line("table_entries", "%zu", table_entries);
    line("table_bytes", "%zu", table_bytes);
    line("theta_m", "%.6g", theta_m);
    line("theta_m_fan", "%.6g", theta_m_fan);
    line("d_hat", "%.6g", d_hat);
    line("wall_seconds", "%.3f", wall_seconds);
    return s;
}

Preprocessed preprocess(const TriangulatedPolytope& p, const PreprocessConfig& cfg)
{
    if (!(cfg.eps > 0 && cfg.eps < 1))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1)");
    const auto t0 = std::chrono::steady_clock::now();
    const double delta = cfg.delta > 0 ? cfg.delta : cfg.eps;

    Preprocessed out;
    out.patches = compute_patches(p, delta);
    out.sketch = build_sketch(p, out.patches);
    for (PatchId i = 0; i < out.patches.patches.size(); ++i) {
        out.projections.push_back(project_patch(p, out.patches, i));
        out.grids.push_back(build_grid(out.projections.back(), cfg.eps));
    }
    out.assignment = select_representatives(out.grids, out.projections, p.vertex_count());
    const auto steiner = place_steiner_points(out.sketch, out.assignment, cfg.eps);
    out.spanner = assemble_global_spanner(p, out.sketch, out.assignment, steiner, cfg.eps);
    out.scheme = tz_preprocess(WeightedGraph::from_spanner(out.spanner), cfg.seed);
    prune_intra_face(out.scheme, out.spanner);
    const auto hops = materialize_plane_entries(out.scheme, out.spanner, out.sketch);

    const PolytopeMetrics metrics = compute_theta_m(p);
    TableMeta meta;
    meta.eps = cfg.eps;
    meta.delta = delta;
    meta.theta_m = metrics.theta_m;
    meta.d_hat = estimate_D(p, cfg.eps);
    meta.seed = cfg.seed.value_or(0);
    meta.seeded = cfg.seed.has_value();
    out.tables = build_tables({p, out.patches, out.assignment, out.spanner, out.scheme, hops, meta});

    auto& s = out.summary;
    s.eps = cfg.eps;
    s.delta = delta;
    s.seed = meta.seed;
    s.seeded = meta.seeded;
    s.vertices = p.vertex_count();
    s.patches = out.patches.patches.size();
    s.reps = out.assignment.reps.size();
    s.spanner_nodes = out.spanner.node_count();
    s.steiner_nodes = out.spanner.steiner_count;
    s.spanner_edges = out.spanner.edges.size();
    s.landmarks = out.scheme.landmarks.size();
    s.table_entries = out.tables.entry_count();
    s.table_bytes = serialized_size(out.tables);
    s.theta_m = metrics.theta_m;
    s.theta_m_fan = metrics.theta_m_fan;
    s.d_hat = meta.d_hat;
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace polyroute
