#include "polyroute/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace polyroute {

namespace {

std::uint32_t ceil_count(double x)
{
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(x - 1e-9)));
}

std::uint32_t bucket(double x, double lo, double w, std::uint32_t n)
{
    if (!(w > 0))
        return 0;
    const double k = std::ceil((x - lo) / w) - 1;
    return static_cast<std::uint32_t>(std::clamp(k, 0.0, double(n - 1)));
}

} // namespace

CellId Grid::cell_of(const Point2& q) const
{
    if (strip) {
        const double x = strip_along_x ? q.x : q.y;
        const double lo_x = strip_along_x ? lo.x : lo.y;
        return bucket(x, lo_x, strip_along_x ? cell_w : cell_h, cols);
    }
    return bucket(q.y, lo.y, cell_h, rows) * cols + bucket(q.x, lo.x, cell_w, cols);
}

Grid build_grid(const Projection& projection, double eps)
{
    if (!(eps > 0 && eps <= 1))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1]");
    if (projection.points.empty())
        throw Error(ErrorCode::InvalidArgument, "empty projection");

    const bool any_home = std::any_of(projection.points.begin(), projection.points.end(),
                                      [](const ProjectedVertex& p) { return p.home; });
    Grid g;
    g.patch = projection.patch;
    g.lo = {INFINITY, INFINITY};
    g.hi = {-INFINITY, -INFINITY};
    for (const auto& p : projection.points) {
        if (any_home && !p.home)
            continue;
        g.lo = {std::min(g.lo.x, p.local.x), std::min(g.lo.y, p.local.y)};
        g.hi = {std::max(g.hi.x, p.local.x), std::max(g.hi.y, p.local.y)};
    }
    const double wx = g.hi.x - g.lo.x, wy = g.hi.y - g.lo.y;
    const double big = std::max(wx, wy);
    if (std::min(wx, wy) <= 1e-9 * std::max(big, 1.0)) {
        g.strip = true;
        g.strip_along_x = wx >= wy;
        g.rows = 1;
        g.cols = ceil_count(1.0 / eps);
        g.cell_w = wx / g.cols;
        g.cell_h = wy / g.cols;
        return g;
    }
    g.rows = g.cols = ceil_count(std::sqrt(1.0 / eps));
    g.cell_w = wx / g.cols;
    g.cell_h = wy / g.rows;
    return g;
}

RepresentativeAssignment select_representatives(const std::vector<Grid>& grids,
                                                const std::vector<Projection>& projections,
                                                std::size_t vertex_count)
{
    RepresentativeAssignment a;
    a.rep_of.assign(vertex_count, kNone);
    a.patch_of.assign(vertex_count, kNone);
    a.cell_of.assign(vertex_count, kNone);
    a.rep_point.assign(vertex_count, Point2{});
    a.members.assign(vertex_count, {});
    a.reps_of_patch.assign(projections.size(), {});

    for (std::size_t i = 0; i < projections.size(); ++i) {
        const Grid& g = grids.at(i);
        std::map<CellId, VertexId> best;
        for (const auto& p : projections[i].points) {
            if (!p.home)
                continue;
            const CellId c = g.cell_of(p.local);
            a.cell_of[p.vertex] = c;
            a.patch_of[p.vertex] = static_cast<PatchId>(i);
            auto [it, fresh] = best.emplace(c, p.vertex);
            if (!fresh)
                it->second = std::min(it->second, p.vertex);
        }
        for (const auto& p : projections[i].points) {
            if (!p.home)
                continue;
            const VertexId r = best.at(a.cell_of[p.vertex]);
            a.rep_of[p.vertex] = r;
            if (r == p.vertex) {
                a.rep_point[r] = p.local;
                a.reps_of_patch[i].push_back(r);
            } else {
                a.members[r].push_back(p.vertex);
            }
        }
        std::sort(a.reps_of_patch[i].begin(), a.reps_of_patch[i].end());
    }
    for (VertexId v = 0; v < vertex_count; ++v) {
        if (a.rep_of[v] == kNone)
            throw Error(ErrorCode::Internal, "vertex " + std::to_string(v) + " has no home patch");
        if (a.rep_of[v] == v)
            a.reps.push_back(v);
        std::sort(a.members[v].begin(), a.members[v].end());
    }
    return a;
}

} // namespace polyroute
