#include "polyroute/shapes.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

namespace polyroute {

TriangulatedPolytope make_tetrahedron()
{
    return TriangulatedPolytope::build({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}},
                                       {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

TriangulatedPolytope make_cube()
{
    std::vector<Point3> v;
    for (int i = 0; i < 8; ++i)
        v.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    // Vertex index = x + 2y + 4z. Orientation is repaired by build().
    return TriangulatedPolytope::build(std::move(v), {{0, 1, 3}, {0, 3, 2},   // z = 0
                                                      {4, 5, 7}, {4, 7, 6},   // z = 1
                                                      {0, 1, 5}, {0, 5, 4},   // y = 0
                                                      {2, 3, 7}, {2, 7, 6},   // y = 1
                                                      {0, 2, 6}, {0, 6, 4},   // x = 0
                                                      {1, 3, 7}, {1, 7, 5}}); // x = 1
}

TriangulatedPolytope make_octahedron()
{
    return TriangulatedPolytope::build(
        {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
        {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

std::vector<std::array<VertexId, 3>> convex_hull(std::span<const Point3> pts)
{
    const std::size_t n = pts.size();
    if (n < 4)
        throw Error(ErrorCode::InvalidArgument, "convex hull needs at least 4 points");

    double scale = 0;
    for (const auto& p : pts)
        scale = std::max(scale, distance(p, pts[0]));
    const double eps = 1e-12 * std::max(scale, 1.0);

    // Initial tetrahedron from extreme points.
    std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
    double best = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (double d = distance(pts[i], pts[i0]); d > best) { best = d; i1 = i; }
    best = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (double d = norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0])); d > best) { best = d; i2 = i; }
    best = -1;
    const Vec3 nrm0 = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
    for (std::size_t i = 0; i < n; ++i)
        if (double d = std::abs(dot(nrm0, pts[i] - pts[i0])); d > best) { best = d; i3 = i; }
    if (!(best > eps * norm(nrm0)))
        throw Error(ErrorCode::InvalidArgument, "points are coplanar");

    const Point3 inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;

    struct HullFace {
        std::array<VertexId, 3> v;
        Vec3 n;
        double off;
        bool alive;
    };
    std::vector<HullFace> faces;
    auto add_face = [&](VertexId a, VertexId b, VertexId c) {
        Vec3 nn = cross(pts[b] - pts[a], pts[c] - pts[a]);
        if (dot(nn, inner - pts[a]) > 0) {
            std::swap(b, c);
            nn = -nn;
        }
        nn = normalized(nn);
        faces.push_back({{a, b, c}, nn, dot(nn, pts[a]), true});
    };
    const auto a = static_cast<VertexId>(i0), b = static_cast<VertexId>(i1),
               c = static_cast<VertexId>(i2), d = static_cast<VertexId>(i3);
    add_face(a, b, c);
    add_face(a, b, d);
    add_face(a, c, d);
    add_face(b, c, d);

    std::unordered_map<std::uint64_t, std::size_t> edge_owner;
    auto key = [](VertexId x, VertexId y) { return (std::uint64_t(x) << 32) | y; };

    for (std::size_t pi = 0; pi < n; ++pi) {
        if (pi == i0 || pi == i1 || pi == i2 || pi == i3)
            continue;
        const Point3& p = pts[pi];
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (faces[f].alive && dot(faces[f].n, p) - faces[f].off > eps)
                visible.push_back(f);
        if (visible.empty())
            continue;

        edge_owner.clear();
        for (auto f : visible)
            for (std::size_t k = 0; k < 3; ++k)
                edge_owner[key(faces[f].v[k], faces[f].v[(k + 1) % 3])] = f;
        std::vector<std::pair<VertexId, VertexId>> horizon;
        for (auto f : visible) {
            for (std::size_t k = 0; k < 3; ++k) {
                const VertexId x = faces[f].v[k], y = faces[f].v[(k + 1) % 3];
                if (!edge_owner.contains(key(y, x)))
                    horizon.emplace_back(x, y);
            }
            faces[f].alive = false;
        }
        for (const auto& [x, y] : horizon) {
            Vec3 nn = normalized(cross(pts[y] - pts[x], p - pts[x]));
            faces.push_back({{x, y, static_cast<VertexId>(pi)}, nn, dot(nn, pts[x]), true});
        }
    }

    std::vector<std::array<VertexId, 3>> out;
    for (const auto& f : faces)
        if (f.alive)
            out.push_back(f.v);
    return out;
}

TriangulatedPolytope make_sphere_hull(std::size_t n, std::uint64_t seed)
{
    if (n < 4)
        throw Error(ErrorCode::InvalidArgument, "sphere hull needs at least 4 points");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point3> pts;
    pts.reserve(n);
    while (pts.size() < n) {
        const Vec3 g{gauss(rng), gauss(rng), gauss(rng)};
        const double len = norm(g);
        if (len < 1e-9)
            continue;
        pts.push_back(g / len);
    }
    auto faces = convex_hull(pts);

    // Compact away any point that did not make it onto the hull.
    std::map<VertexId, VertexId> remap;
    for (const auto& f : faces)
        for (auto v : f)
            remap.emplace(v, 0);
    std::vector<Point3> verts;
    for (auto& [old, fresh] : remap) {
        fresh = static_cast<VertexId>(verts.size());
        verts.push_back(pts[old]);
    }
    for (auto& f : faces)
        for (auto& v : f)
            v = remap.at(v);
    return TriangulatedPolytope::build(std::move(verts), std::move(faces));
}

} // namespace polyroute
