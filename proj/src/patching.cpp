#include "polyroute/patching.hpp"

#include <algorithm>
#include <deque>
#include <numbers>

namespace polyroute {

std::pair<double, double> normal_angles(const Vec3& n)
{
    return {std::acos(std::clamp(n.x, -1.0, 1.0)), std::acos(std::clamp(n.z, -1.0, 1.0))};
}

PatchDecomposition compute_patches(const TriangulatedPolytope& p, double delta)
{
    if (!(delta > 0))
        throw Error(ErrorCode::InvalidArgument, "delta must be positive");

    PatchDecomposition d;
    d.delta = delta;
    const auto dual = dual_graph(p);
    d.patch_of_face.assign(p.face_count(), kNone);
    const bool everything = delta >= std::numbers::pi;
    const double half = 0.5 * delta + 1e-12;

    for (FaceId seed = 0; seed < p.face_count(); ++seed) {
        if (d.patch_of_face[seed] != kNone)
            continue;
        Patch patch;
        patch.id = static_cast<PatchId>(d.patches.size());
        patch.rep_face = seed;
        const auto [sx, sz] = normal_angles(p.face_normal(seed));

        std::deque<FaceId> queue{seed};
        d.patch_of_face[seed] = patch.id;
        while (!queue.empty()) {
            const FaceId f = queue.front();
            queue.pop_front();
            patch.faces.push_back(f);
            for (auto g : dual.adjacency[f]) {
                if (d.patch_of_face[g] != kNone)
                    continue;
                const auto [gx, gz] = normal_angles(p.face_normal(g));
                if (everything || (std::abs(gx - sx) <= half && std::abs(gz - sz) <= half)) {
                    d.patch_of_face[g] = patch.id;
                    queue.push_back(g);
                }
            }
        }
        std::sort(patch.faces.begin(), patch.faces.end());

        const auto tri = p.face_points(seed);
        patch.gamma = Plane::through_points(tri[0], tri[1], tri[2]);
        patch.frame = Frame::from_plane(patch.gamma);
        for (auto f : patch.faces) {
            for (auto v : p.face(f))
                patch.vertices.push_back(v);
            const double c = std::clamp(dot(p.face_normal(f), patch.frame.n), -1.0, 1.0);
            patch.normal_cone_width = std::max(patch.normal_cone_width, std::acos(c));
        }
        std::sort(patch.vertices.begin(), patch.vertices.end());
        patch.vertices.erase(std::unique(patch.vertices.begin(), patch.vertices.end()),
                             patch.vertices.end());
        d.patches.push_back(std::move(patch));
    }

    d.home_patch.assign(p.vertex_count(), kNone);
    for (VertexId v = 0; v < p.vertex_count(); ++v) {
        for (auto f : p.vertex_fan(v))
            d.home_patch[v] = std::min(d.home_patch[v], d.patch_of_face[f]);
        d.patches[d.home_patch[v]].home_vertices.push_back(v);
    }
    return d;
}

double SketchFace::area() const
{
    double a = 0;
    for (std::size_t k = 0; k < polygon.size(); ++k)
        a += cross(polygon[k], polygon[(k + 1) % polygon.size()]);
    return 0.5 * a;
}

Point2 SketchFace::centroid() const
{
    Point2 c{};
    for (const auto& q : polygon)
        c = c + q;
    return polygon.empty() ? c : c * (1.0 / static_cast<double>(polygon.size()));
}

bool Sketch::contains(const Point3& x, double tol) const
{
    return std::all_of(faces.begin(), faces.end(), [&](const SketchFace& f) {
        return f.plane.signed_distance(x) <= tol;
    });
}

namespace {

struct LabeledVertex {
    Point2 q;
    std::int32_t label;  // label of the edge starting here
};

// Keeps the part of `poly` where a + b.x q.x + b.y q.y <= tol; the new edge on
// the cut line gets `label`.
std::vector<LabeledVertex> clip(const std::vector<LabeledVertex>& poly, double a, Point2 b,
                                std::int32_t label, double tol)
{
    std::vector<LabeledVertex> out;
    const auto value = [&](const Point2& q) { return a + dot(b, q); };
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const auto& cur = poly[k];
        const auto& nxt = poly[(k + 1) % poly.size()];
        const double gc = value(cur.q), gn = value(nxt.q);
        const bool in_c = gc <= tol, in_n = gn <= tol;
        if (in_c)
            out.push_back(cur);
        if (in_c != in_n) {
            const double t = gc / (gc - gn);
            const Point2 x = cur.q + (nxt.q - cur.q) * t;
            out.push_back({x, in_c ? label : cur.label});
        }
    }
    // Drop zero-length edges.
    std::vector<LabeledVertex> clean;
    for (std::size_t k = 0; k < out.size(); ++k)
        if (distance(out[k].q, out[(k + 1) % out.size()].q) > tol)
            clean.push_back(out[k]);
    return clean;
}

} // namespace

Sketch build_sketch(const TriangulatedPolytope& p, const PatchDecomposition& d)
{
    Sketch s;
    const double diam = p.diameter();
    const double box = 2 * diam;
    const double tol = p.snap();
    const Point3 c = p.centroid();
    const std::array<Vec3, 6> box_normals{Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0},
                                          Vec3{0, -1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}};

    for (const auto& patch : d.patches) {
        SketchFace face;
        face.patch = patch.id;
        face.plane = patch.gamma;
        face.frame = patch.frame;
        const Frame& fr = face.frame;

        const Point2 mid = fr.to_local(c);
        const double r = 8 * diam;
        std::vector<LabeledVertex> poly{{mid + Point2{-r, -r}, -1},
                                        {mid + Point2{r, -r}, -1},
                                        {mid + Point2{r, r}, -1},
                                        {mid + Point2{-r, r}, -1}};

        // Half-space n . (x - a) <= 0 restricted to the plane, as a function of q.
        auto cut = [&](const Vec3& n, const Point3& a, std::int32_t label) {
            const double a0 = dot(n, fr.origin - a);
            poly = clip(poly, a0, Point2{dot(n, fr.e1), dot(n, fr.e2)}, label, tol);
        };
        for (const auto& bn : box_normals)
            cut(bn, c + bn * box, -1);
        for (const auto& other : d.patches)
            if (other.id != patch.id && !poly.empty())
                cut(other.gamma.normal(), other.gamma.anchor(), static_cast<std::int32_t>(other.id));

        if (poly.size() < 3)
            throw Error(ErrorCode::UnboundedSketch,
                        "sketch face of patch " + std::to_string(patch.id) + " is empty");
        for (const auto& lv : poly) {
            face.polygon.push_back(lv.q);
            face.polygon3d.push_back(fr.to_world(lv.q));
            face.edge_neighbor.push_back(lv.label);
            if (lv.label < 0)
                s.bounded = false;
        }
        s.faces.push_back(std::move(face));
    }
    return s;
}

const ProjectedVertex* Projection::find(VertexId v) const
{
    const auto it = std::lower_bound(points.begin(), points.end(), v,
                                     [](const ProjectedVertex& pv, VertexId x) { return pv.vertex < x; });
    return it != points.end() && it->vertex == v ? &*it : nullptr;
}

Projection project_patch(const TriangulatedPolytope& p, const PatchDecomposition& d, PatchId id)
{
    const Patch& patch = d.patches.at(id);
    Projection proj;
    proj.patch = id;
    proj.points.reserve(patch.vertices.size());
    for (auto v : patch.vertices) {
        ProjectedVertex pv;
        pv.vertex = v;
        pv.projected = patch.frame.project(p.vertex(v));
        pv.local = patch.frame.to_local(pv.projected);
        pv.displacement = distance(pv.projected, p.vertex(v));
        pv.home = d.home_patch[v] == id;
        proj.points.push_back(pv);
    }
    return proj;
}

} // namespace polyroute
