#include "polyroute/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>

namespace polyroute {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double angle_of(const Point2& d)
{
    double a = std::atan2(d.y, d.x);
    if (a < 0)
        a += kTwoPi;
    return a >= kTwoPi ? 0.0 : a;
}

Point2 rotate(const Point2& q, double c, double s) { return {c * q.x - s * q.y, s * q.x + c * q.y}; }

// Orientation-preserving 2D motion sending (a0, a1) to (b0, b1).
struct Rigid2 {
    Point2 from{}, to{};
    double c = 1, s = 0;

    static Rigid2 matching(const Point2& a0, const Point2& a1, const Point2& b0, const Point2& b1)
    {
        const double t = std::atan2((b1 - b0).y, (b1 - b0).x) - std::atan2((a1 - a0).y, (a1 - a0).x);
        return {a0, b0, std::cos(t), std::sin(t)};
    }
    Point2 apply(const Point2& q) const { return to + rotate(q - from, c, s); }
};

// Part of segment [a, b] inside the closed wedge (apex, d0, d1); false if empty.
bool clip_to_wedge(const Point2& apex, const Point2& d0, const Point2& d1, Point2 a, Point2 b,
                   double tol, Point2& out_a, Point2& out_b)
{
    double lo = 0, hi = 1;
    const auto keep = [&](double fa, double fb) {
        // keep t where fa + t (fb - fa) >= -tol
        if (fa < -tol && fb < -tol)
            return false;
        if (fa < -tol)
            lo = std::max(lo, (-tol - fa) / (fb - fa));
        else if (fb < -tol)
            hi = std::min(hi, (-tol - fa) / (fb - fa));
        return true;
    };
    if (!keep(cross(d0, a - apex), cross(d0, b - apex)))
        return false;
    if (!keep(cross(a - apex, d1), cross(b - apex, d1)))
        return false;
    if (lo > hi)
        return false;
    out_a = a + (b - a) * lo;
    out_b = a + (b - a) * hi;
    return true;
}

Point2 nearest_on_segment(const Point2& p, const Point2& a, const Point2& b)
{
    const Point2 ab = b - a;
    const double l2 = dot(ab, ab);
    if (l2 <= 0)
        return a;
    return a + ab * std::clamp(dot(p - a, ab) / l2, 0.0, 1.0);
}

Point3 nearest_on_segment(const Point3& p, const Point3& a, const Point3& b, double* u = nullptr)
{
    const Vec3 ab = b - a;
    const double l2 = dot(ab, ab);
    const double t = l2 > 0 ? std::clamp(dot(p - a, ab) / l2, 0.0, 1.0) : 0.0;
    if (u)
        *u = t;
    return a + ab * t;
}

Point3 nearest_on_triangle(const Point3& p, const Triangle& t)
{
    const Vec3 n = cross(t[1] - t[0], t[2] - t[0]);
    const Point3 q = p - n * (dot(p - t[0], n) / dot(n, n));
    bool inside = true;
    for (int k = 0; k < 3; ++k)
        if (dot(cross(t[(k + 1) % 3] - t[k], q - t[k]), n) < 0)
            inside = false;
    if (inside)
        return q;
    Point3 best = nearest_on_segment(p, t[0], t[1]);
    for (int k = 1; k < 3; ++k) {
        const Point3 c = nearest_on_segment(p, t[k], t[(k + 1) % 3]);
        if (distance(c, p) < distance(best, p))
            best = c;
    }
    return best;
}

// Does the extended cone k of `apex` on face `origin` reach a representative of
// another face? Faces are unfolded into the origin frame breadth-first and each
// is visited at most once.
bool extended_cone_reaches(const Sketch& sketch, const std::vector<std::vector<Point2>>& rep_points,
                           PatchId origin, const ConeFan& fan, std::uint32_t k, double tol)
{
    const Point2 d0 = fan.ray(k), d1 = fan.ray(k + 1);
    std::vector<char> seen(sketch.faces.size(), 0);
    seen[origin] = 1;
    struct Item {
        PatchId face;
        std::vector<Point2> poly;  // unfolded into the origin frame
    };
    std::deque<Item> queue;
    queue.push_back({origin, sketch.faces[origin].polygon});

    while (!queue.empty()) {
        Item cur = std::move(queue.front());
        queue.pop_front();
        const SketchFace& cf = sketch.faces[cur.face];
        const std::size_t m = cur.poly.size();
        for (std::size_t e = 0; e < m; ++e) {
            const std::int32_t nb = cf.edge_neighbor[e];
            if (nb < 0 || seen[nb])
                continue;
            Point2 ca, cb;
            if (!clip_to_wedge(fan.apex, d0, d1, cur.poly[e], cur.poly[(e + 1) % m], tol, ca, cb))
                continue;
            const SketchFace& nf = sketch.faces[nb];
            seen[nb] = 1;
            const Point2 a_local = nf.frame.to_local(cf.polygon3d[e]);
            const Point2 b_local = nf.frame.to_local(cf.polygon3d[(e + 1) % m]);
            const Rigid2 map = Rigid2::matching(a_local, b_local, cur.poly[e], cur.poly[(e + 1) % m]);
            for (const auto& q : rep_points[nb]) {
                const Point2 u = map.apply(q);
                if (distance(u, fan.apex) > tol && fan.cone_of(u) == k)
                    return true;
            }
            Item next{static_cast<PatchId>(nb), {}};
            next.poly.reserve(nf.polygon.size());
            for (const auto& q : nf.polygon)
                next.poly.push_back(map.apply(q));
            queue.push_back(std::move(next));
        }
    }
    return false;
}

// Faces are linked when they share a Steiner point. While the faces holding
// representatives fall into several groups, add relay Steiner points at the
// midpoints of the shared sketch edges along a shortest face chain joining
// the first group to another one.
void connect_components(const Sketch& sketch, const RepresentativeAssignment& a, double tol,
                        std::vector<SteinerPoint>& out,
                        std::map<std::pair<PatchId, PatchId>, std::vector<std::size_t>>& by_pair)
{
    const std::size_t nf = sketch.faces.size();
    std::vector<std::size_t> parent(nf);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    const auto add_relay = [&](PatchId i, std::size_t e) {
        const SketchFace& f = sketch.faces[i];
        const auto j = static_cast<PatchId>(f.edge_neighbor[e]);
        const Point3 x = (f.polygon3d[e] + f.polygon3d[(e + 1) % f.polygon.size()]) * 0.5;
        auto& bucket = by_pair[{std::min(i, j), std::max(i, j)}];
        for (auto s : bucket)
            if (distance(out[s].position, x) <= tol)
                return;
        SteinerPoint s;
        s.faces = {i, j};
        s.position = x;
        s.local = {f.frame.to_local(x), sketch.faces[j].frame.to_local(x)};
        bucket.push_back(out.size());
        out.push_back(s);
    };

    for (;;) {
        for (std::size_t i = 0; i < nf; ++i)
            parent[i] = i;
        for (const auto& s : out)
            parent[find(s.faces[0])] = find(s.faces[1]);
        std::vector<char> has_rep(nf, 0);
        std::size_t first = nf;
        for (std::size_t i = 0; i < nf; ++i)
            if (!a.reps_of_patch[i].empty()) {
                has_rep[find(i)] = 1;
                first = std::min(first, i);
            }
        if (first == nf)
            return;
        const std::size_t root = find(first);

        // Multi-source BFS from the root group.
        std::vector<std::pair<PatchId, std::size_t>> from(nf, {kNone, 0});  // (previous face, edge)
        std::vector<char> seen(nf, 0);
        std::deque<PatchId> queue;
        for (PatchId i = 0; i < nf; ++i)
            if (find(i) == root) {
                seen[i] = 1;
                queue.push_back(i);
            }
        PatchId goal = kNone;
        while (!queue.empty() && goal == kNone) {
            const PatchId i = queue.front();
            queue.pop_front();
            const SketchFace& f = sketch.faces[i];
            for (std::size_t e = 0; e < f.polygon.size(); ++e) {
                const std::int32_t j = f.edge_neighbor[e];
                if (j < 0 || seen[j])
                    continue;
                seen[j] = 1;
                from[j] = {i, e};
                if (has_rep[find(j)]) {
                    goal = static_cast<PatchId>(j);
                    break;
                }
                queue.push_back(static_cast<PatchId>(j));
            }
        }
        if (goal == kNone)
            return;
        for (PatchId j = goal; from[j].first != kNone && find(j) != root; j = from[j].first)
            add_relay(from[j].first, from[j].second);
    }
}

} // namespace

std::uint32_t cone_count(double eps)
{
    if (!(eps > 0))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(kTwoPi / eps - 1e-9)));
}

ConeFan ConeFan::around(const Point2& apex, double eps)
{
    ConeFan f;
    f.apex = apex;
    f.count = cone_count(eps);
    f.angle = kTwoPi / f.count;
    return f;
}

std::uint32_t ConeFan::cone_of(const Point2& q) const
{
    const double a = angle_of(q - apex);
    const double k = std::ceil(a / angle) - 1;
    return static_cast<std::uint32_t>(std::clamp(k, 0.0, double(count - 1)));
}

Point2 ConeFan::bisector(std::uint32_t k) const
{
    const double a = (k + 0.5) * angle;
    return {std::cos(a), std::sin(a)};
}

Point2 ConeFan::ray(std::uint32_t k) const
{
    const double a = k * angle;
    return {std::cos(a), std::sin(a)};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> build_theta_graph(const std::vector<Point2>& nodes,
                                                                       double eps)
{
    const auto n = static_cast<std::uint32_t>(nodes.size());
    const std::uint32_t cones = cone_count(eps);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> best(cones);
    std::vector<double> best_proj(cones);
    for (std::uint32_t i = 0; i < n; ++i) {
        const ConeFan fan = ConeFan::around(nodes[i], eps);
        std::fill(best.begin(), best.end(), kNone);
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i || nodes[j] == nodes[i])
                continue;
            const std::uint32_t k = fan.cone_of(nodes[j]);
            const double proj = dot(nodes[j] - nodes[i], fan.bisector(k));
            if (best[k] == kNone || proj < best_proj[k]) {
                best[k] = j;
                best_proj[k] = proj;
            }
        }
        for (auto j : best)
            if (j != kNone)
                edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<SteinerPoint> place_steiner_points(const Sketch& sketch, const RepresentativeAssignment& a,
                                               double eps)
{
    const std::size_t nf = sketch.faces.size();
    std::vector<std::vector<Point2>> rep_points(nf);
    for (std::size_t i = 0; i < nf; ++i)
        for (auto r : a.reps_of_patch.at(i))
            rep_points[i].push_back(a.rep_point[r]);

    double scale = 0;
    for (const auto& f : sketch.faces)
        for (const auto& q : f.polygon)
            scale = std::max(scale, norm(q));
    const double tol = Tolerance{}.at(scale);

    std::vector<SteinerPoint> out;
    std::map<std::pair<PatchId, PatchId>, std::vector<std::size_t>> by_pair;

    for (PatchId i = 0; i < nf; ++i) {
        const SketchFace& face = sketch.faces[i];
        const std::size_t m = face.polygon.size();
        for (const auto& p : rep_points[i]) {
            const ConeFan fan = ConeFan::around(p, eps);
            std::vector<char> occupied(fan.count, 0);
            for (const auto& q : rep_points[i])
                if (distance(q, p) > tol)
                    occupied[fan.cone_of(q)] = 1;

            for (std::uint32_t k = 0; k < fan.count; ++k) {
                if (occupied[k] || !extended_cone_reaches(sketch, rep_points, i, fan, k, tol))
                    continue;
                // Nearest boundary point of the face inside the cone.
                const Point2 d0 = fan.ray(k), d1 = fan.ray(k + 1);
                double best = INFINITY;
                Point2 best_q{};
                std::int32_t best_nb = -1;
                for (std::size_t e = 0; e < m; ++e) {
                    if (face.edge_neighbor[e] < 0)
                        continue;
                    Point2 ca, cb;
                    if (!clip_to_wedge(p, d0, d1, face.polygon[e], face.polygon[(e + 1) % m], tol, ca, cb))
                        continue;
                    const Point2 q = nearest_on_segment(p, ca, cb);
                    if (distance(q, p) < best) {
                        best = distance(q, p);
                        best_q = q;
                        best_nb = face.edge_neighbor[e];
                    }
                }
                if (best_nb < 0)
                    continue;

                const PatchId j = static_cast<PatchId>(best_nb);
                const Point3 x = face.frame.to_world(best_q);
                auto& bucket = by_pair[{std::min(i, j), std::max(i, j)}];
                const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t s) {
                    return distance(out[s].position, x) <= tol;
                });
                if (dup)
                    continue;
                SteinerPoint s;
                s.faces = {i, j};
                s.position = x;
                s.local = {best_q, sketch.faces[j].frame.to_local(x)};
                bucket.push_back(out.size());
                out.push_back(s);
            }
        }
    }
    connect_components(sketch, a, tol, out, by_pair);
    return out;
}

LiftedPoint lift_to_surface(const TriangulatedPolytope& p, const Point3& x, const Vec3& direction)
{
    const Vec3 d = normalized(direction);
    double t_enter = -INFINITY, t_exit = INFINITY;
    FaceId hit = kNone;
    for (FaceId f = 0; f < p.face_count(); ++f) {
        const Vec3& n = p.face_normal(f);
        const double b = dot(n, p.vertex(p.face(f)[0]));
        const double nd = dot(n, d), gap = b - dot(n, x);
        if (std::abs(nd) < 1e-15) {
            if (gap < 0)
                t_exit = -INFINITY;
            continue;
        }
        const double t = gap / nd;
        if (nd < 0) {
            if (t > t_enter) {
                t_enter = t;
                hit = f;
            }
        } else {
            t_exit = std::min(t_exit, t);
        }
    }

    Point3 on_surface;
    if (hit != kNone && t_enter <= t_exit + p.snap()) {
        on_surface = x + d * t_enter;
    } else {
        double best = INFINITY;
        for (FaceId f = 0; f < p.face_count(); ++f) {
            const Point3 c = nearest_on_triangle(x, p.face_points(f));
            if (distance(c, x) < best) {
                best = distance(c, x);
                on_surface = c;
                hit = f;
            }
        }
    }

    LiftedPoint out;
    double best = INFINITY;
    const auto& tri = p.face(hit);
    for (int k = 0; k < 3; ++k) {
        const VertexId u = tri[k], w = tri[(k + 1) % 3];
        double t = 0;
        const Point3 c = nearest_on_segment(on_surface, p.vertex(u), p.vertex(w), &t);
        if (distance(c, on_surface) < best) {
            best = distance(c, on_surface);
            out.point = c;
            out.edge = p.find_edge(u, w);
            const double snap = p.tolerance().at(distance(p.vertex(u), p.vertex(w)));
            if (distance(c, p.vertex(u)) <= snap) {
                out.point = p.vertex(u);
                out.marked = {u, kNone};
            } else if (distance(c, p.vertex(w)) <= snap) {
                out.point = p.vertex(w);
                out.marked = {w, kNone};
            } else {
                out.marked = {std::min(u, w), std::max(u, w)};
            }
        }
    }
    return out;
}

bool SpannerNode::on_face(PatchId f) const
{
    return std::find(faces.begin(), faces.end(), f) != faces.end();
}

const Point2& SpannerNode::local_on(PatchId f) const
{
    return local[std::find(faces.begin(), faces.end(), f) - faces.begin()];
}

bool SpannerGraph::connected() const
{
    if (nodes.empty())
        return true;
    std::vector<char> seen(nodes.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const auto& [v, e] : adjacency[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == nodes.size();
}

const SpannerEdge* SpannerGraph::find_edge(NodeId u, NodeId v) const
{
    for (const auto& [w, e] : adjacency[u])
        if (w == v)
            return &edges[e];
    return nullptr;
}

std::string SpannerGraph::dump() const
{
    std::string s;
    char buf[256];
    std::snprintf(buf, sizeof buf, "# nodes %zu edges %zu\n", nodes.size(), edges.size());
    s += buf;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        std::snprintf(buf, sizeof buf, "node %u %s %d %.17g %.17g %.17g %.17g %.17g %.17g\n", i,
                      n.kind == SpannerNode::Kind::Rep ? "rep" : "steiner",
                      n.kind == SpannerNode::Kind::Rep ? int(n.vertex) : -1, n.sketch_point.x,
                      n.sketch_point.y, n.sketch_point.z, n.lifted.x, n.lifted.y, n.lifted.z);
        s += buf;
    }
    for (const auto& e : edges) {
        std::snprintf(buf, sizeof buf, "edge %u %u %.17g %u\n", e.u, e.v, e.weight, e.face);
        s += buf;
    }
    return s;
}

SpannerGraph assemble_global_spanner(const TriangulatedPolytope& p, const Sketch& sketch,
                                     const RepresentativeAssignment& a,
                                     const std::vector<SteinerPoint>& steiner, double eps)
{
    SpannerGraph g;
    const std::size_t nf = sketch.faces.size();
    g.face_nodes.assign(nf, {});
    g.node_of_vertex.assign(p.vertex_count(), kNone);

    double scale = 0;
    for (const auto& f : sketch.faces)
        for (const auto& q : f.polygon3d)
            scale = std::max(scale, distance(q, p.centroid()));
    const double tol = Tolerance{}.at(scale);

    for (PatchId i = 0; i < nf; ++i) {
        for (auto r : a.reps_of_patch.at(i)) {
            SpannerNode n;
            n.kind = SpannerNode::Kind::Rep;
            n.vertex = r;
            n.faces = {i};
            n.local = {a.rep_point[r]};
            n.sketch_point = sketch.faces[i].frame.to_world(a.rep_point[r]);
            n.lifted = p.vertex(r);
            n.marked = {r, kNone};
            g.node_of_vertex[r] = static_cast<NodeId>(g.nodes.size());
            g.face_nodes[i].push_back(static_cast<NodeId>(g.nodes.size()));
            g.nodes.push_back(n);
        }
    }
    for (const auto& s : steiner) {
        NodeId same = kNone;
        for (auto f : s.faces)
            for (auto id : g.face_nodes[f])
                if (same == kNone && distance(g.nodes[id].sketch_point, s.position) <= tol)
                    same = id;
        if (same != kNone) {
            for (int k = 0; k < 2; ++k)
                if (!g.nodes[same].on_face(s.faces[k])) {
                    g.nodes[same].faces.push_back(s.faces[k]);
                    g.nodes[same].local.push_back(s.local[k]);
                    g.face_nodes[s.faces[k]].push_back(same);
                }
            continue;
        }
        SpannerNode n;
        n.kind = SpannerNode::Kind::Steiner;
        n.faces = {s.faces[0], s.faces[1]};
        n.local = {s.local[0], s.local[1]};
        n.sketch_point = s.position;
        const LiftedPoint lp = lift_to_surface(p, s.position, -sketch.faces[s.faces[0]].frame.n);
        n.lifted = lp.point;
        n.mesh_edge = lp.edge;
        n.marked = lp.marked;
        const auto id = static_cast<NodeId>(g.nodes.size());
        g.face_nodes[s.faces[0]].push_back(id);
        g.face_nodes[s.faces[1]].push_back(id);
        g.nodes.push_back(n);
        ++g.steiner_count;
    }

    g.adjacency.assign(g.nodes.size(), {});
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> seen;
    for (PatchId i = 0; i < nf; ++i) {
        const auto& ids = g.face_nodes[i];
        std::vector<Point2> pts;
        pts.reserve(ids.size());
        for (auto id : ids)
            pts.push_back(g.nodes[id].local_on(i));
        for (const auto& [x, y] : build_theta_graph(pts, eps)) {
            const NodeId u = std::min(ids[x], ids[y]), v = std::max(ids[x], ids[y]);
            const double w = distance(pts[x], pts[y]);
            if (!(w > 0))
                continue;
            if (auto it = seen.find({u, v}); it != seen.end()) {
                if (w < g.edges[it->second].weight)
                    g.edges[it->second] = {u, v, w, i};
                continue;
            }
            seen.emplace(std::make_pair(u, v), static_cast<std::uint32_t>(g.edges.size()));
            g.adjacency[u].emplace_back(v, static_cast<std::uint32_t>(g.edges.size()));
            g.adjacency[v].emplace_back(u, static_cast<std::uint32_t>(g.edges.size()));
            g.edges.push_back({u, v, w, i});
        }
    }
    if (!g.connected())
        throw Error(ErrorCode::DisconnectedSpanner,
                    "spanner over representatives is disconnected; try a smaller epsilon");
    return g;
}

} // namespace polyroute
