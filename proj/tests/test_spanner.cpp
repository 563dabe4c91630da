#include <doctest.h>

#include <deque>
#include <numbers>
#include <random>

#include "polyroute/pipeline.hpp"
#include "polyroute/shapes.hpp"
#include "polyroute/spanner.hpp"
#include "support.hpp"

using namespace polyroute;
using namespace testing_support;

namespace {

bool has_edge(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges, std::uint32_t a, std::uint32_t b)
{
    return std::find(edges.begin(), edges.end(), std::make_pair(std::min(a, b), std::max(a, b))) != edges.end();
}

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b)
{
    const Vec3 ab = b - a;
    const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    return distance(p, a + ab * t);
}

} // namespace

TEST_CASE("cone fan basics")
{
    CHECK(cone_count(1.0) == 7);
    CHECK(cone_count(2 * std::numbers::pi / 8) == 8);
    const auto fan = ConeFan::around({0, 0}, 2 * std::numbers::pi / 8);
    CHECK(fan.cone_of({1, 0}) == 0);
    CHECK(fan.cone_of({1, 0.1}) == 0);
    CHECK(fan.cone_of({1, 1}) == 0);  // on the shared ray: lower cone
    CHECK(fan.cone_of({0.5, 1}) == 1);
    CHECK(fan.cone_of({1, -0.1}) == 7);
    for (std::uint32_t k = 0; k < fan.count; ++k) {
        const Point2 b = fan.bisector(k);
        CHECK(fan.cone_of(b) == k);
        CHECK(norm(b) == doctest::Approx(1.0));
    }
}

TEST_CASE("two nodes share one edge")
{
    const auto e = build_theta_graph({{0, 0}, {1, 0.3}}, 0.5);
    REQUIRE(e.size() == 1);
    CHECK(e[0] == std::make_pair(0u, 1u));
}

TEST_CASE("collinear nodes connect to their neighbours only")
{
    const auto e = build_theta_graph({{0, 0}, {1, 0}, {2, 0}}, 0.3);
    CHECK(has_edge(e, 0, 1));
    CHECK(has_edge(e, 1, 2));
    CHECK_FALSE(has_edge(e, 0, 2));
}

TEST_CASE("theta graph stretch on random points")
{
    const double eps = 0.4;
    const double bound = 1 / (std::cos(eps) - std::sin(eps));
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<Point2> pts;
        for (int i = 0; i < 50; ++i)
            pts.push_back({u(rng), u(rng)});
        auto d = empty_matrix(pts.size());
        for (auto [a, b] : build_theta_graph(pts, eps))
            d[a][b] = d[b][a] = distance(pts[a], pts[b]);
        d = floyd_warshall(std::move(d));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                CHECK(d[i][j] <= distance(pts[i], pts[j]) * bound * (1 + 1e-12));
    }
}

TEST_CASE("single patch needs no Steiner points")
{
    const auto pre = preprocess(make_sphere_hull(60, 1), {.eps = 0.3, .delta = std::numbers::pi});
    CHECK(pre.patches.patches.size() == 1);
    CHECK(pre.spanner.steiner_count == 0);
    for (const auto& n : pre.spanner.nodes)
        CHECK(n.kind == SpannerNode::Kind::Rep);
    CHECK(pre.spanner.connected());
}

TEST_CASE("tetrahedron spanner")
{
    const auto p = make_tetrahedron();
    const auto pre = preprocess(p, {.eps = 0.5});
    CHECK(pre.patches.patches.size() == 4);
    CHECK(pre.assignment.reps.size() == 4);
    const auto& g = pre.spanner;
    CHECK(g.connected());

    // The sketch is the tetrahedron itself, so every boundary point found by
    // the cone trace is a corner, i.e. a representative: they merge.
    const auto placed = place_steiner_points(pre.sketch, pre.assignment, 0.5);
    CHECK(!placed.empty());
    for (const auto& sp : placed) {
        bool at_rep = false;
        for (auto r : pre.assignment.reps)
            at_rep = at_rep || distance(sp.position, p.vertex(r)) < 1e-12;
        CHECK(at_rep);
    }
    CHECK(g.steiner_count == 0);
    CHECK(g.node_count() == 4);

    // Reps of different patches are joined through nodes on the shared
    // boundary of two sketch faces.
    for (auto r : pre.assignment.reps)
        for (auto q : pre.assignment.reps) {
            if (pre.assignment.patch_of[r] == pre.assignment.patch_of[q])
                continue;
            const NodeId src = g.node_of_vertex[r], dst = g.node_of_vertex[q];
            std::vector<bool> seen(g.node_count(), false);
            std::deque<NodeId> queue{src};
            seen[src] = true;
            while (!queue.empty()) {
                const NodeId x = queue.front();
                queue.pop_front();
                for (auto [y, e] : g.adjacency[x]) {
                    if (seen[y] || (y != dst && g.nodes[y].faces.size() < 2))
                        continue;
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
            CHECK(seen[dst]);
        }
}

TEST_CASE("Steiner points sit on shared sketch boundaries")
{
    for (double eps : {0.2, 0.4}) {
        const auto p = make_sphere_hull(150, 2);
        const auto pre = preprocess(p, {.eps = eps});
        const double tol = 1e-9 * p.diameter();
        for (const auto& sp : place_steiner_points(pre.sketch, pre.assignment, eps)) {
            REQUIRE(sp.faces[0] != kNone);
            REQUIRE(sp.faces[1] != kNone);
            CHECK(sp.faces[0] != sp.faces[1]);
            for (int k = 0; k < 2; ++k) {
                const auto& face = pre.sketch.faces[sp.faces[k]];
                CHECK(std::abs(face.plane.signed_distance(sp.position)) < tol);
                CHECK(distance(face.frame.to_world(sp.local[k]), sp.position) < tol);
            }
            CHECK(pre.sketch.contains(sp.position, tol));
        }
    }
}

TEST_CASE("spanner nodes on random hulls")
{
    for (double eps : {0.2, 0.4}) {
        const auto p = make_sphere_hull(200, 5);
        const auto pre = preprocess(p, {.eps = eps});
        const auto& g = pre.spanner;
        CHECK(g.connected());
        std::size_t steiner = 0;
        for (NodeId id = 0; id < g.node_count(); ++id) {
            const auto& n = g.nodes[id];
            REQUIRE(n.faces.size() == n.local.size());
            for (std::size_t k = 0; k < n.faces.size(); ++k) {
                const auto& face = pre.sketch.faces[n.faces[k]];
                CHECK(distance(face.frame.to_world(n.local[k]), n.sketch_point) < 1e-9 * p.diameter());
                CHECK(std::count(g.face_nodes[n.faces[k]].begin(), g.face_nodes[n.faces[k]].end(), id) == 1);
            }
            if (n.kind == SpannerNode::Kind::Rep) {
                CHECK(g.node_of_vertex[n.vertex] == id);
                CHECK(n.faces.front() == pre.assignment.patch_of[n.vertex]);
                continue;
            }
            ++steiner;
            // Steiner nodes sit on at least two faces; more only where
            // coincident points were merged at a sketch corner.
            CHECK(n.faces.size() >= 2);
            // The lift lands on its mesh edge and marks its endpoints.
            REQUIRE(n.mesh_edge != kNone);
            const Edge& e = p.edges()[n.mesh_edge];
            CHECK(point_segment_distance(n.lifted, p.vertex(e.a), p.vertex(e.b)) < 1e-9);
            if (n.marked[1] == kNone) {
                CHECK((n.marked[0] == e.a || n.marked[0] == e.b));
                CHECK(distance(n.lifted, p.vertex(n.marked[0])) < 1e-9);
            } else {
                CHECK(std::min(n.marked[0], n.marked[1]) == e.a);
                CHECK(std::max(n.marked[0], n.marked[1]) == e.b);
            }
        }
        CHECK(steiner == g.steiner_count);
        for (const auto& e : g.edges) {
            CHECK(g.nodes[e.u].on_face(e.face));
            CHECK(g.nodes[e.v].on_face(e.face));
            CHECK(e.weight == doctest::Approx(distance(g.nodes[e.u].local_on(e.face), g.nodes[e.v].local_on(e.face))));
            CHECK(g.find_edge(e.u, e.v) == &e);
        }
    }
}

TEST_CASE("per-face stretch of the spanner")
{
    for (double eps : {0.2, 0.4}) {
        const double bound = 1 / (std::cos(eps) - std::sin(eps));
        const auto p = make_sphere_hull(150, 7);
        const auto pre = preprocess(p, {.eps = eps});
        const auto& g = pre.spanner;
        for (PatchId f = 0; f < g.face_nodes.size(); ++f) {
            const auto& nodes = g.face_nodes[f];
            auto d = empty_matrix(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (std::size_t j = 0; j < nodes.size(); ++j)
                    if (const SpannerEdge* e = g.find_edge(nodes[i], nodes[j]))
                        d[i][j] = e->weight;
            d = floyd_warshall(std::move(d));
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                    const double euclid = distance(g.nodes[nodes[i]].local_on(f), g.nodes[nodes[j]].local_on(f));
                    CHECK(d[i][j] <= euclid * bound + 1e-9);
                }
        }
    }
}

TEST_CASE("lifting a point onto a cube edge")
{
    const auto p = make_cube();
    const auto l = lift_to_surface(p, {0.5, 0.02, 1.3}, {0, 0, -1});
    CHECK(distance(l.point, Point3{0.5, 0, 1}) < 1e-12);
    REQUIRE(l.edge != kNone);
    CHECK(l.marked[1] != kNone);
    const auto corner = lift_to_surface(p, {1e-13, 1e-13, 1.5}, {0, 0, -1});
    CHECK(corner.marked[1] == kNone);
    CHECK(distance(p.vertex(corner.marked[0]), Point3{0, 0, 1}) < 1e-12);
}
