#include <doctest.h>

#include <numbers>
#include <random>

#include "polyroute/oracle.hpp"
#include "polyroute/pipeline.hpp"
#include "polyroute/router.hpp"
#include "polyroute/shapes.hpp"

using namespace polyroute;

namespace {

ErrorCode route_error(VertexId s, VertexId t, const TableSet& ts)
{
    try {
        route(s, t, ts);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

// A five-vertex polytope: a low ridge p2-p3 between p1 and p4 on top, one
// apex below. Faces (p1,p2,p3) and (p2,p3,p4) meet along p2p3.
struct Kite {
    static constexpr VertexId p1 = 0, p2 = 1, p3 = 2, p4 = 3, apex = 4;
    TableSet ts;

    Kite()
    {
        ts.mesh = TriangulatedPolytope::build(
            {{0, -1, 0}, {-1, 0, 0.1}, {1, 0, 0.1}, {0, 1, 0}, {0, 0, -1}},
            {{p1, p3, p2}, {p2, p3, p4}, {apex, p2, p1}, {apex, p4, p2}, {apex, p3, p4}, {apex, p1, p3}});
        ts.tables.resize(5);
        for (VertexId v = 0; v < 5; ++v)
            ts.tables[v].vertex = v;
    }

    // Header for a leg from p1 along the vertical plane through p1 and `toward`.
    PacketHeader header(const Point3& toward) const
    {
        PacketHeader h;
        const Point3 a = ts.mesh.vertex(p1);
        h.plane = Plane::from_directions(a, toward - a, {0, 0, 1});
        h.pseudo = PseudoTarget{PseudoTarget::Kind::Vertex, p4, {p4, kNone}, toward};
        h.dest.vertex = p4;
        h.guide = make_guide(ts.mesh, h.plane, toward);
        return h;
    }
};

} // namespace

TEST_CASE("tetrahedron routes are single edges")
{
    const auto pre = preprocess(make_tetrahedron(), {.eps = 0.5});
    for (VertexId s = 0; s < 4; ++s)
        for (VertexId t = 0; t < 4; ++t) {
            if (s == t)
                continue;
            const auto tr = route(s, t, pre.tables);
            CHECK(tr.vertices == std::vector<VertexId>{s, t});
            CHECK(tr.length == doctest::Approx(2 * std::sqrt(2.0)));
        }
}

TEST_CASE("octahedron antipodes take two hops")
{
    const auto p = make_octahedron();
    const auto pre = preprocess(p, {.eps = 0.5});
    for (auto [s, t] : {std::pair<VertexId, VertexId>{0, 1}, {1, 0}, {2, 3}, {4, 5}}) {
        const auto tr = route(s, t, pre.tables);
        CHECK(tr.hops.size() == 2);
        CHECK(tr.length == doctest::Approx(2 * std::sqrt(2.0)));
        CHECK(tr.length == doctest::Approx(edge_dijkstra(p, s, t)));
    }
}

TEST_CASE("routing errors")
{
    const auto pre = preprocess(make_cube(), {.eps = 0.5});
    CHECK(route_error(3, 3, pre.tables) == ErrorCode::TrivialRoute);
    CHECK(route_error(0, 99, pre.tables) == ErrorCode::UnknownVertex);
    CHECK(route_error(99, 0, pre.tables) == ErrorCode::UnknownVertex);
}

TEST_CASE("next hop is the destination when it is a neighbour")
{
    const Kite k;
    auto h = k.header(k.ts.mesh.vertex(Kite::p4));
    h.dest.vertex = Kite::p2;
    const auto r = step(Kite::p1, h, k.ts);
    CHECK(r.next == Kite::p2);
    CHECK(r.kind == HopCase::VertexHit);
}

TEST_CASE("plane continuing through p2p4 goes to p2")
{
    const Kite k;
    const auto& m = k.ts.mesh;
    const Point3 q = (m.vertex(Kite::p2) + m.vertex(Kite::p4)) * 0.5;
    const auto h = k.header(q);
    REQUIRE(h.guide.valid);
    const auto r = step(Kite::p1, h, k.ts);
    CHECK(r.next == Kite::p2);
    CHECK(r.kind == HopCase::General);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("plane continuing through p3p4 goes to p3")
{
    const Kite k;
    const auto& m = k.ts.mesh;
    const Point3 q = (m.vertex(Kite::p3) + m.vertex(Kite::p4)) * 0.5;
    const auto r = step(Kite::p1, k.header(q), k.ts);
    CHECK(r.next == Kite::p3);
    CHECK(r.kind == HopCase::General);
}

TEST_CASE("plane through p4 with equal detours goes to p3")
{
    const Kite k;
    const auto& m = k.ts.mesh;
    const double via2 = distance(m.vertex(Kite::p1), m.vertex(Kite::p2)) + distance(m.vertex(Kite::p2), m.vertex(Kite::p4));
    const double via3 = distance(m.vertex(Kite::p1), m.vertex(Kite::p3)) + distance(m.vertex(Kite::p3), m.vertex(Kite::p4));
    REQUIRE(via2 == via3);
    const auto r = step(Kite::p1, k.header(m.vertex(Kite::p4)), k.ts);
    CHECK(r.next == Kite::p3);
    CHECK(r.kind == HopCase::TieBreak);
}

TEST_CASE("packet set-up")
{
    const auto p = make_sphere_hull(150, 2);
    const auto pre = preprocess(p, {.eps = 0.3});
    const auto& a = pre.assignment;
    for (VertexId s = 0; s < p.vertex_count(); ++s) {
        if (!a.is_rep(s)) {
            const VertexId t = s == 0 ? 1 : 0;
            const auto h = make_packet(s, t, pre.tables);
            CHECK(h.pseudo.kind == PseudoTarget::Kind::Vertex);
            CHECK(h.pseudo.id == a.rep_of[s]);
            CHECK(h.entry == EntryKind::ToMyRep);
            continue;
        }
        for (auto t : a.members[s]) {
            const auto h = make_packet(s, t, pre.tables);
            CHECK(h.pseudo.id == t);
            CHECK(h.entry == EntryKind::RepToMember);
        }
    }
}

TEST_CASE("routes on a random hull are local and terminate")
{
    const auto p = make_sphere_hull(200, 1);
    for (double eps : {0.2, 0.4}) {
        const auto pre = preprocess(p, {.eps = eps});
        const double sin_m = std::sin(pre.tables.meta.theta_m);
        const double mu = oracle_slack(p, 16, {0, 50, 100, 150});
        std::size_t intra_legs = 0;
        for (auto [s, t] : random_pairs(p.vertex_count(), 1000, 11)) {
            const auto tr = route(s, t, pre.tables);
            REQUIRE(tr.vertices.front() == s);
            REQUIRE(tr.vertices.back() == t);
            CHECK(tr.hops.size() < 4 * p.vertex_count());
            CHECK(tr.hops.size() + 1 == tr.vertices.size());
            CHECK(tr.hops.front() == HopCase::FirstHop);
            double len = 0;
            for (std::size_t i = 0; i + 1 < tr.vertices.size(); ++i) {
                CHECK(p.adjacent(tr.vertices[i], tr.vertices[i + 1]));
                len += distance(p.vertex(tr.vertices[i]), p.vertex(tr.vertices[i + 1]));
            }
            CHECK(len == doctest::Approx(tr.length));

            for (const auto& leg : tr.legs) {
                if (leg.kind == EntryKind::Global || leg.kind == EntryKind::MarkedRelay || leg.hop_count == 0)
                    continue;
                ++intra_legs;
                // Every vertex visited on the leg touches a face the plane cuts.
                const double snap = p.snap();
                for (std::size_t i = leg.first_hop; i <= leg.first_hop + leg.hop_count; ++i) {
                    const VertexId v = tr.vertices[i];
                    bool cut = false;
                    for (auto f : p.vertex_fan(v)) {
                        double lo = 1e300, hi = -1e300;
                        for (auto w : p.face(f)) {
                            lo = std::min(lo, leg.plane.signed_distance(p.vertex(w)));
                            hi = std::max(hi, leg.plane.signed_distance(p.vertex(w)));
                        }
                        cut = cut || (lo <= snap && hi >= -snap);
                    }
                    CHECK(cut);
                }
                // Zig-zag: the leg is within 1/sin(theta_m) of the surface distance.
                const VertexId end = tr.vertices[leg.first_hop + leg.hop_count];
                const double geo = subdivided_geodesic(p, leg.from, end, 16);
                CHECK(leg.length <= geo * (1 + mu) / sin_m + 1e-9);
            }
        }
        CHECK(intra_legs > 0);
    }
}

TEST_CASE("trace output")
{
    const auto pre = preprocess(make_octahedron(), {.eps = 0.5});
    const auto tr = route(0, 1, pre.tables);
    const std::string text = format_trace(tr);
    CHECK(text.rfind("hop_index,vertex_id,case,edge_length\n", 0) == 0);
    CHECK(text.find("1,") != std::string::npos);
    CHECK(text.find("summary,0,1,2,") != std::string::npos);
}

TEST_CASE("two sides of a triangle against the angle between them")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1, 1);
    int tested = 0;
    while (tested < 10000) {
        const Triangle t{Point3{u(rng), u(rng), u(rng)}, Point3{u(rng), u(rng), u(rng)},
                         Point3{u(rng), u(rng), u(rng)}};
        if (triangle_area(t) < 1e-6)
            continue;
        ++tested;
        const double B = corner_angle(t, 1);
        const double ab = distance(t[0], t[1]), bc = distance(t[1], t[2]), ac = distance(t[0], t[2]);
        CHECK(ab + bc <= ac / std::sin(B / 2) + 1e-9);
    }
}

TEST_CASE("header size grows with log n and keeps the plane apart")
{
    const auto small = preprocess(make_sphere_hull(50, 1), {.eps = 0.4});
    const auto large = preprocess(make_sphere_hull(400, 1), {.eps = 0.4});
    const auto hs = header_size(small.tables);
    const auto hl = header_size(large.tables);
    CHECK(hs.plane_bits == 576);
    CHECK(hl.plane_bits == 576);
    CHECK(hs.label_bits < hl.label_bits);
    // Each of the identifier fields is at most log2 of its range plus one.
    CHECK(hl.label_bits <= 14 * (std::log2(double(large.tables.meta.node_count)) + 1) + 3);
}
