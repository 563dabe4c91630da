#include "polyroute/router.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

namespace polyroute {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kAngleTol = 1e-9;

double wrap(double a)
{
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

const RoutingEntry& require(const RoutingEntry* e, const char* what)
{
    if (!e)
        throw Error(ErrorCode::Internal, std::string("missing routing entry: ") + what);
    return *e;
}

// Next hop in the spanner phase. Mirrors the landmark scheme's rule: a
// landmark answers directly only for destinations it is home to.
template <class Find>
const RoutingEntry* global_choice(const NodeLabel& dest, NodeId self, bool landmark, Find&& find)
{
    if (!landmark || dest.landmark == self)
        if (const RoutingEntry* e = find(dest.node))
            return e;
    return find(dest.landmark);
}

void apply(PacketHeader& h, const RoutingEntry& e, const TriangulatedPolytope& P)
{
    h.pseudo = e.next;
    h.plane = e.plane;
    h.entry = e.kind;
    h.guide = make_guide(P, e.plane, e.next.point);
}

} // namespace

const char* hop_case_name(HopCase c)
{
    switch (c) {
    case HopCase::FirstHop: return "FirstHop";
    case HopCase::General: return "General";
    case HopCase::VertexHit: return "VertexHit";
    case HopCase::TieBreak: return "TieBreak";
    case HopCase::PseudoSwitch: return "PseudoSwitch";
    }
    return "?";
}

LegGuide make_guide(const TriangulatedPolytope& P, const Plane& plane, const Point3& target)
{
    LegGuide g;
    const Point3 s = plane.anchor();
    const Vec3 chord = target - s;
    const double len = norm(chord);
    if (len <= P.snap())
        return g;
    g.cx = chord / len;
    Vec3 up = plane.dir2() - g.cx * dot(plane.dir2(), g.cx);
    if (norm(up) <= 1e-9 * norm(plane.dir2()))
        up = cross(plane.normal(), g.cx);
    g.cy = normalized(up);

    // Go from the chord midpoint into the polytope, half way to the far side.
    const Point3 mid = (s + target) * 0.5;
    const Vec3 down = -g.cy;
    double depth = INFINITY;
    for (FaceId f = 0; f < P.face_count(); ++f) {
        const Vec3& n = P.face_normal(f);
        const double nd = dot(n, down);
        if (nd > 1e-12)
            depth = std::min(depth, dot(n, P.vertex(P.face(f)[0]) - mid) / nd);
    }
    if (!(depth > 0) || !std::isfinite(depth))
        return g;
    g.center = mid + down * (0.5 * depth);
    const auto angle = [&](const Point3& p) { return std::atan2(dot(p - g.center, g.cy), dot(p - g.center, g.cx)); };
    g.start_angle = angle(s);
    g.target_progress = wrap(g.start_angle - angle(target));
    g.valid = true;
    return g;
}

double LegGuide::progress(const Point3& p) const
{
    return wrap(start_angle - std::atan2(dot(p - center, cy), dot(p - center, cx)));
}

void consult(VertexId at, PacketHeader& h, const TableSet& ts)
{
    const TriangulatedPolytope& P = ts.mesh;
    const VertexId t = h.dest.vertex;
    const std::size_t limit = ts.meta.node_count + 8;
    for (std::size_t round = 0; round < limit; ++round) {
        if (at == t)
            return;
        const RoutingTable& tab = ts.tables[at];
        const RoutingEntry* e = nullptr;

        const RelayTable* relay = nullptr;
        if (h.pseudo.kind == PseudoTarget::Kind::Steiner && h.pseudo.contains(at))
            relay = tab.relay(h.pseudo.id);

        if (relay) {
            e = global_choice(h.dest, relay->steiner, relay->landmark,
                              [&](NodeId d) { return relay->find(d); });
            require(e, "relay");
        } else if (tab.node == kNone) {
            e = &require(tab.find(EntryKind::ToMyRep, tab.label.rep), "to representative");
        } else if (h.dest.rep == at) {
            e = &require(tab.find(EntryKind::RepToMember, t), "to member");
        } else if (h.dest.patch == tab.label.patch) {
            e = &require(tab.find(EntryKind::RepToRepSamePatch, h.dest.rep), "same-patch representative");
        } else {
            const auto find = [&](NodeId d) { return tab.find(EntryKind::Global, d); };
            if (!tab.landmark || h.dest.landmark == tab.node)
                e = find(h.dest.node);
            if (!e && h.dest.landmark_vertex != kNone)
                e = tab.find(EntryKind::RepToRepSamePatch, h.dest.landmark_vertex);
            if (!e)
                e = find(h.dest.landmark);
            require(e, "global");
        }
        apply(h, *e, P);
        if (!h.pseudo.contains(at))
            return;
    }
    throw Error(ErrorCode::Internal, "table consultation does not leave the vertex");
}

PacketHeader make_packet(VertexId s, VertexId t, const TableSet& ts)
{
    const std::size_t n = ts.tables.size();
    if (s >= n || t >= n)
        throw Error(ErrorCode::UnknownVertex, "vertex id out of range");
    if (s == t)
        throw Error(ErrorCode::TrivialRoute, "source and destination coincide");
    PacketHeader h;
    h.dest = ts.tables[t].label;
    h.pseudo = PseudoTarget::vertex(s, ts.mesh.vertex(s));
    consult(s, h, ts);
    return h;
}

StepResult step(VertexId p1, const PacketHeader& h, const TableSet& ts)
{
    const TriangulatedPolytope& P = ts.mesh;
    const auto& ring = P.vertex_ring(p1);
    const auto& fan = P.vertex_fan(p1);
    const RoutingTable& tab = ts.tables[p1];

    // Destination or pseudo-destination next door.
    for (auto w : ring)
        if (w == h.dest.vertex)
            return {w, HopCase::VertexHit, false};
    {
        VertexId best = kNone;
        for (auto w : ring)
            if (h.pseudo.contains(w) &&
                (best == kNone || distance(P.vertex(w), h.pseudo.point) < distance(P.vertex(best), h.pseudo.point)))
                best = w;
        if (best != kNone)
            return {best, HopCase::VertexHit, false};
    }

    const auto fallback = [&] {
        VertexId best = ring.front();
        for (auto w : ring)
            if (distance(P.vertex(w), h.pseudo.point) < distance(P.vertex(best), h.pseudo.point))
                best = w;
        return StepResult{best, HopCase::General, true};
    };
    if (!h.guide.valid)
        return fallback();

    // Exit crossing: the one on the opposite edges of the fan furthest along
    // the near arc without passing the target.
    struct Crossing {
        std::size_t k;
        SegmentHit hit;
        double progress;
    };
    std::optional<Crossing> best;
    const double limit = h.guide.target_progress + kAngleTol;
    for (std::size_t k = 0; k < fan.size(); ++k) {
        const VertexId a = ring[k], b = ring[(k + 1) % ring.size()];
        const SegmentHit hit = segment_plane_intersect(P.vertex(a), P.vertex(b), h.plane, P.tolerance());
        if (!hit.hit())
            continue;
        const double prog = h.guide.progress(hit.point);
        if (prog > limit)
            continue;
        const bool touches_prev = h.prev_vertex == a || h.prev_vertex == b;
        if (!best || prog > best->progress + kAngleTol) {
            best = Crossing{k, hit, prog};
        } else if (prog >= best->progress - kAngleTol) {
            const VertexId b2 = ring[best->k], b3 = ring[(best->k + 1) % ring.size()];
            const bool best_touches_prev = h.prev_vertex == b2 || h.prev_vertex == b3;
            if (best_touches_prev && !touches_prev)
                best = Crossing{k, hit, prog};
        }
    }
    if (!best)
        return fallback();

    // Fan face k is (p1, ring[k], ring[k+1]) counter-clockwise from outside;
    // p2 and p3 follow p1 clockwise.
    const VertexId p3 = ring[best->k], p2 = ring[(best->k + 1) % ring.size()];
    if (best->hit.kind == SegmentHit::Kind::AtA)
        return {p3, HopCase::VertexHit, false};
    if (best->hit.kind == SegmentHit::Kind::AtB)
        return {p2, HopCase::VertexHit, false};

    // Look ahead into the face across p2p3.
    const FaceId f = fan[best->k];
    FaceId f3 = kNone;
    for (const auto& [face, opp] : tab.opposite_face_map)
        if (face == f)
            f3 = opp;
    if (f3 == kNone)
        f3 = P.opposite_face(f, p1);
    const VertexId p4 = P.third_vertex(f3, p2, p3);
    const Point3 &x1 = P.vertex(p1), &x2 = P.vertex(p2), &x3 = P.vertex(p3), &x4 = P.vertex(p4);
    const double s3 = h.plane.signed_distance(x3);
    const double s4 = h.plane.signed_distance(x4);
    const double snap = P.tolerance().at(std::max(distance(x2, x4), distance(x3, x4)));
    if (std::abs(s4) <= snap) {
        const bool to_p2 = distance(x1, x2) + distance(x2, x4) < distance(x1, x3) + distance(x3, x4);
        return {to_p2 ? p2 : p3, HopCase::TieBreak, false};
    }
    // p4 on p3's side: the plane runs on through p2p4.
    return {(s4 > 0) == (s3 > 0) ? p2 : p3, HopCase::General, false};
}

HeaderSize header_size(const TableSet& ts, const RouteOptions& opt)
{
    const auto width = [](std::size_t range) {
        return static_cast<std::size_t>(std::bit_width(std::max<std::size_t>(range, 1)));
    };
    const std::size_t n = ts.tables.size();
    const std::size_t nodes = ts.meta.node_count;
    const double eps = ts.meta.eps > 0 ? ts.meta.eps : 1;
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(1 / eps) - 1e-9));
    const std::size_t cells = std::max(side * side, static_cast<std::size_t>(std::ceil(1 / eps - 1e-9)));
    const auto limit = static_cast<std::size_t>(std::ceil(opt.hop_mult * double(n)));

    HeaderSize out;
    out.label_bits = NodeLabel{}.bits(n, nodes, ts.meta.patch_count, cells);
    out.label_bits += 1 + width(std::max(n, nodes)) + 2 * width(n);  // pseudo-target
    out.label_bits += width(n) + width(limit) + 3;                   // previous vertex, hop count, entry kind
    out.plane_bits = 9 * 64;
    return out;
}

RouteTrace route(VertexId s, VertexId t, const TableSet& ts, const RouteOptions& opt)
{
    PacketHeader h = make_packet(s, t, ts);
    const TriangulatedPolytope& P = ts.mesh;
    const auto limit = static_cast<std::size_t>(std::ceil(opt.hop_mult * double(P.vertex_count())));

    RouteTrace tr;
    tr.vertices.push_back(s);
    const auto open_leg = [&](VertexId from) {
        tr.legs.push_back({h.entry, h.plane, from, h.pseudo, tr.hops.size(), 0, 0});
    };
    open_leg(s);
    bool fresh = false;
    VertexId x = s;
    while (x != t) {
        if (tr.hops.size() >= limit)
            throw Error(ErrorCode::HopLimitExceeded,
                        "route " + std::to_string(s) + " -> " + std::to_string(t) + " exceeded " +
                            std::to_string(limit) + " hops");
        const StepResult r = step(x, h, ts);
        HopCase c = r.kind;
        if (tr.hops.empty())
            c = HopCase::FirstHop;
        else if (fresh)
            c = HopCase::PseudoSwitch;
        fresh = false;
        const double len = distance(P.vertex(x), P.vertex(r.next));
        tr.hops.push_back(c);
        tr.hop_lengths.push_back(len);
        tr.length += len;
        tr.degenerate_events += r.degenerate ? 1 : 0;
        tr.legs.back().hop_count++;
        tr.legs.back().length += len;
        h.prev_vertex = x;
        h.hop_count++;
        x = r.next;
        tr.vertices.push_back(x);
        if (x != t && h.pseudo.contains(x)) {
            consult(x, h, ts);
            fresh = true;
            open_leg(x);
        }
    }
    return tr;
}

std::string format_trace(const RouteTrace& tr)
{
    std::string out = "hop_index,vertex_id,case,edge_length\n";
    char buf[128];
    for (std::size_t i = 0; i < tr.hops.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%u,%s,%.17g\n", i + 1, tr.vertices[i + 1], hop_case_name(tr.hops[i]),
                      tr.hop_lengths[i]);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "summary,%u,%u,%zu,%.17g\n", tr.vertices.front(), tr.vertices.back(),
                  tr.hops.size(), tr.length);
    out += buf;
    return out;
}

} // namespace polyroute
