#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyroute/tables.hpp"

namespace polyroute {

enum class HopCase : std::uint8_t { FirstHop, General, VertexHit, TieBreak, PseudoSwitch };

const char* hop_case_name(HopCase c);

/// Geometry of the current leg, derived from the plane and pseudo-target:
/// progress along the near arc is the clockwise angle around a point inside
/// the cross-section of the polytope, measured from the leg start.
struct LegGuide {
    bool valid = false;
    Point3 center{};
    Vec3 cx{}, cy{};
    double start_angle = 0;
    double target_progress = 0;

    double progress(const Point3& p) const;
};

/// Guide for a leg along `plane` from its anchor to `target`. Invalid when the
/// two points coincide or the cross-section has no interior.
LegGuide make_guide(const TriangulatedPolytope& P, const Plane& plane, const Point3& target);

struct PacketHeader {
    NodeLabel dest;
    PseudoTarget pseudo;
    Plane plane;
    EntryKind entry = EntryKind::ToMyRep;
    VertexId prev_vertex = kNone;
    std::uint32_t hop_count = 0;
    LegGuide guide;
};

struct StepResult {
    VertexId next = kNone;
    HopCase kind = HopCase::General;
    bool degenerate = false;  // no usable crossing; nearest-neighbour fallback
};

/// Packet header size for a table set. The identifier fields grow with
/// log min(n, 1/eps); the guiding plane is nine doubles and is counted apart.
struct HeaderSize {
    std::size_t label_bits = 0;  // destination label, pseudo-target, previous vertex, hop count, entry kind
    std::size_t plane_bits = 0;
};

/// Header for a packet at s bound for t, with s's table already consulted.
/// Throws UnknownVertex or TrivialRoute (s == t).
PacketHeader make_packet(VertexId s, VertexId t, const TableSet& tables);

/// Table lookup at a pseudo-destination (or the source): replaces the plane
/// and pseudo-target. Repeats while `at` is already in the new target set.
void consult(VertexId at, PacketHeader& h, const TableSet& tables);

/// One forwarding decision at `current`; the result is a mesh neighbour.
StepResult step(VertexId current, const PacketHeader& h, const TableSet& tables);

struct LegRecord {
    EntryKind kind = EntryKind::ToMyRep;
    Plane plane;
    VertexId from = kNone;
    PseudoTarget to;
    std::size_t first_hop = 0;  // index into RouteTrace::hops
    std::size_t hop_count = 0;
    double length = 0;
};

struct RouteTrace {
    std::vector<VertexId> vertices;  // s first, t last
    std::vector<HopCase> hops;       // hops[i] moves vertices[i] -> vertices[i + 1]
    std::vector<double> hop_lengths;
    std::vector<LegRecord> legs;
    double length = 0;
    std::size_t degenerate_events = 0;
};

struct RouteOptions {
    double hop_mult = 4;  // hop limit = hop_mult * n
};

HeaderSize header_size(const TableSet& tables, const RouteOptions& opt = {});

/// Throws HopLimitExceeded, UnknownVertex or TrivialRoute.
RouteTrace route(VertexId s, VertexId t, const TableSet& tables, const RouteOptions& opt = {});

/// "hop_index,vertex_id,case,edge_length" lines and a closing summary line.
std::string format_trace(const RouteTrace& trace);

} // namespace polyroute
