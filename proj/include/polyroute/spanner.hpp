#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyroute/sampling.hpp"

namespace polyroute {

using NodeId = std::uint32_t;

/// ceil(2 pi / eps) cones around an apex. Cone 0 is [0, angle], cone k is
/// (k angle, (k+1) angle]; a point on a shared ray belongs to the lower cone.
struct ConeFan {
    Point2 apex{};
    std::uint32_t count = 1;
    double angle = 0;

    static ConeFan around(const Point2& apex, double eps);

    std::uint32_t cone_of(const Point2& q) const;  // q != apex
    Point2 bisector(std::uint32_t k) const;        // unit vector
    Point2 ray(std::uint32_t k) const;             // unit vector at angle k * angle
};

std::uint32_t cone_count(double eps);

/// Theta-graph on a point set: for every point and nonempty cone, one edge to
/// the point whose projection on the cone bisector is nearest the apex (ties by
/// index). Returns deduplicated index pairs (i < j), sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> build_theta_graph(const std::vector<Point2>& nodes,
                                                                       double eps);

/// A point on the common boundary of two sketch faces.
struct SteinerPoint {
    std::array<PatchId, 2> faces{kNone, kNone};  // faces[0] placed it
    Point3 position{};
    std::array<Point2, 2> local{};               // in each face's frame
};

/// For each representative and each cone with no same-face representative,
/// follows the cone across the sketch by unfolding; if it reaches a
/// representative of another face, the nearest point of the face boundary in
/// that cone becomes a Steiner point. Duplicates are merged.
std::vector<SteinerPoint> place_steiner_points(const Sketch& sketch, const RepresentativeAssignment& a,
                                               double eps);

/// A point of the sketch carried back onto the polytope: ray-cast along
/// `direction` (closest point on the surface if the ray misses), then snapped
/// onto the nearest edge of the face it landed on.
struct LiftedPoint {
    Point3 point{};
    EdgeId edge = kNone;
    std::array<VertexId, 2> marked{kNone, kNone};  // one entry when snapped to a vertex
};

LiftedPoint lift_to_surface(const TriangulatedPolytope& p, const Point3& x, const Vec3& direction);

struct SpannerNode {
    enum class Kind : std::uint8_t { Rep, Steiner };

    Kind kind = Kind::Rep;
    VertexId vertex = kNone;      // Rep only
    // Sketch faces the node lies on; a rep's own patch comes first. Points
    // that coincide on the sketch are merged, so a node may sit on more than
    // two faces at a sketch corner.
    std::vector<PatchId> faces;
    std::vector<Point2> local;    // parallel to faces
    Point3 sketch_point{};
    Point3 lifted{};              // on the polytope
    EdgeId mesh_edge = kNone;     // Steiner only
    std::array<VertexId, 2> marked{kNone, kNone};

    bool on_face(PatchId f) const;
    const Point2& local_on(PatchId f) const;
};

struct SpannerEdge {
    NodeId u = 0, v = 0;
    double weight = 0;
    PatchId face = 0;
};

struct SpannerGraph {
    std::vector<SpannerNode> nodes;
    std::vector<SpannerEdge> edges;
    std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adjacency;  // (neighbour, edge index)
    std::vector<std::vector<NodeId>> face_nodes;                            // per sketch face
    std::vector<NodeId> node_of_vertex;                                     // kNone for non-reps
    std::size_t steiner_count = 0;

    std::size_t node_count() const { return nodes.size(); }
    bool connected() const;
    /// Edge between u and v, or nullptr.
    const SpannerEdge* find_edge(NodeId u, NodeId v) const;
    /// Text edge list: node lines then edge lines.
    std::string dump() const;
};

/// Builds the per-face theta-graphs over representatives and Steiner points,
/// lifts Steiner points and merges everything. Throws DisconnectedSpanner.
SpannerGraph assemble_global_spanner(const TriangulatedPolytope& p, const Sketch& sketch,
                                     const RepresentativeAssignment& a,
                                     const std::vector<SteinerPoint>& steiner, double eps);

} // namespace polyroute
