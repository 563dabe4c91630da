#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "polyroute/geometry.hpp"

namespace polyroute {

using VertexId = std::uint32_t;
using FaceId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xFFFFFFFFu;

struct Edge {
    VertexId a = kNone, b = kNone;  // a < b
    FaceId left = kNone;            // face containing directed edge a -> b
    FaceId right = kNone;           // face containing directed edge b -> a
};

/// A closed, convex, triangulated 2-manifold with outward (counter-clockwise
/// seen from outside) face orientation and full adjacency indices.
///
/// Immutable after construction.
class TriangulatedPolytope {
public:
    TriangulatedPolytope() = default;

    /// Validates and indexes the mesh; inward-facing triangles are flipped.
    /// Throws ParseError, DegenerateFace, NotClosed or NonConvex.
    static TriangulatedPolytope build(std::vector<Point3> vertices,
                                      std::vector<std::array<VertexId, 3>> faces,
                                      const Tolerance& tol = {});

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Point3>& vertices() const { return vertices_; }
    const std::vector<std::array<VertexId, 3>>& faces() const { return faces_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const Point3& vertex(VertexId v) const { return vertices_[v]; }
    const std::array<VertexId, 3>& face(FaceId f) const { return faces_[f]; }
    Triangle face_points(FaceId f) const;
    const Vec3& face_normal(FaceId f) const { return normals_[f]; }

    /// Faces around v in counter-clockwise order (seen from outside).
    const std::vector<FaceId>& vertex_fan(VertexId v) const { return fans_[v]; }
    /// Neighbouring vertices around v, same cyclic order as vertex_fan:
    /// fan face k is (v, ring[k], ring[k+1]).
    const std::vector<VertexId>& vertex_ring(VertexId v) const { return rings_[v]; }

    bool adjacent(VertexId u, VertexId v) const;
    /// Edge id of {u, v}, or kNone.
    EdgeId find_edge(VertexId u, VertexId v) const;
    /// Face sharing the edge of f opposite to vertex v (v must be in f).
    FaceId opposite_face(FaceId f, VertexId v) const;
    /// The vertex of f that is neither a nor b.
    VertexId third_vertex(FaceId f, VertexId a, VertexId b) const;
    /// Face containing the directed edge a -> b, or kNone.
    FaceId face_with_directed_edge(VertexId a, VertexId b) const;

    double diameter() const { return diameter_; }
    double surface_area() const { return area_; }
    const Point3& centroid() const { return centroid_; }
    const Tolerance& tolerance() const { return tol_; }
    /// Absolute snapping distance at mesh scale.
    double snap() const { return tol_.at(diameter_); }

private:
    std::vector<Point3> vertices_;
    std::vector<std::array<VertexId, 3>> faces_;
    std::vector<Vec3> normals_;
    std::vector<Edge> edges_;
    std::vector<std::vector<FaceId>> fans_;
    std::vector<std::vector<VertexId>> rings_;
    // For each vertex, (neighbour, edge id) sorted by neighbour.
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> vertex_edges_;
    // face_edges_[f][k] is the edge opposite corner k.
    std::vector<std::array<EdgeId, 3>> face_edges_;
    double diameter_ = 0;
    double area_ = 0;
    Point3 centroid_{};
    Tolerance tol_{};
};

TriangulatedPolytope load_off(std::istream& in, const Tolerance& tol = {});
TriangulatedPolytope load_off(std::string_view text, const Tolerance& tol = {});
std::string to_off(const TriangulatedPolytope& p);

struct DualGraph {
    // adjacency[f] = the three faces across f's edges.
    std::vector<std::array<FaceId, 3>> adjacency;
    std::size_t edge_count = 0;

    bool connected() const;
};

DualGraph dual_graph(const TriangulatedPolytope& p);

struct PolytopeMetrics {
    double theta_m = 0;         // half the minimum corner angle over all faces
    double theta_m_fan = 0;     // alternative reading: half the minimum angle spanned
                                // by two consecutive fan faces around a vertex
    double min_corner_angle = 0;
    double mesh_diameter = 0;
    std::size_t n = 0;
};

PolytopeMetrics compute_theta_m(const TriangulatedPolytope& p);

} // namespace polyroute
