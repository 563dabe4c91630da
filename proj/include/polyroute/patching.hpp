#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "polyroute/polytope.hpp"

namespace polyroute {

using PatchId = std::uint32_t;

/// A contiguous, approximately flat set of faces. The representative face is
/// the breadth-first seed; `gamma` is its supporting plane with outward normal.
struct Patch {
    PatchId id = 0;
    std::vector<FaceId> faces;
    FaceId rep_face = kNone;
    Plane gamma;
    Frame frame;
    std::vector<VertexId> vertices;       // every vertex of a patch face, sorted
    std::vector<VertexId> home_vertices;  // vertices assigned to this patch, sorted
    double normal_cone_width = 0;         // max angle between a face normal and gamma's
};

struct PatchDecomposition {
    double delta = 0;
    std::vector<Patch> patches;
    std::vector<PatchId> patch_of_face;
    // Each vertex is homed on exactly one of the patches it touches: the
    // lowest-numbered one.
    std::vector<PatchId> home_patch;
};

/// (theta_x, theta_z): angles of a unit normal with the +x and +z axes, in [0, pi].
std::pair<double, double> normal_angles(const Vec3& unit_normal);

/// Breadth-first patching over the dual graph. A face joins the current patch
/// when both of its normal angles are within delta/2 of the seed's, which
/// gives the pairwise delta condition. For delta >= pi every face qualifies.
PatchDecomposition compute_patches(const TriangulatedPolytope& p, double delta);

struct SketchFace {
    PatchId patch = 0;
    Plane plane;
    Frame frame;
    std::vector<Point2> polygon;        // counter-clockwise in `frame`
    std::vector<Point3> polygon3d;
    // edge_neighbor[k] labels edge polygon[k] -> polygon[k+1]: the patch whose
    // half-space cuts it, or -1 for the bounding frame.
    std::vector<std::int32_t> edge_neighbor;

    double area() const;
    Point2 centroid() const;
};

/// P' = intersection of the supporting half-spaces of all representative
/// faces, clipped to a box of side 4 * diameter around the polytope (only
/// matters when there are too few patches to bound P').
struct Sketch {
    std::vector<SketchFace> faces;  // index = patch id
    bool bounded = true;

    bool contains(const Point3& x, double tol) const;
};

/// Throws UnboundedSketch if a face polygon comes out empty (invalid input).
Sketch build_sketch(const TriangulatedPolytope& p, const PatchDecomposition& d);

struct ProjectedVertex {
    VertexId vertex = kNone;
    Point2 local;          // coordinates in the patch frame
    Point3 projected;      // foot of the perpendicular on gamma
    double displacement = 0;
    bool home = false;
};

struct Projection {
    PatchId patch = 0;
    std::vector<ProjectedVertex> points;  // sorted by vertex id

    const ProjectedVertex* find(VertexId v) const;
};

Projection project_patch(const TriangulatedPolytope& p, const PatchDecomposition& d, PatchId patch);

} // namespace polyroute
