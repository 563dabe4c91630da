#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polyroute/polytope.hpp"

namespace polyroute {

/// Regular tetrahedron with vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
TriangulatedPolytope make_tetrahedron();
/// Unit cube [0,1]^3, each square split along a diagonal (12 faces).
TriangulatedPolytope make_cube();
/// Regular octahedron with vertices (±1,0,0), (0,±1,0), (0,0,±1).
TriangulatedPolytope make_octahedron();
/// Convex hull of n uniform random points on the unit sphere. n >= 4.
TriangulatedPolytope make_sphere_hull(std::size_t n, std::uint64_t seed);

/// Incremental 3D convex hull. Returns outward-oriented triangles indexing
/// into `points`; interior points are left unreferenced.
std::vector<std::array<VertexId, 3>> convex_hull(std::span<const Point3> points);

} // namespace polyroute
