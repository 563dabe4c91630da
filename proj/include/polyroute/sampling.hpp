#pragma once

#include <cstdint>
#include <vector>

#include "polyroute/patching.hpp"

namespace polyroute {

using CellId = std::uint32_t;

/// Axis-aligned grid over the bounding rectangle of a patch's home vertices,
/// in the patch frame. Points on a shared cell boundary go to the lower index.
struct Grid {
    PatchId patch = 0;
    Point2 lo{}, hi{};
    std::uint32_t rows = 1, cols = 1;
    double cell_w = 0, cell_h = 0;
    bool strip = false;          // collinear input: 1 x ceil(1/eps) along the long axis
    bool strip_along_x = true;

    std::size_t cell_count() const { return std::size_t(rows) * cols; }
    CellId cell_of(const Point2& q) const;
};

/// Grid for the home vertices of `projection` (all of its points when it has
/// no home vertex). rows = cols = ceil(sqrt(1/eps)).
Grid build_grid(const Projection& projection, double eps);

struct RepresentativeAssignment {
    std::vector<VertexId> reps;                  // sorted
    std::vector<VertexId> rep_of;                // per vertex
    std::vector<PatchId> patch_of;               // per vertex (home patch)
    std::vector<CellId> cell_of;                 // per vertex, within its patch grid
    std::vector<Point2> rep_point;               // per vertex; meaningful for reps only
    std::vector<std::vector<VertexId>> reps_of_patch;  // sorted
    std::vector<std::vector<VertexId>> members;  // per vertex: non-rep vertices it serves

    bool is_rep(VertexId v) const { return rep_of[v] == v; }
};

/// One representative per nonempty cell: the smallest vertex id in it.
RepresentativeAssignment select_representatives(const std::vector<Grid>& grids,
                                                const std::vector<Projection>& projections,
                                                std::size_t vertex_count);

} // namespace polyroute
