#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyroute/tables.hpp"

namespace polyroute {

struct PreprocessConfig {
    double eps = 0.3;
    double delta = 0;  // <= 0: same as eps
    std::optional<std::uint64_t> seed;  // landmark sampling; default is degree order
};

struct PreprocessSummary {
    double eps = 0, delta = 0;
    std::uint64_t seed = 0;
    bool seeded = false;
    std::size_t vertices = 0;
    std::size_t patches = 0;
    std::size_t reps = 0;
    std::size_t spanner_nodes = 0;
    std::size_t steiner_nodes = 0;
    std::size_t spanner_edges = 0;
    std::size_t landmarks = 0;
    std::size_t table_entries = 0;
    std::size_t table_bytes = 0;
    double theta_m = 0;
    double theta_m_fan = 0;
    double d_hat = 0;
    double wall_seconds = 0;

    std::string text() const;
};

struct Preprocessed {
    PatchDecomposition patches;
    Sketch sketch;
    std::vector<Projection> projections;
    std::vector<Grid> grids;
    RepresentativeAssignment assignment;
    SpannerGraph spanner;
    LandmarkScheme scheme;  // pruned
    TableSet tables;
    PreprocessSummary summary;
};

/// Runs patching, sampling, spanner, landmark scheme and table construction.
Preprocessed preprocess(const TriangulatedPolytope& p, const PreprocessConfig& cfg);

} // namespace polyroute
