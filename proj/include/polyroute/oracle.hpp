#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyroute/router.hpp"

namespace polyroute {

/// Shortest path along mesh edges; an upper bound on the geodesic distance.
double edge_dijkstra(const TriangulatedPolytope& p, VertexId s, VertexId t);
std::vector<double> edge_distances(const TriangulatedPolytope& p, VertexId s);

/// First m terms of the base-2 van der Corput sequence: 1/2, 1/4, 3/4, 1/8, ...
/// Prefixes are nested, so refining m only adds points.
std::vector<double> van_der_corput(std::size_t m);

/// Vertices plus m points per edge; every pair of nodes on a common face is
/// joined by a straight segment. Face cliques are kept implicit.
class SubdivisionGraph {
public:
    SubdivisionGraph(const TriangulatedPolytope& p, std::size_t m);

    std::size_t node_count() const { return positions_.size(); }
    std::size_t points_per_edge() const { return m_; }
    const Point3& position(std::size_t node) const { return positions_[node]; }

    /// Distances from vertex s to every vertex.
    std::vector<double> distances_from(VertexId s) const;

private:
    const TriangulatedPolytope* p_;
    std::size_t m_;
    std::vector<Point3> positions_;
    std::vector<std::vector<std::uint32_t>> face_nodes_;
};

double subdivided_geodesic(const TriangulatedPolytope& p, VertexId s, VertexId t, std::size_t m);

/// sqrt(2 * area * eps^3) * (1 + 2 eps).
double estimate_D(const TriangulatedPolytope& p, double eps);

/// max over sources and targets of (d(m) - d(4m)) / d(4m).
double oracle_slack(const TriangulatedPolytope& p, std::size_t m, const std::vector<VertexId>& sources);

/// (8 + eps) / sin(theta_m) * (D + d).
double stretch_bound(double eps, double theta_m, double d_hat, double geodesic);

struct PairResult {
    std::size_t id = 0;
    VertexId s = kNone, t = kNone;
    double route_len = 0;
    double oracle_len = 0;
    double euclid = 0;
    double bound = 0;
    double ratio = 0;  // route_len / oracle_len
    bool violation = false;
    std::size_t hops = 0;
};

struct StretchReport {
    std::vector<PairResult> pairs;
    double d_hat = 0;
    double mu = 0;
    double theta_m = 0;
    double eps = 0;
    std::size_t subdiv = 0;
    double max_ratio = 0;
    double mean_ratio = 0;
    std::size_t violations = 0;

    std::string csv() const;
};

struct SweepOptions {
    std::size_t subdiv = 16;
    double mu = -1;            // < 0: estimate from a few sources at subdiv and 4 * subdiv
    std::size_t mu_sources = 8;
    RouteOptions route;
};

/// Routes every pair and checks |route| <= bound * (1 + mu). Route failures
/// propagate as exceptions.
StretchReport stretch_sweep(const TableSet& tables, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                            const SweepOptions& opt = {});

/// Distinct ordered pairs (s != t) drawn from a seeded generator.
std::vector<std::pair<VertexId, VertexId>> random_pairs(std::size_t n, std::size_t count, std::uint64_t seed);

} // namespace polyroute
