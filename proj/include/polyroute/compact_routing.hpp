#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "polyroute/spanner.hpp"

namespace polyroute {

struct WeightedGraph {
    std::vector<std::vector<std::pair<NodeId, double>>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    void add_edge(NodeId u, NodeId v, double w);

    static WeightedGraph from_spanner(const SpannerGraph& g);
};

struct ShortestPaths {
    std::vector<double> dist;    // infinity when unreached
    std::vector<NodeId> parent;  // predecessor towards the source; kNone at the source
    std::vector<NodeId> order;   // settle order
};

/// Dijkstra from `source`, settling only nodes with distance < limit.
ShortestPaths dijkstra(const WeightedGraph& g, NodeId source,
                       double limit = std::numeric_limits<double>::infinity());

/// Stretch-3 landmark scheme: ceil(sqrt N) landmarks; node x keeps a next hop
/// to every landmark and to every v whose cluster contains x, i.e.
/// d(x, v) < d(v, A); landmarks keep next hops to every node.
struct LandmarkScheme {
    std::vector<NodeId> landmarks;             // sorted
    std::vector<std::int32_t> landmark_index;  // per node, -1 if not a landmark
    std::vector<NodeId> home;                  // nearest landmark (ties: smaller id)
    std::vector<double> dist_to_landmarks;
    std::vector<std::vector<NodeId>> toward;   // toward[x][i]: next hop from x to landmarks[i]
    std::vector<std::unordered_map<NodeId, NodeId>> cluster;  // cluster[x][v]: next hop to v
    std::vector<std::vector<NodeId>> full;     // full[i][v]: next hop from landmarks[i] to v
    bool pruned = false;

    std::size_t size() const { return home.size(); }
    bool is_landmark(NodeId x) const { return landmark_index[x] >= 0; }

    /// Next hop stored at x for destination `dest`, or kNone if x keeps no entry.
    NodeId lookup(NodeId x, NodeId dest) const;
    /// Next hop towards dest: the stored entry when x is dest's own cluster
    /// member or home landmark, else towards home(dest). kNone when x == dest
    /// or the needed entry was pruned.
    NodeId next_hop(NodeId x, NodeId dest) const;
    /// Node sequence of the scheme's walk from u to v (u first, v last).
    std::vector<NodeId> walk(NodeId u, NodeId v) const;
    std::size_t entry_count(NodeId x) const;
    std::size_t total_entries() const;
};

/// Landmarks are the highest-degree nodes (ties: smaller id), or a seeded
/// random sample when `seed` is given. Throws DisconnectedSpanner.
LandmarkScheme tz_preprocess(const WeightedGraph& g, std::optional<std::uint64_t> seed = std::nullopt);

/// Drops every entry between two representative nodes of the same patch;
/// those pairs are served by direct planes instead.
void prune_intra_face(LandmarkScheme& scheme, const SpannerGraph& g);

/// A stored next hop turned into geometry: the plane orthogonal to the sketch
/// face carrying edge (node, via) through the lifted points of both.
struct PlaneHop {
    NodeId dest = kNone;
    NodeId via = kNone;
    Plane plane;
};

/// Per spanner node, its entries sorted by destination.
std::vector<std::vector<PlaneHop>> materialize_plane_entries(const LandmarkScheme& scheme,
                                                             const SpannerGraph& g, const Sketch& sketch);

/// Plane for the spanner edge u -> via (must be an edge of g).
Plane hop_plane(const SpannerGraph& g, const Sketch& sketch, NodeId u, NodeId via);

} // namespace polyroute
