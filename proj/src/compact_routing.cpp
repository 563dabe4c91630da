#include "polyroute/compact_routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>

#include "polyroute/parallel.hpp"

namespace polyroute {

void WeightedGraph::add_edge(NodeId u, NodeId v, double w)
{
    const std::size_t need = std::max(u, v) + std::size_t{1};
    if (adjacency.size() < need)
        adjacency.resize(need);
    adjacency[u].emplace_back(v, w);
    adjacency[v].emplace_back(u, w);
}

WeightedGraph WeightedGraph::from_spanner(const SpannerGraph& g)
{
    WeightedGraph w;
    w.adjacency.resize(g.node_count());
    for (const auto& e : g.edges)
        w.add_edge(e.u, e.v, e.weight);
    return w;
}

ShortestPaths dijkstra(const WeightedGraph& g, NodeId source, double limit)
{
    const std::size_t n = g.size();
    ShortestPaths sp;
    sp.dist.assign(n, std::numeric_limits<double>::infinity());
    sp.parent.assign(n, kNone);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    sp.dist[source] = 0;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (done[u] || d != sp.dist[u])
            continue;
        if (!(d < limit) && u != source)
            break;
        done[u] = 1;
        sp.order.push_back(u);
        for (const auto& [v, w] : g.adjacency[u]) {
            const double nd = d + w;
            if (!done[v] && nd < sp.dist[v]) {
                sp.dist[v] = nd;
                sp.parent[v] = u;
                pq.emplace(nd, v);
            }
        }
    }
    // Drop tentative labels beyond the limit.
    for (NodeId v = 0; v < n; ++v)
        if (!done[v]) {
            sp.dist[v] = std::numeric_limits<double>::infinity();
            sp.parent[v] = kNone;
        }
    return sp;
}

NodeId LandmarkScheme::lookup(NodeId x, NodeId dest) const
{
    if (x == dest)
        return kNone;
    if (const auto i = landmark_index[x]; i >= 0)
        return full[i][dest];
    if (const auto j = landmark_index[dest]; j >= 0)
        return toward[x][j];
    const auto it = cluster[x].find(dest);
    return it == cluster[x].end() ? kNone : it->second;
}

NodeId LandmarkScheme::next_hop(NodeId x, NodeId dest) const
{
    if (x == dest)
        return kNone;
    // A landmark answers directly only for nodes it is home to; everything
    // else follows the home landmark's tree, which keeps walks consistent.
    if (!is_landmark(x) || home[dest] == x)
        if (const NodeId h = lookup(x, dest); h != kNone)
            return h;
    return lookup(x, home[dest]);
}

std::vector<NodeId> LandmarkScheme::walk(NodeId u, NodeId v) const
{
    std::vector<NodeId> path{u};
    for (std::size_t steps = 0; u != v; ++steps) {
        if (steps > 3 * size())
            throw Error(ErrorCode::Internal, "landmark walk does not terminate");
        u = next_hop(u, v);
        if (u == kNone)
            throw Error(ErrorCode::Internal, "landmark walk hit a missing entry");
        path.push_back(u);
    }
    return path;
}

std::size_t LandmarkScheme::entry_count(NodeId x) const
{
    const auto present = [](const std::vector<NodeId>& hops) {
        return static_cast<std::size_t>(std::count_if(hops.begin(), hops.end(), [](NodeId h) { return h != kNone; }));
    };
    if (const auto i = landmark_index[x]; i >= 0)
        return present(full[i]);
    return present(toward[x]) + cluster[x].size();
}

std::size_t LandmarkScheme::total_entries() const
{
    std::size_t total = 0;
    for (NodeId x = 0; x < size(); ++x)
        total += entry_count(x);
    return total;
}

LandmarkScheme tz_preprocess(const WeightedGraph& g, std::optional<std::uint64_t> seed)
{
    const std::size_t n = g.size();
    LandmarkScheme s;
    if (n == 0)
        return s;

    {
        const auto sp = dijkstra(g, 0);
        if (sp.order.size() != n)
            throw Error(ErrorCode::DisconnectedSpanner, "graph is disconnected");
    }

    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(double(n)) - 1e-9));
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::shuffle(ids.begin(), ids.end(), rng);
    } else {
        std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
            return g.adjacency[a].size() > g.adjacency[b].size();
        });
    }
    s.landmarks.assign(ids.begin(), ids.begin() + std::min(k, n));
    std::sort(s.landmarks.begin(), s.landmarks.end());
    s.landmark_index.assign(n, -1);
    for (std::size_t i = 0; i < s.landmarks.size(); ++i)
        s.landmark_index[s.landmarks[i]] = static_cast<std::int32_t>(i);

    // Nearest landmark, ties towards the smaller landmark id.
    s.home.assign(n, kNone);
    s.dist_to_landmarks.assign(n, std::numeric_limits<double>::infinity());
    {
        using Item = std::tuple<double, NodeId, NodeId>;  // (dist, landmark, node)
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        std::vector<char> done(n, 0);
        for (auto l : s.landmarks) {
            s.dist_to_landmarks[l] = 0;
            s.home[l] = l;
            pq.emplace(0.0, l, l);
        }
        while (!pq.empty()) {
            const auto [d, l, u] = pq.top();
            pq.pop();
            if (done[u] || d != s.dist_to_landmarks[u] || l != s.home[u])
                continue;
            done[u] = 1;
            for (const auto& [v, w] : g.adjacency[u]) {
                const double nd = d + w;
                if (done[v])
                    continue;
                if (nd < s.dist_to_landmarks[v] || (nd == s.dist_to_landmarks[v] && l < s.home[v])) {
                    s.dist_to_landmarks[v] = nd;
                    s.home[v] = l;
                    pq.emplace(nd, l, v);
                }
            }
        }
    }

    s.toward.assign(n, std::vector<NodeId>(s.landmarks.size(), kNone));
    s.full.assign(s.landmarks.size(), {});
    std::vector<ShortestPaths> trees(s.landmarks.size());
    parallel_for(s.landmarks.size(), [&](std::size_t i) {
        trees[i] = dijkstra(g, s.landmarks[i]);
        auto& first = s.full[i];
        first.assign(n, kNone);
        for (auto v : trees[i].order) {
            const NodeId p = trees[i].parent[v];
            if (p == kNone)
                continue;
            first[v] = p == s.landmarks[i] ? v : first[p];
        }
    });
    for (std::size_t i = 0; i < s.landmarks.size(); ++i) {
        for (NodeId x = 0; x < n; ++x)
            s.toward[x][i] = trees[i].parent[x];
        trees[i] = {};
    }

    // Clusters: x stores v when d(x, v) < d(v, A); the next hop is x's parent
    // in the shortest-path tree of v.
    std::vector<std::vector<std::pair<NodeId, NodeId>>> members(n);  // per v: (x, next hop)
    parallel_for(n, [&](std::size_t v) {
        if (s.landmark_index[v] >= 0)
            return;
        const auto sp = dijkstra(g, static_cast<NodeId>(v), s.dist_to_landmarks[v]);
        for (auto x : sp.order)
            if (x != v)
                members[v].emplace_back(x, sp.parent[x]);
    });
    s.cluster.assign(n, {});
    for (NodeId v = 0; v < n; ++v)
        for (const auto& [x, hop] : members[v])
            if (s.landmark_index[x] < 0)
                s.cluster[x].emplace(v, hop);
    return s;
}

void prune_intra_face(LandmarkScheme& s, const SpannerGraph& g)
{
    const auto rep_patch = [&](NodeId x) -> PatchId {
        const auto& node = g.nodes[x];
        return node.kind == SpannerNode::Kind::Rep ? node.faces.front() : kNone;
    };
    for (NodeId x = 0; x < s.size(); ++x) {
        const PatchId px = rep_patch(x);
        if (px == kNone)
            continue;
        const auto same = [&](NodeId y) { return y != x && rep_patch(y) == px; };
        if (const auto i = s.landmark_index[x]; i >= 0) {
            for (NodeId y = 0; y < s.size(); ++y)
                if (same(y))
                    s.full[i][y] = kNone;
        }
        for (std::size_t i = 0; i < s.landmarks.size(); ++i)
            if (same(s.landmarks[i]))
                s.toward[x][i] = kNone;
        std::erase_if(s.cluster[x], [&](const auto& kv) { return same(kv.first); });
    }
    s.pruned = true;
}

Plane hop_plane(const SpannerGraph& g, const Sketch& sketch, NodeId u, NodeId via)
{
    const SpannerEdge* e = g.find_edge(u, via);
    if (!e)
        throw Error(ErrorCode::Internal, "next hop is not a spanner neighbour");
    return Plane::orthogonal_through(g.nodes[u].lifted, g.nodes[via].lifted, sketch.faces[e->face].frame.n);
}

std::vector<std::vector<PlaneHop>> materialize_plane_entries(const LandmarkScheme& s, const SpannerGraph& g,
                                                             const Sketch& sketch)
{
    std::vector<std::vector<PlaneHop>> out(s.size());
    parallel_for(s.size(), [&](std::size_t xi) {
        const auto x = static_cast<NodeId>(xi);
        auto& hops = out[x];
        const auto add = [&](NodeId dest, NodeId via) {
            if (via != kNone && dest != x)
                hops.push_back({dest, via, hop_plane(g, sketch, x, via)});
        };
        if (const auto i = s.landmark_index[x]; i >= 0) {
            for (NodeId v = 0; v < s.size(); ++v)
                add(v, s.full[i][v]);
        } else {
            for (std::size_t i = 0; i < s.landmarks.size(); ++i)
                add(s.landmarks[i], s.toward[x][i]);
            for (const auto& [v, via] : s.cluster[x])
                add(v, via);
        }
        std::sort(hops.begin(), hops.end(), [](const PlaneHop& a, const PlaneHop& b) { return a.dest < b.dest; });
    });
    return out;
}

} // namespace polyroute
