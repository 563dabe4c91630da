#include "polyroute/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <random>
#include <set>

#include "polyroute/parallel.hpp"

namespace polyroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

std::vector<double> edge_distances(const TriangulatedPolytope& p, VertexId s)
{
    std::vector<double> dist(p.vertex_count(), kInf);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u])
            continue;
        for (auto w : p.vertex_ring(u)) {
            const double nd = d + distance(p.vertex(u), p.vertex(w));
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.emplace(nd, w);
            }
        }
    }
    return dist;
}

double edge_dijkstra(const TriangulatedPolytope& p, VertexId s, VertexId t)
{
    return edge_distances(p, s).at(t);
}

std::vector<double> van_der_corput(std::size_t m)
{
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) {
        double x = 0, base = 0.5;
        for (std::size_t k = i; k > 0; k >>= 1, base *= 0.5)
            if (k & 1)
                x += base;
        out.push_back(x);
    }
    return out;
}

SubdivisionGraph::SubdivisionGraph(const TriangulatedPolytope& p, std::size_t m) : p_(&p), m_(m)
{
    const std::size_t V = p.vertex_count();
    positions_.assign(p.vertices().begin(), p.vertices().end());
    const auto ts = van_der_corput(m);
    for (const auto& e : p.edges())
        for (double u : ts)
            positions_.push_back(p.vertex(e.a) + (p.vertex(e.b) - p.vertex(e.a)) * u);
    face_nodes_.resize(p.face_count());
    for (FaceId f = 0; f < p.face_count(); ++f) {
        auto& nodes = face_nodes_[f];
        const auto& tri = p.face(f);
        nodes.assign(tri.begin(), tri.end());
        for (int k = 0; k < 3; ++k) {
            const EdgeId e = p.find_edge(tri[k], tri[(k + 1) % 3]);
            for (std::size_t j = 0; j < m; ++j)
                nodes.push_back(static_cast<std::uint32_t>(V + e * m + j));
        }
    }
}

std::vector<double> SubdivisionGraph::distances_from(VertexId s) const
{
    const TriangulatedPolytope& p = *p_;
    const std::size_t V = p.vertex_count();
    std::vector<double> dist(positions_.size(), kInf);
    std::vector<char> done(positions_.size(), 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.emplace(0.0, s);
    std::size_t vertices_left = V;
    const auto relax_face = [&](FaceId f, std::uint32_t u, double d) {
        for (auto w : face_nodes_[f]) {
            if (done[w])
                continue;
            const double nd = d + distance(positions_[u], positions_[w]);
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.emplace(nd, w);
            }
        }
    };
    while (!pq.empty() && vertices_left > 0) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (done[u] || d != dist[u])
            continue;
        done[u] = 1;
        if (u < V) {
            --vertices_left;
            for (auto f : p.vertex_fan(u))
                relax_face(f, u, d);
        } else {
            const Edge& e = p.edges()[(u - V) / m_];
            relax_face(e.left, u, d);
            relax_face(e.right, u, d);
        }
    }
    dist.resize(V);
    return dist;
}

double subdivided_geodesic(const TriangulatedPolytope& p, VertexId s, VertexId t, std::size_t m)
{
    return SubdivisionGraph(p, m).distances_from(s).at(t);
}

double estimate_D(const TriangulatedPolytope& p, double eps)
{
    return std::sqrt(2 * p.surface_area() * eps * eps * eps) * (1 + 2 * eps);
}

double oracle_slack(const TriangulatedPolytope& p, std::size_t m, const std::vector<VertexId>& sources)
{
    const SubdivisionGraph coarse(p, m), fine(p, 4 * m);
    std::vector<double> worst(sources.size(), 0);
    parallel_for(sources.size(), [&](std::size_t i) {
        const auto a = coarse.distances_from(sources[i]);
        const auto b = fine.distances_from(sources[i]);
        for (std::size_t t = 0; t < a.size(); ++t)
            if (b[t] > 0)
                worst[i] = std::max(worst[i], (a[t] - b[t]) / b[t]);
    });
    return sources.empty() ? 0 : *std::max_element(worst.begin(), worst.end());
}

double stretch_bound(double eps, double theta_m, double d_hat, double geodesic)
{
    return (8 + eps) / std::sin(theta_m) * (d_hat + geodesic);
}

std::string StretchReport::csv() const
{
    std::string out = "pair_id,s,t,route_len,oracle_len,euclid,bound,ratio\n";
    char buf[256];
    for (const auto& r : pairs) {
        std::snprintf(buf, sizeof buf, "%zu,%u,%u,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.id, r.s, r.t, r.route_len,
                      r.oracle_len, r.euclid, r.bound, r.ratio);
        out += buf;
    }
    return out;
}

StretchReport stretch_sweep(const TableSet& ts, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                            const SweepOptions& opt)
{
    const TriangulatedPolytope& P = ts.mesh;
    StretchReport rep;
    rep.d_hat = ts.meta.d_hat;
    rep.theta_m = ts.meta.theta_m;
    rep.eps = ts.meta.eps;
    rep.subdiv = opt.subdiv;
    if (pairs.empty())
        return rep;

    std::vector<VertexId> sources;
    for (const auto& [s, t] : pairs)
        sources.push_back(s);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    if (opt.mu >= 0) {
        rep.mu = opt.mu;
    } else {
        std::vector<VertexId> sample;
        const std::size_t k = std::min(opt.mu_sources, sources.size());
        for (std::size_t i = 0; i < k; ++i)
            sample.push_back(sources[i * sources.size() / k]);
        rep.mu = oracle_slack(P, std::max<std::size_t>(opt.subdiv, 1), sample);
    }

    const SubdivisionGraph graph(P, opt.subdiv);
    std::vector<std::vector<double>> dist(sources.size());
    parallel_for(sources.size(), [&](std::size_t i) { dist[i] = graph.distances_from(sources[i]); });

    rep.pairs.resize(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [s, t] = pairs[i];
        PairResult& r = rep.pairs[i];
        r.id = i;
        r.s = s;
        r.t = t;
        const RouteTrace tr = route(s, t, ts, opt.route);
        r.route_len = tr.length;
        r.hops = tr.hops.size();
        r.oracle_len = dist[std::lower_bound(sources.begin(), sources.end(), s) - sources.begin()][t];
        r.euclid = distance(P.vertex(s), P.vertex(t));
        r.bound = stretch_bound(ts.meta.eps, ts.meta.theta_m, ts.meta.d_hat, r.oracle_len);
        r.ratio = r.oracle_len > 0 ? r.route_len / r.oracle_len : 1.0;
        r.violation = r.route_len > r.bound * (1 + rep.mu);
    });
    double sum = 0;
    for (const auto& r : rep.pairs) {
        rep.max_ratio = std::max(rep.max_ratio, r.ratio);
        sum += r.ratio;
        rep.violations += r.violation ? 1 : 0;
    }
    rep.mean_ratio = sum / double(rep.pairs.size());
    return rep;
}

std::vector<std::pair<VertexId, VertexId>> random_pairs(std::size_t n, std::size_t count, std::uint64_t seed)
{
    std::vector<std::pair<VertexId, VertexId>> out;
    if (n < 2)
        return out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    while (out.size() < count) {
        const VertexId s = pick(rng), t = pick(rng);
        if (s != t)
            out.emplace_back(s, t);
    }
    return out;
}

} // namespace polyroute
