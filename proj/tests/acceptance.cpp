// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polyroute/oracle.hpp"
#include "polyroute/pipeline.hpp"
#include "polyroute/shapes.hpp"
#include "support.hpp"

using namespace polyroute;
using namespace testing_support;

namespace {

// Pinned parameters and tolerances.
constexpr std::uint64_t kMeshSeed = 1;
constexpr std::uint64_t kPairSeed = 2024;
constexpr std::size_t kPairs = 1000;
constexpr std::size_t kHopFactor = 4;
constexpr std::size_t kOracleSubdiv = 16;
constexpr double kLocalityBudgetSeconds = 120;
constexpr double kStretchBudgetSeconds = 600;
constexpr double kThetaSlack = 1e-9;
constexpr double kSchemeStretch = 3;
constexpr double kSchemeSlack = 1e-9;
constexpr std::size_t kSchemeMaxNodes = 200;
constexpr std::size_t kTriangles = 10000;
constexpr double kTriangleSlack = 1e-9;
constexpr std::size_t kProjectionPairs = 500;
constexpr double kScalingHeadroom = 2;
constexpr std::size_t kRoundTrips = 100;
constexpr double kMaxTrendExponent = 3;
// Relative round-off allowed when comparing two computations of the same
// length (a path through collinear edge points against the direct segment).
constexpr double kRoundoff = 1e-12;

const std::vector<std::size_t> kSweepSizes{50, 100, 300};
const std::vector<double> kSweepEps{0.2, 0.4};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Result& r)
{
    std::printf("[%s] %2d %-22s %s\n", r.pass ? "PASS" : "FAIL", id, name, r.detail.c_str());
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
}

void report_trend(const Result& r)
{
    std::printf("[%s]  T %-22s %s\n", r.pass ? "PASS" : "FAIL", "preprocess-time-trend", r.detail.c_str());
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
}

template <class... Args>
std::string fmt(const char* f, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------
// Criteria 1-3: routing sweep over sphere hulls.

struct SweepTotals {
    std::size_t routes = 0, hops = 0, non_edges = 0;
    std::size_t unfinished = 0, over_limit = 0, errors = 0;
    std::size_t violations = 0, bound_pairs = 0;
    double route_seconds = 0, stretch_seconds = 0;
    double worst_bound_use = 0;  // max route / (bound * (1 + mu))
    double max_ratio = 0;
    std::string first_error;
};

SweepTotals run_sweep()
{
    SweepTotals tot;
    for (std::size_t n : kSweepSizes)
        for (double eps : kSweepEps) {
            const auto mesh = make_sphere_hull(n, kMeshSeed);
            const auto pre = preprocess(mesh, {.eps = eps});
            const auto pairs = random_pairs(n, kPairs, kPairSeed + n);

            auto t0 = Clock::now();
            for (auto [s, t] : pairs) {
                ++tot.routes;
                try {
                    const auto tr = route(s, t, pre.tables, {.hop_mult = double(kHopFactor)});
                    tot.hops += tr.hops.size();
                    for (std::size_t i = 0; i + 1 < tr.vertices.size(); ++i)
                        tot.non_edges += mesh.adjacent(tr.vertices[i], tr.vertices[i + 1]) ? 0 : 1;
                    tot.unfinished += tr.vertices.back() == t ? 0 : 1;
                    tot.over_limit += tr.hops.size() <= kHopFactor * n ? 0 : 1;
                } catch (const Error& e) {
                    ++tot.errors;
                    if (tot.first_error.empty())
                        tot.first_error = fmt("n=%zu eps=%.1f %u->%u: %s", n, eps, s, t, e.what());
                }
            }
            tot.route_seconds += seconds_since(t0);

            t0 = Clock::now();
            SweepOptions opt;
            opt.subdiv = kOracleSubdiv;
            opt.route.hop_mult = double(kHopFactor);
            try {
                const auto rep = stretch_sweep(pre.tables, pairs, opt);
                tot.violations += rep.violations;
                tot.bound_pairs += rep.pairs.size();
                tot.max_ratio = std::max(tot.max_ratio, rep.max_ratio);
                for (const auto& r : rep.pairs)
                    tot.worst_bound_use = std::max(tot.worst_bound_use, r.route_len / (r.bound * (1 + rep.mu)));
            } catch (const Error& e) {
                tot.violations += pairs.size();
                if (tot.first_error.empty())
                    tot.first_error = fmt("stretch sweep n=%zu eps=%.1f: %s", n, eps, e.what());
            }
            tot.stretch_seconds += seconds_since(t0);
        }
    return tot;
}

// ---------------------------------------------------------------------------
// Criterion 4: per-face theta-graph stretch.

Result theta_stretch()
{
    std::size_t pairs = 0, bad = 0;
    double worst = 0, worst_bound = 0;
    for (std::size_t n : kSweepSizes)
        for (double eps : kSweepEps) {
            const double bound = 1 / (std::cos(eps) - std::sin(eps));
            const auto pre = preprocess(make_sphere_hull(n, kMeshSeed), {.eps = eps});
            const auto& g = pre.spanner;
            for (PatchId f = 0; f < g.face_nodes.size(); ++f) {
                const auto& nodes = g.face_nodes[f];
                auto d = empty_matrix(nodes.size());
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    for (std::size_t j = 0; j < nodes.size(); ++j)
                        if (const SpannerEdge* e = g.find_edge(nodes[i], nodes[j]))
                            d[i][j] = e->weight;
                d = floyd_warshall(std::move(d));
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                        const double euclid =
                            distance(g.nodes[nodes[i]].local_on(f), g.nodes[nodes[j]].local_on(f));
                        const double ratio = d[i][j] / euclid;
                        ++pairs;
                        if (ratio > worst) {
                            worst = ratio;
                            worst_bound = bound;
                        }
                        bad += ratio <= bound + kThetaSlack ? 0 : 1;
                    }
            }
        }
    return {bad == 0, fmt("%zu same-face pairs, %zu over bound, worst ratio %.6f (bound %.6f)", pairs, bad, worst,
                          worst_bound)};
}

// ---------------------------------------------------------------------------
// Criterion 5: landmark scheme stretch on small spanners.

Result scheme_stretch()
{
    std::size_t graphs = 0, pairs = 0, bad = 0;
    double worst = 0;
    const auto check = [&](const WeightedGraph& g, const LandmarkScheme& s) {
        ++graphs;
        auto d = empty_matrix(g.size());
        for (NodeId u = 0; u < g.size(); ++u)
            for (auto [v, w] : g.adjacency[u])
                d[u][v] = std::min(d[u][v], w);
        d = floyd_warshall(std::move(d));
        for (NodeId u = 0; u < g.size(); ++u)
            for (NodeId v = 0; v < g.size(); ++v) {
                if (u == v)
                    continue;
                const auto walk = s.walk(u, v);
                double len = 0;
                for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
                    double w = kInf;
                    for (auto [y, wy] : g.adjacency[walk[i]])
                        if (y == walk[i + 1])
                            w = std::min(w, wy);
                    len += w;
                }
                if (walk.back() != v)
                    len = kInf;
                const double ratio = len / d[u][v];
                ++pairs;
                worst = std::max(worst, ratio);
                bad += ratio <= kSchemeStretch + kSchemeSlack ? 0 : 1;
            }
    };
    for (std::size_t n : {30, 50, 60, 80})
        for (double eps : {0.4, 0.5, 0.6}) {
            const auto pre = preprocess(make_sphere_hull(n, kMeshSeed), {.eps = eps});
            if (pre.spanner.node_count() > kSchemeMaxNodes)
                continue;
            const auto g = WeightedGraph::from_spanner(pre.spanner);
            check(g, tz_preprocess(g));
            check(g, tz_preprocess(g, n));
        }
    return {bad == 0 && graphs > 0,
            fmt("%zu spanners (<= %zu nodes), %zu pairs, %zu over 3, worst %.6f", graphs, kSchemeMaxNodes, pairs, bad,
                worst)};
}

// ---------------------------------------------------------------------------
// Criterion 6: two sides of a triangle against the included angle.

Result triangle_inequality()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    std::size_t tested = 0, bad = 0;
    double worst = -kInf;
    while (tested < kTriangles) {
        const Triangle t{Point3{u(rng), u(rng), u(rng)}, Point3{u(rng), u(rng), u(rng)},
                         Point3{u(rng), u(rng), u(rng)}};
        if (triangle_area(t) < 1e-6)
            continue;
        ++tested;
        const double B = corner_angle(t, 1);
        const double lhs = distance(t[0], t[1]) + distance(t[1], t[2]);
        const double rhs = distance(t[0], t[2]) / std::sin(B / 2);
        worst = std::max(worst, lhs - rhs);
        bad += lhs <= rhs + kTriangleSlack ? 0 : 1;
    }
    return {bad == 0, fmt("%zu triangles, %zu violations, max(lhs - rhs) = %.3g", tested, bad, worst)};
}

// ---------------------------------------------------------------------------
// Criterion 7: projections of same-patch pairs against surface distance.

Result projection_distances()
{
    struct Config {
        std::size_t n;
        double delta;
    };
    const std::vector<Config> configs{{100, 0.2}, {100, 0.4}, {300, 0.2}, {300, 0.4}};
    const std::size_t per = kProjectionPairs / configs.size();
    std::size_t pairs = 0, upper_bad = 0, lower_bad = 0;
    double worst_lower = kInf;  // min of |p'q'| / (d / (1 + 2 delta) (1 - mu))
    std::mt19937_64 rng(7);
    for (const auto& c : configs) {
        const auto p = make_sphere_hull(c.n, kMeshSeed);
        const auto d = compute_patches(p, c.delta);
        std::vector<PatchId> candidates;
        for (const auto& patch : d.patches)
            if (patch.vertices.size() >= 2)
                candidates.push_back(patch.id);
        if (candidates.empty())
            continue;
        std::vector<std::pair<VertexId, VertexId>> sample;
        std::vector<PatchId> sample_patch;
        for (std::size_t i = 0; i < per; ++i) {
            const auto& patch = d.patches[candidates[rng() % candidates.size()]];
            const VertexId a = patch.vertices[rng() % patch.vertices.size()];
            VertexId b = a;
            while (b == a)
                b = patch.vertices[rng() % patch.vertices.size()];
            sample.emplace_back(a, b);
            sample_patch.push_back(patch.id);
        }
        std::vector<VertexId> sources;
        for (auto [a, b] : sample)
            sources.push_back(a);
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
        std::vector<VertexId> mu_sources;
        for (std::size_t i = 0; i < std::min<std::size_t>(8, sources.size()); ++i)
            mu_sources.push_back(sources[i * sources.size() / std::min<std::size_t>(8, sources.size())]);
        const double mu = oracle_slack(p, kOracleSubdiv, mu_sources);
        const SubdivisionGraph graph(p, kOracleSubdiv);
        std::vector<std::vector<double>> dist(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i)
            dist[i] = graph.distances_from(sources[i]);

        for (std::size_t i = 0; i < sample.size(); ++i) {
            const auto [a, b] = sample[i];
            const Frame& fr = d.patches[sample_patch[i]].frame;
            const double proj = distance(fr.project(p.vertex(a)), fr.project(p.vertex(b)));
            const double geo = dist[std::lower_bound(sources.begin(), sources.end(), a) - sources.begin()][b];
            const double lower = geo / (1 + 2 * c.delta) * (1 - mu);
            ++pairs;
            upper_bad += geo >= proj * (1 - kRoundoff) ? 0 : 1;
            lower_bad += proj >= lower * (1 - kRoundoff) ? 0 : 1;
            worst_lower = std::min(worst_lower, proj / lower);
        }
    }
    return {pairs == kProjectionPairs && upper_bad == 0 && lower_bad == 0,
            fmt("%zu pairs, %zu above d, %zu below d/(1+2delta)(1-mu), min margin %.4f", pairs, upper_bad, lower_bad,
                worst_lower)};
}

// ---------------------------------------------------------------------------
// Criterion 8: size laws with constants fitted on seed 0.

Result scaling_laws()
{
    const std::vector<std::size_t> sizes{100, 200, 300};
    const std::vector<double> eps_values{0.2, 0.3, 0.4};
    struct Sample {
        double patches, reps, entries;
    };
    // Normalized quantities; the constants are their maxima on seed 0.
    const auto measure = [&](std::uint64_t seed) {
        std::vector<Sample> out;
        for (std::size_t n : sizes)
            for (double eps : eps_values) {
                const auto pre = preprocess(make_sphere_hull(n, seed), {.eps = eps});
                const double nn = double(n);
                out.push_back({double(pre.patches.patches.size()) * eps * eps,
                               double(pre.assignment.reps.size()) / std::min(nn, std::pow(eps, -3.0)),
                               double(pre.tables.entry_count()) / nn / std::min(nn, std::pow(eps, -1.5))});
            }
        return out;
    };
    Sample c{0, 0, 0};
    for (const auto& s : measure(0)) {
        c.patches = std::max(c.patches, s.patches);
        c.reps = std::max(c.reps, s.reps);
        c.entries = std::max(c.entries, s.entries);
    }
    Sample worst{0, 0, 0};
    std::size_t bad = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        for (const auto& s : measure(seed)) {
            worst.patches = std::max(worst.patches, s.patches / c.patches);
            worst.reps = std::max(worst.reps, s.reps / c.reps);
            worst.entries = std::max(worst.entries, s.entries / c.entries);
            bad += s.patches <= kScalingHeadroom * c.patches ? 0 : 1;
            bad += s.reps <= kScalingHeadroom * c.reps ? 0 : 1;
            bad += s.entries <= kScalingHeadroom * c.entries ? 0 : 1;
        }
    return {bad == 0, fmt("c1=%.3f c2=%.3f c3=%.2f; worst use of fitted constant on seeds 1-5: %.2f %.2f %.2f "
                          "(limit %.0f), %zu over",
                          c.patches, c.reps, c.entries, worst.patches, worst.reps, worst.entries, kScalingHeadroom,
                          bad)};
}

// ---------------------------------------------------------------------------
// Criterion 9: serialization.

Result serialization()
{
    std::mt19937_64 rng(9);
    std::size_t exact = 0, rejected = 0, corrupted = 0;
    for (std::size_t i = 0; i < kRoundTrips; ++i) {
        const std::size_t n = 8 + rng() % 120;
        const double eps = 0.2 + 0.5 * double(rng() % 1000) / 1000;
        PreprocessConfig cfg{.eps = eps};
        if (i % 2)
            cfg.seed = rng();
        const auto pre = preprocess(make_sphere_hull(n, rng()), cfg);
        const auto bytes = serialize(pre.tables);
        const auto back = deserialize(bytes);
        exact += back == pre.tables && serialize(back) == bytes ? 1 : 0;

        const auto rejects = [&](std::vector<std::uint8_t> b) {
            ++corrupted;
            try {
                deserialize(b);
            } catch (const Error&) {
                ++rejected;
            }
        };
        auto flip = bytes;
        flip[rng() % flip.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        rejects(flip);
        auto cut = bytes;
        cut.resize(rng() % bytes.size());
        rejects(cut);
        auto version = bytes;
        version[4] ^= 0x7;
        rejects(version);
    }
    return {exact == kRoundTrips && rejected == corrupted,
            fmt("%zu/%zu bit-exact round trips, %zu/%zu corrupted streams rejected", exact, kRoundTrips, rejected,
                corrupted)};
}

// ---------------------------------------------------------------------------
// Criterion 10: oracle sandwich and monotonicity.

Result oracle_sandwich()
{
    std::size_t pairs = 0, below = 0, above = 0, increases = 0;
    for (std::size_t n : kSweepSizes) {
        const auto p = make_sphere_hull(n, kMeshSeed);
        std::vector<VertexId> sources;
        for (const auto& [s, t] : random_pairs(n, 20, kPairSeed))
            sources.push_back(s);
        std::vector<SubdivisionGraph> graphs;
        for (std::size_t m : {0, 4, 16, 64})
            graphs.emplace_back(p, m);
        for (auto s : sources) {
            const auto de = edge_distances(p, s);
            std::vector<double> prev = de;
            for (const auto& g : graphs) {
                const auto d = g.distances_from(s);
                for (VertexId t = 0; t < n; ++t) {
                    if (t == s)
                        continue;
                    ++pairs;
                    below += d[t] >= distance(p.vertex(s), p.vertex(t)) * (1 - kRoundoff) ? 0 : 1;
                    above += d[t] <= de[t] * (1 + kRoundoff) ? 0 : 1;
                    increases += d[t] <= prev[t] * (1 + kRoundoff) ? 0 : 1;
                }
                prev = d;
            }
        }
    }
    return {below + above + increases == 0,
            fmt("%zu (pair, m) checks, %zu below |st|, %zu above edge distance, %zu increases with m", pairs, below,
                above, increases)};
}

// ---------------------------------------------------------------------------
// Preprocessing time trend.

Result time_trend()
{
    const std::vector<std::size_t> sizes{100, 200, 400};
    const double eps = 0.3;
    std::vector<double> times;
    for (std::size_t n : sizes) {
        const auto p = make_sphere_hull(n, kMeshSeed);
        std::vector<double> runs;
        for (int r = 0; r < 3; ++r) {
            const auto t0 = Clock::now();
            const auto pre = preprocess(p, {.eps = eps});
            runs.push_back(seconds_since(t0));
        }
        std::sort(runs.begin(), runs.end());
        times.push_back(runs[1]);
    }
    // Least-squares slope of log t against log n.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const double x = std::log(double(sizes[i])), y = std::log(times[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = double(sizes.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return {slope < kMaxTrendExponent,
            fmt("median times %.3fs %.3fs %.3fs at n=100,200,400; fitted exponent %.2f (limit %.0f)", times[0],
                times[1], times[2], slope, kMaxTrendExponent)};
}

} // namespace

int main()
{
    const auto t0 = Clock::now();
    const SweepTotals sw = run_sweep();
    const std::string err = sw.first_error.empty() ? "" : "; first error: " + sw.first_error;

    report(1, "locality",
           {sw.non_edges == 0 && sw.errors == 0 && sw.route_seconds < kLocalityBudgetSeconds,
            fmt("%zu routes, %zu hops, %zu non-edge hops, %zu errors, routing %.1fs (budget %.0fs)%s", sw.routes,
                sw.hops, sw.non_edges, sw.errors, sw.route_seconds, kLocalityBudgetSeconds, err.c_str())});
    report(2, "termination",
           {sw.unfinished == 0 && sw.over_limit == 0 && sw.errors == 0,
            fmt("%zu routes, %zu not at t, %zu over %zu*n hops, %zu errors", sw.routes, sw.unfinished, sw.over_limit,
                kHopFactor, sw.errors)});
    report(3, "stretch-bound",
           {sw.violations == 0 && sw.bound_pairs == sw.routes && sw.stretch_seconds < kStretchBudgetSeconds,
            fmt("%zu pairs, %zu violations, max route/bound %.4f, max route/oracle %.3f, %.1fs (budget %.0fs)",
                sw.bound_pairs, sw.violations, sw.worst_bound_use, sw.max_ratio, sw.stretch_seconds,
                kStretchBudgetSeconds)});
    report(4, "theta-spanner-stretch", theta_stretch());
    report(5, "landmark-stretch", scheme_stretch());
    report(6, "triangle-angle-bound", triangle_inequality());
    report(7, "projected-distance", projection_distances());
    report(8, "scaling-laws", scaling_laws());
    report(9, "serialization", serialization());
    report(10, "oracle-sandwich", oracle_sandwich());
    report_trend(time_trend());
    std::printf("%d criteria failed, total %.1fs\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
