#include "polyroute/polytope.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <numbers>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace polyroute {

namespace {

std::uint64_t directed_key(VertexId a, VertexId b)
{
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

} // namespace

TriangulatedPolytope TriangulatedPolytope::build(std::vector<Point3> vertices,
                                                 std::vector<std::array<VertexId, 3>> faces,
                                                 const Tolerance& tol)
{
    TriangulatedPolytope p;
    p.tol_ = tol;
    const auto n = vertices.size();
    if (n < 4 || faces.size() < 4)
        fail(ErrorCode::NotClosed, "a closed polytope needs at least 4 vertices and 4 faces");

    std::vector<char> used(n, 0);
    for (const auto& f : faces) {
        for (auto v : f) {
            if (v >= n)
                fail(ErrorCode::ParseError,
                     "face references vertex " + std::to_string(v) + " out of range");
            used[v] = 1;
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            fail(ErrorCode::DegenerateFace, "face repeats a vertex");
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!used[v])
            fail(ErrorCode::ParseError, "vertex " + std::to_string(v) + " is not used by any face");

    Point3 c{};
    for (const auto& v : vertices)
        c += v;
    c = c / static_cast<double>(n);

    double diam = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            diam = std::max(diam, distance(vertices[i], vertices[j]));
    if (!(diam > 0))
        fail(ErrorCode::DegenerateFace, "mesh has zero extent");

    p.vertices_ = std::move(vertices);
    p.centroid_ = c;
    p.diameter_ = diam;
    const double snap = tol.at(diam);

    p.normals_.reserve(faces.size());
    for (auto& f : faces) {
        const Triangle t{p.vertices_[f[0]], p.vertices_[f[1]], p.vertices_[f[2]]};
        Vec3 nrm = cross(t[1] - t[0], t[2] - t[0]);
        const double twice_area = norm(nrm);
        const double longest =
            std::max({distance(t[0], t[1]), distance(t[1], t[2]), distance(t[2], t[0])});
        if (!(twice_area / longest > snap))
            fail(ErrorCode::DegenerateFace, "face has (near) zero area");
        const Point3 fc = (t[0] + t[1] + t[2]) / 3.0;
        if (dot(nrm, fc - c) < 0) {
            std::swap(f[1], f[2]);
            nrm = -nrm;
        }
        p.normals_.push_back(nrm / twice_area);
        p.area_ += 0.5 * twice_area;
    }
    p.faces_ = std::move(faces);

    std::unordered_map<std::uint64_t, FaceId> directed;
    directed.reserve(p.faces_.size() * 3);
    for (FaceId fi = 0; fi < p.faces_.size(); ++fi) {
        const auto& f = p.faces_[fi];
        for (std::size_t k = 0; k < 3; ++k)
            if (!directed.emplace(directed_key(f[k], f[(k + 1) % 3]), fi).second)
                fail(ErrorCode::NotClosed,
                     "an edge bounds more than two faces or orientation is inconsistent");
    }

    for (const auto& [key, fi] : directed) {
        const auto a = static_cast<VertexId>(key >> 32);
        const auto b = static_cast<VertexId>(key & 0xFFFFFFFFu);
        const auto twin = directed.find(directed_key(b, a));
        if (twin == directed.end())
            fail(ErrorCode::NotClosed, "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                           ") bounds only one face");
        if (a < b)
            p.edges_.push_back(Edge{a, b, fi, twin->second});
    }
    std::sort(p.edges_.begin(), p.edges_.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

    const auto euler = static_cast<long long>(n) - static_cast<long long>(p.edges_.size()) +
                       static_cast<long long>(p.faces_.size());
    if (euler != 2)
        fail(ErrorCode::NotClosed, "Euler characteristic is " + std::to_string(euler) + ", not 2");

    p.vertex_edges_.assign(n, {});
    for (EdgeId e = 0; e < p.edges_.size(); ++e) {
        p.vertex_edges_[p.edges_[e].a].emplace_back(p.edges_[e].b, e);
        p.vertex_edges_[p.edges_[e].b].emplace_back(p.edges_[e].a, e);
    }
    for (auto& ve : p.vertex_edges_)
        std::sort(ve.begin(), ve.end());

    p.face_edges_.resize(p.faces_.size());
    for (FaceId fi = 0; fi < p.faces_.size(); ++fi) {
        const auto& f = p.faces_[fi];
        for (std::size_t k = 0; k < 3; ++k)
            p.face_edges_[fi][k] = p.find_edge(f[(k + 1) % 3], f[(k + 2) % 3]);
    }

    // Convexity: every vertex on the inner side of every face plane.
    for (FaceId fi = 0; fi < p.faces_.size(); ++fi) {
        const Point3& a = p.vertices_[p.faces_[fi][0]];
        const Vec3& nrm = p.normals_[fi];
        for (VertexId v = 0; v < n; ++v)
            if (dot(p.vertices_[v] - a, nrm) > snap)
                fail(ErrorCode::NonConvex, "vertex " + std::to_string(v) +
                                               " lies outside the plane of face " +
                                               std::to_string(fi));
    }

    // Counter-clockwise fans: after face (v, a, b) comes the face holding v -> b.
    std::vector<FaceId> any_face(n, kNone);
    std::vector<std::size_t> incidence(n, 0);
    for (FaceId fi = 0; fi < p.faces_.size(); ++fi)
        for (auto v : p.faces_[fi]) {
            any_face[v] = std::min(any_face[v], fi);
            ++incidence[v];
        }
    p.fans_.assign(n, {});
    p.rings_.assign(n, {});
    for (VertexId v = 0; v < n; ++v) {
        FaceId f = any_face[v];
        do {
            const auto& tri = p.faces_[f];
            const std::size_t k = tri[0] == v ? 0 : (tri[1] == v ? 1 : 2);
            p.fans_[v].push_back(f);
            p.rings_[v].push_back(tri[(k + 1) % 3]);
            f = directed.at(directed_key(v, tri[(k + 2) % 3]));
            if (p.fans_[v].size() > incidence[v])
                break;
        } while (f != any_face[v]);
        if (p.fans_[v].size() != incidence[v])
            fail(ErrorCode::NotClosed, "vertex " + std::to_string(v) + " is not a manifold vertex");
    }
    return p;
}

Triangle TriangulatedPolytope::face_points(FaceId f) const
{
    const auto& t = faces_[f];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

EdgeId TriangulatedPolytope::find_edge(VertexId u, VertexId v) const
{
    if (u >= vertex_edges_.size())
        return kNone;
    const auto& ve = vertex_edges_[u];
    const auto it = std::lower_bound(ve.begin(), ve.end(), std::make_pair(v, EdgeId{0}));
    return it != ve.end() && it->first == v ? it->second : kNone;
}

bool TriangulatedPolytope::adjacent(VertexId u, VertexId v) const { return find_edge(u, v) != kNone; }

FaceId TriangulatedPolytope::face_with_directed_edge(VertexId a, VertexId b) const
{
    const EdgeId e = find_edge(a, b);
    if (e == kNone)
        return kNone;
    return a < b ? edges_[e].left : edges_[e].right;
}

FaceId TriangulatedPolytope::opposite_face(FaceId f, VertexId v) const
{
    const auto& t = faces_[f];
    const std::size_t k = t[0] == v ? 0 : (t[1] == v ? 1 : 2);
    const Edge& e = edges_[face_edges_[f][k]];
    return e.left == f ? e.right : e.left;
}

VertexId TriangulatedPolytope::third_vertex(FaceId f, VertexId a, VertexId b) const
{
    for (auto v : faces_[f])
        if (v != a && v != b)
            return v;
    return kNone;
}

TriangulatedPolytope load_off(std::istream& in, const Tolerance& tol)
{
    // Tokenize, dropping '#' comments.
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok)
            tokens.push_back(tok);
    }

    std::size_t pos = 0;
    auto next = [&](const char* what) -> const std::string& {
        if (pos >= tokens.size())
            fail(ErrorCode::ParseError, std::string("unexpected end of input reading ") + what);
        return tokens[pos++];
    };
    auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        double d = 0;
        try {
            d = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || !std::isfinite(d))
            fail(ErrorCode::ParseError, "invalid number '" + s + "'");
        return d;
    };
    auto to_count = [](const std::string& s) -> std::size_t {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) {
                return std::isdigit(ch) != 0;
            }))
            fail(ErrorCode::ParseError, "invalid integer '" + s + "'");
        return std::stoull(s);
    };

    if (next("header") != "OFF")
        fail(ErrorCode::ParseError, "missing OFF header");
    const auto nv = to_count(next("vertex count"));
    const auto nf = to_count(next("face count"));
    (void)to_count(next("edge count"));

    std::vector<Point3> verts;
    verts.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const double x = to_double(next("vertex"));
        const double y = to_double(next("vertex"));
        const double z = to_double(next("vertex"));
        verts.push_back({x, y, z});
    }
    std::vector<std::array<VertexId, 3>> faces;
    faces.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        const auto k = to_count(next("face"));
        if (k != 3)
            fail(ErrorCode::NonTriangular,
                 "face " + std::to_string(i) + " has " + std::to_string(k) + " vertices");
        std::array<VertexId, 3> f{};
        for (auto& v : f) {
            const auto idx = to_count(next("face index"));
            if (idx >= nv)
                fail(ErrorCode::ParseError, "face index out of range");
            v = static_cast<VertexId>(idx);
        }
        faces.push_back(f);
    }
    return TriangulatedPolytope::build(std::move(verts), std::move(faces), tol);
}

TriangulatedPolytope load_off(std::string_view text, const Tolerance& tol)
{
    std::istringstream in{std::string(text)};
    return load_off(in, tol);
}

std::string to_off(const TriangulatedPolytope& p)
{
    std::string out = "OFF\n" + std::to_string(p.vertex_count()) + " " +
                      std::to_string(p.face_count()) + " " + std::to_string(p.edge_count()) + "\n";
    char buf[96];
    for (const auto& v : p.vertices()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const auto& f : p.faces()) {
        std::snprintf(buf, sizeof buf, "3 %u %u %u\n", f[0], f[1], f[2]);
        out += buf;
    }
    return out;
}

bool DualGraph::connected() const
{
    if (adjacency.empty())
        return true;
    std::vector<char> seen(adjacency.size(), 0);
    std::vector<FaceId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const FaceId f = stack.back();
        stack.pop_back();
        for (auto g : adjacency[f])
            if (!seen[g]) {
                seen[g] = 1;
                ++count;
                stack.push_back(g);
            }
    }
    return count == adjacency.size();
}

DualGraph dual_graph(const TriangulatedPolytope& p)
{
    DualGraph g;
    g.adjacency.resize(p.face_count());
    for (FaceId f = 0; f < p.face_count(); ++f)
        for (std::size_t k = 0; k < 3; ++k)
            g.adjacency[f][k] = p.opposite_face(f, p.face(f)[k]);
    g.edge_count = p.edge_count();
    return g;
}

PolytopeMetrics compute_theta_m(const TriangulatedPolytope& p)
{
    PolytopeMetrics m;
    m.n = p.vertex_count();
    m.mesh_diameter = p.diameter();
    double min_corner = std::numbers::pi;
    for (FaceId f = 0; f < p.face_count(); ++f)
        for (int k = 0; k < 3; ++k)
            min_corner = std::min(min_corner, corner_angle(p.face_points(f), k, p.tolerance()));

    double min_pair = 2 * std::numbers::pi;
    for (VertexId v = 0; v < p.vertex_count(); ++v) {
        const auto& fan = p.vertex_fan(v);
        std::vector<double> corners;
        for (auto f : fan) {
            const auto& t = p.face(f);
            const int k = t[0] == v ? 0 : (t[1] == v ? 1 : 2);
            corners.push_back(corner_angle(p.face_points(f), k, p.tolerance()));
        }
        for (std::size_t i = 0; i < corners.size(); ++i)
            min_pair = std::min(min_pair, corners[i] + corners[(i + 1) % corners.size()]);
    }
    m.min_corner_angle = min_corner;
    m.theta_m = 0.5 * min_corner;
    m.theta_m_fan = 0.5 * min_pair;
    return m;
}

} // namespace polyroute
