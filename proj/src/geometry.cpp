#include "polyroute/geometry.hpp"

#include <algorithm>

namespace polyroute {

namespace {

Vec3 any_perpendicular(const Vec3& v)
{
    const Vec3 ax = std::abs(v.x) <= std::abs(v.y) && std::abs(v.x) <= std::abs(v.z)
                        ? Vec3{1, 0, 0}
                        : (std::abs(v.y) <= std::abs(v.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    return normalized(cross(v, ax));
}

Vec3 reject(const Vec3& v, const Vec3& unit_axis) { return v - unit_axis * dot(v, unit_axis); }

} // namespace

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonTriangular: return "NonTriangular";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::UnboundedSketch: return "UnboundedSketch";
    case ErrorCode::DisconnectedSpanner: return "DisconnectedSpanner";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::TrivialRoute: return "TrivialRoute";
    case ErrorCode::NoExitFace: return "NoExitFace";
    case ErrorCode::HopLimitExceeded: return "HopLimitExceeded";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Plane Plane::from_directions(const Point3& anchor, const Vec3& dir1, const Vec3& dir2)
{
    const Vec3 n = cross(dir1, dir2);
    const double scale = norm(dir1) * norm(dir2);
    if (!(norm(n) > 1e-12 * scale) || scale == 0)
        throw Error(ErrorCode::DegenerateFace, "plane directions are parallel");
    return Plane(anchor, dir1, dir2, normalized(n));
}

Plane Plane::through_points(const Point3& a, const Point3& b, const Point3& c)
{
    return from_directions(a, b - a, c - a);
}

Plane Plane::orthogonal_through(const Point3& a, const Point3& b, const Vec3& face_normal)
{
    const Vec3 n = normalized(face_normal);
    const Vec3 d1 = b - a;
    const double len = norm(d1);
    if (len == 0)
        return from_directions(a, any_perpendicular(n), n);
    if (norm(cross(d1, n)) <= 1e-9 * len)
        return from_directions(a, d1, any_perpendicular(d1));
    return from_directions(a, d1, n);
}

SegmentHit segment_plane_intersect(const Point3& a, const Point3& b, const Plane& h,
                                   const Tolerance& tol)
{
    const double len = distance(a, b);
    if (len <= tol.eps_abs)
        throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");

    const double sa = h.signed_distance(a);
    const double sb = h.signed_distance(b);
    const double snap = tol.at(len);

    SegmentHit hit;
    if (std::abs(sa) <= snap) {
        hit.kind = SegmentHit::Kind::AtA;
        hit.point = a;
        hit.u = 0;
    } else if (std::abs(sb) <= snap) {
        hit.kind = SegmentHit::Kind::AtB;
        hit.point = b;
        hit.u = 1;
    } else if ((sa < 0) != (sb < 0)) {
        hit.kind = SegmentHit::Kind::Interior;
        hit.u = sa / (sa - sb);
        hit.point = a + (b - a) * hit.u;
    }
    return hit;
}

double triangle_area(const Triangle& t) { return 0.5 * norm(cross(t[1] - t[0], t[2] - t[0])); }

double corner_angle(const Triangle& face, int at, const Tolerance& tol)
{
    const double longest = std::max({distance(face[0], face[1]), distance(face[1], face[2]),
                                     distance(face[2], face[0])});
    const double height = longest > 0 ? 2 * triangle_area(face) / longest : 0;
    if (!(height > tol.at(longest)))
        throw Error(ErrorCode::DegenerateFace, "triangle is degenerate");

    const Point3& p = face[static_cast<std::size_t>(at % 3)];
    const Vec3 u = face[static_cast<std::size_t>((at + 1) % 3)] - p;
    const Vec3 v = face[static_cast<std::size_t>((at + 2) % 3)] - p;
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

RigidMap RigidMap::compose(const RigidMap& inner) const
{
    RigidMap out;
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec3 c0{inner.rows[0].x, inner.rows[1].x, inner.rows[2].x};
        const Vec3 c1{inner.rows[0].y, inner.rows[1].y, inner.rows[2].y};
        const Vec3 c2{inner.rows[0].z, inner.rows[1].z, inner.rows[2].z};
        out.rows[i] = {dot(rows[i], c0), dot(rows[i], c1), dot(rows[i], c2)};
    }
    out.offset = rotate(inner.offset) + offset;
    return out;
}

RigidMap unfold_about_edge(const Point3& a, const Point3& b, const Point3& f_side,
                           const Point3& g_side, const Tolerance& tol)
{
    const double len = distance(a, b);
    if (len <= tol.eps_abs)
        throw Error(ErrorCode::DegenerateSegment, "unfold edge has zero length");
    const Vec3 u = (b - a) / len;
    const Vec3 rf = reject(f_side - a, u);
    const Vec3 rg = reject(g_side - a, u);
    if (norm(rf) <= tol.at(len) || norm(rg) <= tol.at(len))
        throw Error(ErrorCode::DegenerateFace, "unfold side point lies on the edge");

    // Source basis (u, pg, u x pg) goes to target basis (u, -pf, u x -pf).
    const Vec3 pg = normalized(rg);
    const Vec3 tf = -normalized(rf);
    const std::array<Vec3, 3> src{u, pg, cross(u, pg)};
    const std::array<Vec3, 3> dst{u, tf, cross(u, tf)};

    RigidMap m;
    for (std::size_t i = 0; i < 3; ++i) {
        auto comp = [i](const Vec3& v) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); };
        m.rows[i] = src[0] * comp(dst[0]) + src[1] * comp(dst[1]) + src[2] * comp(dst[2]);
    }
    m.offset = a - m.rotate(a);
    return m;
}

RigidMap unfold_across_edge(const Triangle& f, const Triangle& g, const Tolerance& tol)
{
    double scale = 0;
    for (const auto& p : f)
        for (const auto& q : g)
            scale = std::max(scale, distance(p, q));
    const double snap = tol.at(scale);

    std::array<bool, 3> f_shared{}, g_shared{};
    int shared = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (!g_shared[j] && distance(f[i], g[j]) <= snap) {
                f_shared[i] = g_shared[j] = true;
                ++shared;
                break;
            }
    if (shared != 2)
        throw Error(ErrorCode::NotAdjacent, "faces do not share exactly one edge");

    std::size_t fa = 3, fb = 3, fo = 0, go = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (f_shared[i])
            (fa == 3 ? fa : fb) = i;
        else
            fo = i;
        if (!g_shared[i])
            go = i;
    }
    return unfold_about_edge(f[fa], f[fb], f[fo], g[go], tol);
}

Frame Frame::from_plane(const Plane& p)
{
    Frame fr;
    fr.origin = p.anchor();
    fr.n = p.normal();
    fr.e1 = normalized(p.dir1());
    fr.e2 = cross(fr.n, fr.e1);
    return fr;
}

} // namespace polyroute
