#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "polyroute/error.hpp"

namespace polyroute {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr bool operator==(const Vec3&) const = default;
};

using Point3 = Vec3;

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

struct Point2 {
    double x = 0, y = 0;

    constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Point2&) const = default;
};

constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

// Snap distance is eps_abs + eps_rel * scale, where scale is the length the
// predicate is measured against (segment length, mesh diameter, ...).
struct Tolerance {
    double eps_abs = 1e-12;
    double eps_rel = 1e-9;

    double at(double scale) const { return eps_abs + eps_rel * std::abs(scale); }
};

// A plane stored as an anchor point plus two spanning directions; the unit
// normal (dir1 x dir2) is cached.
class Plane {
public:
    Plane() = default;

    // Throws DegenerateFace if dir1 and dir2 are (numerically) parallel.
    static Plane from_directions(const Point3& anchor, const Vec3& dir1, const Vec3& dir2);
    static Plane through_points(const Point3& a, const Point3& b, const Point3& c);

    // Plane containing a and b and the direction `face_normal`, i.e. the
    // plane through a and b orthogonal to any plane with that normal. When
    // b - a is parallel to the normal, any plane containing the segment is
    // orthogonal; a deterministic choice is made.
    static Plane orthogonal_through(const Point3& a, const Point3& b, const Vec3& face_normal);

    const Point3& anchor() const { return anchor_; }
    const Vec3& dir1() const { return dir1_; }
    const Vec3& dir2() const { return dir2_; }
    const Vec3& normal() const { return normal_; }

    Point3 point1() const { return anchor_ + dir1_; }
    Point3 point2() const { return anchor_ + dir2_; }

    double signed_distance(const Point3& p) const { return dot(p - anchor_, normal_); }

    bool operator==(const Plane& o) const
    {
        return anchor_ == o.anchor_ && dir1_ == o.dir1_ && dir2_ == o.dir2_;
    }

private:
    Plane(const Point3& a, const Vec3& d1, const Vec3& d2, const Vec3& n)
        : anchor_(a), dir1_(d1), dir2_(d2), normal_(n) {}

    Point3 anchor_{};
    Vec3 dir1_{1, 0, 0};
    Vec3 dir2_{0, 1, 0};
    Vec3 normal_{0, 0, 1};
};

struct SegmentHit {
    enum class Kind { NoHit, Interior, AtA, AtB };

    Kind kind = Kind::NoHit;
    Point3 point{};
    double u = 0;  // point = a + u (b - a)

    bool hit() const { return kind != Kind::NoHit; }
};

// Endpoint snapping takes priority over an interior hit. An endpoint whose
// signed distance is within tol.at(|ab|) is reported as AtA / AtB (A first).
SegmentHit segment_plane_intersect(const Point3& a, const Point3& b, const Plane& h,
                                   const Tolerance& tol = {});

using Triangle = std::array<Point3, 3>;

double triangle_area(const Triangle& t);

// Interior angle at corner `at` (0, 1 or 2). Throws DegenerateFace.
double corner_angle(const Triangle& face, int at, const Tolerance& tol = {});

// Proper rigid motion x -> R x + t.
struct RigidMap {
    std::array<Vec3, 3> rows{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    Vec3 offset{};

    static RigidMap identity() { return {}; }

    Point3 apply(const Point3& p) const
    {
        return Point3{dot(rows[0], p), dot(rows[1], p), dot(rows[2], p)} + offset;
    }
    Vec3 rotate(const Vec3& v) const { return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)}; }

    // (this ∘ inner)(x) = this(inner(x))
    RigidMap compose(const RigidMap& inner) const;
};

// Rotation about the line through edge (a, b) that carries the half-plane
// containing `g_side` onto the half-plane opposite `f_side`, i.e. flattens
// the dihedral at the edge.
RigidMap unfold_about_edge(const Point3& a, const Point3& b, const Point3& f_side,
                           const Point3& g_side, const Tolerance& tol = {});

// Maps the plane of triangle g onto the plane of triangle f, fixing their
// shared edge pointwise. Throws NotAdjacent unless they share exactly one edge.
RigidMap unfold_across_edge(const Triangle& f, const Triangle& g, const Tolerance& tol = {});

// Orthonormal frame on a plane; used for 2D work on sketch faces.
struct Frame {
    Point3 origin{};
    Vec3 e1{1, 0, 0};
    Vec3 e2{0, 1, 0};
    Vec3 n{0, 0, 1};

    static Frame from_plane(const Plane& p);

    Point2 to_local(const Point3& p) const
    {
        const Vec3 d = p - origin;
        return {dot(d, e1), dot(d, e2)};
    }
    Point3 to_world(const Point2& q) const { return origin + e1 * q.x + e2 * q.y; }
    Point3 project(const Point3& p) const { return p - n * dot(p - origin, n); }
};

} // namespace polyroute
