#include <doctest.h>

#include <numbers>

#include "polyroute/patching.hpp"
#include "polyroute/shapes.hpp"

using namespace polyroute;

TEST_CASE("cube splits into its six square sides")
{
    const auto p = make_cube();
    const auto d = compute_patches(p, 0.1);
    REQUIRE(d.patches.size() == 6);
    for (const auto& patch : d.patches) {
        CHECK(patch.faces.size() == 2);
        CHECK(patch.vertices.size() == 4);
        CHECK(patch.normal_cone_width < 1e-12);
    }
}

TEST_CASE("tetrahedron faces stay separate")
{
    CHECK(compute_patches(make_tetrahedron(), 0.01).patches.size() == 4);
}

TEST_CASE("delta of pi gives one patch")
{
    CHECK(compute_patches(make_cube(), std::numbers::pi).patches.size() == 1);
    CHECK(compute_patches(make_sphere_hull(80, 2), std::numbers::pi).patches.size() == 1);
}

TEST_CASE("delta must be positive")
{
    CHECK_THROWS_AS(compute_patches(make_cube(), 0), Error);
}

TEST_CASE("patch normals are pairwise delta-close and patches partition the faces")
{
    for (double delta : {0.2, 0.5, 1.0}) {
        const auto p = make_sphere_hull(200, 4);
        const auto d = compute_patches(p, delta);
        std::vector<int> seen(p.face_count(), 0);
        for (const auto& patch : d.patches) {
            for (auto f : patch.faces) {
                ++seen[f];
                CHECK(d.patch_of_face[f] == patch.id);
            }
            for (auto f : patch.faces)
                for (auto g : patch.faces) {
                    const auto [fx, fz] = normal_angles(p.face_normal(f));
                    const auto [gx, gz] = normal_angles(p.face_normal(g));
                    CHECK(std::abs(fx - gx) <= delta + 1e-9);
                    CHECK(std::abs(fz - gz) <= delta + 1e-9);
                }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
}

TEST_CASE("every vertex is homed on a patch it touches")
{
    const auto p = make_sphere_hull(120, 6);
    const auto d = compute_patches(p, 0.4);
    for (VertexId v = 0; v < p.vertex_count(); ++v) {
        const auto& patch = d.patches[d.home_patch[v]];
        CHECK(std::binary_search(patch.vertices.begin(), patch.vertices.end(), v));
        CHECK(std::binary_search(patch.home_vertices.begin(), patch.home_vertices.end(), v));
        for (auto f : p.vertex_fan(v))
            CHECK(d.home_patch[v] <= d.patch_of_face[f]);
    }
}

TEST_CASE("sketch of a tetrahedron is the tetrahedron")
{
    const auto p = make_tetrahedron();
    const auto d = compute_patches(p, 0.01);
    const auto s = build_sketch(p, d);
    CHECK(s.bounded);
    for (const auto& face : s.faces) {
        REQUIRE(face.polygon3d.size() == 3);
        const auto tri = p.face_points(d.patches[face.patch].rep_face);
        for (const auto& corner : face.polygon3d) {
            double best = 1e9;
            for (const auto& t : tri)
                best = std::min(best, distance(corner, t));
            CHECK(best < 1e-9);
        }
        for (auto label : face.edge_neighbor)
            CHECK(label >= 0);
    }
}

TEST_CASE("sketch of a cube is the cube")
{
    const auto p = make_cube();
    const auto s = build_sketch(p, compute_patches(p, 0.1));
    CHECK(s.bounded);
    REQUIRE(s.faces.size() == 6);
    for (const auto& face : s.faces) {
        CHECK(face.polygon.size() == 4);
        CHECK(face.area() == doctest::Approx(1.0));
    }
}

TEST_CASE("sketch of a single patch is only bounded by the frame")
{
    const auto p = make_cube();
    const auto s = build_sketch(p, compute_patches(p, std::numbers::pi));
    CHECK_FALSE(s.bounded);
    REQUIRE(s.faces.size() == 1);
    for (auto label : s.faces[0].edge_neighbor)
        CHECK(label == -1);
}

TEST_CASE("sketch contains the polytope")
{
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto p = make_sphere_hull(100, seed);
        const auto s = build_sketch(p, compute_patches(p, 0.5));
        for (const auto& v : p.vertices())
            CHECK(s.contains(v, p.snap()));
        for (const auto& face : s.faces)
            CHECK(face.area() > 0);
    }
}

TEST_CASE("sketch face edges lie on the neighbouring supporting plane")
{
    const auto p = make_sphere_hull(100, 9);
    const auto d = compute_patches(p, 0.5);
    const auto s = build_sketch(p, d);
    for (const auto& face : s.faces)
        for (std::size_t k = 0; k < face.polygon3d.size(); ++k) {
            const auto label = face.edge_neighbor[k];
            if (label < 0)
                continue;
            const Plane& other = d.patches[static_cast<std::size_t>(label)].gamma;
            CHECK(std::abs(other.signed_distance(face.polygon3d[k])) < 1e-9);
            CHECK(std::abs(other.signed_distance(face.polygon3d[(k + 1) % face.polygon3d.size()])) < 1e-9);
        }
}

TEST_CASE("projection of a single face is the identity on its corners")
{
    const auto p = make_tetrahedron();
    const auto d = compute_patches(p, 0.01);
    for (PatchId id = 0; id < d.patches.size(); ++id) {
        const auto proj = project_patch(p, d, id);
        REQUIRE(proj.points.size() == 3);
        for (const auto& pv : proj.points) {
            CHECK(pv.displacement < 1e-12);
            CHECK(distance(pv.projected, p.vertex(pv.vertex)) < 1e-12);
        }
    }
}

TEST_CASE("coplanar cube pair projects without displacement")
{
    const auto p = make_cube();
    const auto d = compute_patches(p, 0.1);
    const auto proj = project_patch(p, d, 0);
    REQUIRE(proj.points.size() == 4);
    for (const auto& pv : proj.points)
        CHECK(pv.displacement < 1e-12);
    CHECK(proj.find(proj.points[2].vertex) == &proj.points[2]);
    CHECK(proj.find(kNone - 1) == nullptr);
}

TEST_CASE("projection displacement is bounded by patch flatness")
{
    for (double delta : {0.2, 0.4}) {
        const auto p = make_sphere_hull(300, 1);
        const auto d = compute_patches(p, delta);
        for (PatchId id = 0; id < d.patches.size(); ++id)
            for (const auto& pv : project_patch(p, d, id).points)
                CHECK(pv.displacement <= p.diameter() * std::sin(delta) + 1e-12);
    }
}
