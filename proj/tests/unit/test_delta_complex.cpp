#include <gtest/gtest.h>

#include <random>

#include "hidra/delta_complex.hpp"
#include "hidra/fixtures.hpp"

using namespace hidra;
namespace fx = hidra::fixtures;

namespace
{

ErrorKind kind_of(const RawMesh& m)
{
    try {
        build_surface(m);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a build error";
    return ErrorKind::DomainError;
}

}  // namespace

TEST(BuildSurface, OneVertexTorus)
{
    const TriSurface s = build_surface(fx::one_vertex_torus_mesh());
    EXPECT_EQ(s.vertex_count(), 1);
    EXPECT_EQ(s.edge_count(), 3);
    EXPECT_EQ(s.face_count(), 2);
    EXPECT_EQ(euler_characteristic(s), 0);
    EXPECT_EQ(euler_characteristic(s) - s.vertex_count(), -1);
}

TEST(BuildSurface, Genus2AndSplits)
{
    const TriSurface g = build_surface(fx::genus2_octagon_mesh());
    EXPECT_EQ(g.edge_count(), 9);
    EXPECT_EQ(g.face_count(), 6);
    EXPECT_EQ(euler_characteristic(g), -2);
    const TriSurface g3 = build_surface(fx::genus2_three_vertex_mesh());
    EXPECT_EQ(g3.vertex_count(), 3);
    EXPECT_EQ(euler_characteristic(g3), -2);
}

TEST(BuildSurface, SpheresWithEnoughVertices)
{
    EXPECT_EQ(euler_characteristic(build_surface(fx::two_triangle_sphere_mesh())), 2);
    EXPECT_EQ(euler_characteristic(build_surface(fx::square_pillow_mesh())), 2);
}

TEST(BuildSurface, RejectsThirdSlot)
{
    RawMesh m = fx::one_vertex_torus_mesh();
    m.faces.push_back(Face{{0, 0, 0}, {0, 1, 2}});
    EXPECT_EQ(kind_of(m), ErrorKind::NotClosed);
}

TEST(BuildSurface, RejectsUnusedEdge)
{
    RawMesh m = fx::one_vertex_torus_mesh();
    m.edges.push_back({0, 0});
    EXPECT_EQ(kind_of(m), ErrorKind::NotClosed);
}

TEST(BuildSurface, RejectsDanglingIds)
{
    RawMesh m = fx::square_pillow_mesh();
    m.faces[0].sides[0] = 42;
    EXPECT_EQ(kind_of(m), ErrorKind::InconsistentIncidence);
    RawMesh m2 = fx::square_pillow_mesh();
    m2.edges[0] = {0, 9};
    EXPECT_EQ(kind_of(m2), ErrorKind::InconsistentIncidence);
}

TEST(BuildSurface, RejectsSideNotJoiningCorners)
{
    RawMesh m = fx::square_pillow_mesh();
    std::swap(m.faces[0].sides[0], m.faces[0].sides[1]);
    EXPECT_EQ(kind_of(m), ErrorKind::InconsistentIncidence);
}

TEST(BuildSurface, RejectsInconsistentOrientation)
{
    RawMesh m = fx::two_triangle_sphere_mesh();
    m.faces[1] = Face{{0, 1, 2}, {1, 2, 0}};
    EXPECT_EQ(kind_of(m), ErrorKind::NotOrientable);
}

TEST(BuildSurface, PuncturedCharacteristicIsMinusHalfFaces)
{
    for (const RawMesh& m : {fx::one_vertex_torus_mesh(), fx::genus2_three_vertex_mesh(),
                             fx::two_triangle_sphere_mesh(), fx::square_pillow_mesh()}) {
        const TriSurface s = build_surface(m);
        EXPECT_EQ(2 * (euler_characteristic(s) - s.vertex_count()), -s.face_count());
    }
}

TEST(Hinge, TorusSlotsAllVertexZero)
{
    const TriSurface s = build_surface(fx::one_vertex_torus_mesh());
    for (int e = 0; e < 3; ++e) {
        const HingeView h = hinge(s, e);
        EXPECT_EQ(h.k, 0);
        EXPECT_EQ(h.i, 0);
        EXPECT_EQ(h.l, 0);
        EXPECT_EQ(h.j, 0);
        EXPECT_NE(h.face_ijk, h.face_ijl);
        EXPECT_EQ(h.ij(), e);
    }
}

TEST(Hinge, PillowDiagonalHasDistinctApexes)
{
    const TriSurface s = build_surface(fx::square_pillow_mesh());
    const HingeView h = hinge(s, 4);  // edge 0-2
    EXPECT_NE(h.k, h.l);
    EXPECT_EQ(std::min(h.i, h.j), 0);
    EXPECT_EQ(std::max(h.i, h.j), 2);
    EXPECT_EQ(std::min(h.k, h.l), 1);
    EXPECT_EQ(std::max(h.k, h.l), 3);
    // Boundary edges join the claimed endpoints.
    auto joins = [&](int e, int u, int v) {
        const auto ends = s.edge_ends(e);
        return (ends[0] == u && ends[1] == v) || (ends[0] == v && ends[1] == u);
    };
    EXPECT_TRUE(joins(h.ki(), h.k, h.i));
    EXPECT_TRUE(joins(h.il(), h.i, h.l));
    EXPECT_TRUE(joins(h.lj(), h.l, h.j));
    EXPECT_TRUE(joins(h.jk(), h.j, h.k));
}

TEST(Flip, PillowRelabelsHingeCyclically)
{
    const TriSurface s = build_surface(fx::square_pillow_mesh());
    const HingeView h = hinge(s, 4);
    const TriSurface t = flip_combinatorial(s, 4);
    const HingeView g = hinge(t, 4);
    // The flipped hinge is the quadrilateral (k, i, l, j) read from a new start.
    const std::array<int, 4> before{h.k, h.i, h.l, h.j};
    const std::array<int, 4> after{g.k, g.i, g.l, g.j};
    const std::array<int, 4> be{h.ki(), h.il(), h.lj(), h.jk()};
    const std::array<int, 4> ae{g.ki(), g.il(), g.lj(), g.jk()};
    bool rotated = false;
    for (int r = 0; r < 4; ++r) {
        bool ok = true;
        for (int q = 0; q < 4; ++q) {
            ok = ok && after[q] == before[(q + r) % 4] && ae[q] == be[(q + r) % 4];
        }
        rotated = rotated || ok;
    }
    EXPECT_TRUE(rotated);
    EXPECT_EQ(std::min(t.edge_ends(4)[0], t.edge_ends(4)[1]), 1);
}

TEST(Flip, InvolutionAndEulerInvariance)
{
    for (const RawMesh& m : {fx::one_vertex_torus_mesh(), fx::genus2_octagon_mesh(),
                             fx::genus2_three_vertex_mesh(), fx::square_pillow_mesh()}) {
        const TriSurface s = build_surface(m);
        for (int e = 0; e < s.edge_count(); ++e) {
            const TriSurface t = flip_combinatorial(s, e);
            EXPECT_EQ(t.vertex_count(), s.vertex_count());
            EXPECT_EQ(t.edge_count(), s.edge_count());
            EXPECT_EQ(t.face_count(), s.face_count());
            EXPECT_EQ(euler_characteristic(t), euler_characteristic(s));
            EXPECT_TRUE(same_complex(flip_combinatorial(t, e), s));
        }
    }
}

TEST(Flip, RandomWalkStaysValid)
{
    std::mt19937_64 rng(2024);
    TriSurface s = build_surface(fx::genus2_three_vertex_mesh());
    std::uniform_int_distribution<int> pick(0, s.edge_count() - 1);
    int done = 0;
    for (int t = 0; t < 200; ++t) {
        const int e = pick(rng);
        try {
            s = flip_combinatorial(s, e);
            ++done;
        } catch (const Error& err) {
            EXPECT_EQ(err.kind(), ErrorKind::FlipIllegal);
        }
    }
    EXPECT_GT(done, 100);
    EXPECT_EQ(euler_characteristic(s), -2);
}

TEST(SameComplex, DetectsDifference)
{
    const TriSurface s = build_surface(fx::square_pillow_mesh());
    EXPECT_TRUE(same_complex(s, s));
    EXPECT_FALSE(same_complex(s, flip_combinatorial(s, 4)));
}
