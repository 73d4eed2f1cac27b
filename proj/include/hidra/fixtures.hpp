#pragma once

// Bundled triangulations and random packings used by the tests, the
// acceptance suite and the CLI verify command.

#include <cmath>
#include <random>
#include <utility>

#include "hidra/delta_complex.hpp"
#include "hidra/packing_geom.hpp"

namespace hidra::fixtures
{

/// Radius with tanh r = 1/2; with I = 2 every torus face is equilateral with cosh side 2.
inline const double symmetric_radius = std::atanh(0.5);

/// One vertex, three loop edges, two faces.
inline RawMesh one_vertex_torus_mesh()
{
    RawMesh m;
    m.vertex_count = 1;
    m.edges = {{0, 0}, {0, 0}, {0, 0}};
    m.faces = {Face{{0, 0, 0}, {1, 2, 0}}, Face{{0, 0, 0}, {0, 1, 2}}};
    return m;
}

/**
 * Genus-2 surface from the octagon a b a^-1 b^-1 c d c^-1 d^-1 fanned from one
 * corner. Edges 0..3 are a, b, c, d; edges 4..8 are the fan diagonals.
 */
inline RawMesh genus2_octagon_mesh()
{
    RawMesh m;
    m.vertex_count = 1;
    m.edges.assign(9, {0, 0});
    const int side[8] = {0, 1, 0, 1, 2, 3, 2, 3};
    auto diag = [&](int j) {
        if (j == 1) return side[0];
        if (j == 7) return side[7];
        return 2 + j;
    };
    for (int j = 1; j <= 6; ++j) m.faces.push_back(Face{{0, 0, 0}, {side[j], diag(j + 1), diag(j)}});
    return m;
}

/// Inserts a vertex inside face f and joins it to the three corners.
inline RawMesh split_face(RawMesh m, int f)
{
    const Face old = m.faces.at(f);
    const int w = m.vertex_count++;
    const int g0 = static_cast<int>(m.edges.size());
    const int g1 = g0 + 1, g2 = g0 + 2;
    for (int k = 0; k < 3; ++k) m.edges.push_back({w, old.corners[k]});
    const auto [v0, v1, v2] = old.corners;
    const auto [e0, e1, e2] = old.sides;
    m.faces[f] = Face{{w, v1, v2}, {e0, g2, g1}};
    m.faces.push_back(Face{{w, v2, v0}, {e1, g0, g2}});
    m.faces.push_back(Face{{w, v0, v1}, {e2, g1, g0}});
    return m;
}

/// Genus 2 with three vertices: the octagon fan with two faces split.
inline RawMesh genus2_three_vertex_mesh() { return split_face(split_face(genus2_octagon_mesh(), 0), 3); }

inline RawMesh two_triangle_sphere_mesh()
{
    RawMesh m;
    m.vertex_count = 3;
    m.edges = {{0, 1}, {1, 2}, {2, 0}};
    m.faces = {Face{{0, 1, 2}, {1, 2, 0}}, Face{{0, 2, 1}, {1, 0, 2}}};
    return m;
}

/// Two squares glued along their boundary, diagonals 0-2 on top and 1-3 below.
inline RawMesh square_pillow_mesh()
{
    RawMesh m;
    m.vertex_count = 4;
    m.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}};
    m.faces = {Face{{0, 1, 2}, {1, 4, 0}}, Face{{0, 2, 3}, {2, 3, 4}},
               Face{{1, 0, 3}, {3, 5, 0}}, Face{{1, 3, 2}, {2, 1, 5}}};
    return m;
}

inline Packing uniform_packing(const TriSurface& s, double radius, double inversive)
{
    return Packing{std::vector<double>(static_cast<std::size_t>(s.edge_count()), inversive),
                   std::vector<double>(static_cast<std::size_t>(s.vertex_count()), radius)};
}

struct RandomPackingRange {
    double radius_min{0.2}, radius_max{2.0};
    double inversive_min{1.01}, inversive_max{8.0};
};

/// Rejection sample of a packing satisfying every face triangle inequality.
template <class Rng>
Packing random_packing(const TriSurface& s, Rng& rng, const RandomPackingRange& range = {})
{
    std::uniform_real_distribution<double> rd(range.radius_min, range.radius_max);
    std::uniform_real_distribution<double> id(range.inversive_min, range.inversive_max);
    for (;;) {
        Packing pk;
        for (int v = 0; v < s.vertex_count(); ++v) pk.radius.push_back(rd(rng));
        for (int e = 0; e < s.edge_count(); ++e) pk.inversive.push_back(id(rng));
        if (packing_issues(s, pk).empty()) return pk;
    }
}

}  // namespace hidra::fixtures
