#pragma once

// Delta-complex triangulations of closed oriented surfaces. Faces carry their
// corner vertices and side edges explicitly; loops, multi-edges and
// self-glued faces are allowed. Side k of a face is opposite corner k and
// is traversed from corner k+1 to corner k+2.

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "hidra/errors.hpp"

namespace hidra
{

struct Face {
    std::array<int, 3> corners{};
    std::array<int, 3> sides{};

    friend bool operator==(const Face&, const Face&) = default;
};

struct FaceSlot {
    int face{-1};
    int side{-1};
};

/// Unvalidated description of a triangulation.
struct RawMesh {
    int vertex_count{0};
    std::vector<std::array<int, 2>> edges;
    std::vector<Face> faces;
};

inline constexpr int next3(int k) { return k == 2 ? 0 : k + 1; }
inline constexpr int prev3(int k) { return k == 0 ? 2 : k - 1; }

namespace detail
{
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n))
    {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace detail

class TriSurface
{
public:
    /// Validates a raw description. Throws Error with a topology kind on failure.
    static TriSurface build(RawMesh raw)
    {
        TriSurface s;
        s.raw_ = std::move(raw);
        s.validate();
        return s;
    }

    int vertex_count() const { return raw_.vertex_count; }
    int edge_count() const { return static_cast<int>(raw_.edges.size()); }
    int face_count() const { return static_cast<int>(raw_.faces.size()); }

    const std::array<int, 2>& edge_ends(int e) const { return raw_.edges.at(e); }
    const Face& face(int f) const { return raw_.faces.at(f); }
    const std::vector<Face>& faces() const { return raw_.faces; }
    const std::array<FaceSlot, 2>& slots(int e) const { return slots_.at(e); }
    const RawMesh& raw() const { return raw_; }

    int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }

    /// Vertices sharing an edge, loops excluded.
    bool adjacent(int a, int b) const
    {
        for (const auto& e : raw_.edges) {
            if ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)) return true;
        }
        return false;
    }

private:
    TriSurface() = default;

    void validate()
    {
        const int nv = raw_.vertex_count;
        const int ne = edge_count();
        const int nf = face_count();
        if (nv <= 0) raise(ErrorKind::InconsistentIncidence, "vertex_count must be positive");
        if (nf == 0) raise(ErrorKind::NotClosed, "no faces");

        for (int e = 0; e < ne; ++e) {
            for (int end : raw_.edges[e]) {
                if (end < 0 || end >= nv) {
                    raise(ErrorKind::InconsistentIncidence,
                          "edge " + std::to_string(e) + " references missing vertex");
                }
            }
        }

        std::vector<std::vector<FaceSlot>> incidences(static_cast<std::size_t>(ne));
        for (int f = 0; f < nf; ++f) {
            const Face& fc = raw_.faces[f];
            for (int k = 0; k < 3; ++k) {
                const int v = fc.corners[k];
                const int e = fc.sides[k];
                if (v < 0 || v >= nv) {
                    raise(ErrorKind::InconsistentIncidence,
                          "face " + std::to_string(f) + " references missing vertex");
                }
                if (e < 0 || e >= ne) {
                    raise(ErrorKind::InconsistentIncidence,
                          "face " + std::to_string(f) + " references missing edge");
                }
                incidences[e].push_back({f, k});
            }
        }

        slots_.assign(static_cast<std::size_t>(ne), {});
        for (int e = 0; e < ne; ++e) {
            if (incidences[e].size() != 2) {
                raise(ErrorKind::NotClosed, "edge " + std::to_string(e) + " has " +
                                                std::to_string(incidences[e].size()) +
                                                " face slots");
            }
            slots_[e] = {incidences[e][0], incidences[e][1]};
        }

        for (int f = 0; f < nf; ++f) {
            const Face& fc = raw_.faces[f];
            for (int k = 0; k < 3; ++k) {
                const auto& ends = raw_.edges[fc.sides[k]];
                const int a = fc.corners[next3(k)];
                const int b = fc.corners[prev3(k)];
                const bool ok = (ends[0] == a && ends[1] == b) || (ends[0] == b && ends[1] == a);
                if (!ok) {
                    raise(ErrorKind::InconsistentIncidence,
                          "face " + std::to_string(f) + " side " + std::to_string(k) +
                              " does not join its corners");
                }
            }
        }

        // Slots of a non-loop edge must traverse it in opposite directions.
        for (int e = 0; e < ne; ++e) {
            if (raw_.edges[e][0] == raw_.edges[e][1]) continue;
            const auto [s0, s1] = slots_[e];
            const int from0 = raw_.faces[s0.face].corners[next3(s0.side)];
            const int from1 = raw_.faces[s1.face].corners[next3(s1.side)];
            if (from0 == from1) {
                raise(ErrorKind::NotOrientable,
                      "edge " + std::to_string(e) + " is traversed twice in the same direction");
            }
        }

        // Gluing every edge orientation-reversingly identifies corners; each class
        // must carry a single vertex id and each vertex must have one class.
        detail::UnionFind uf(3 * nf);
        for (int e = 0; e < ne; ++e) {
            const auto [s0, s1] = slots_[e];
            uf.unite(3 * s0.face + next3(s0.side), 3 * s1.face + prev3(s1.side));
            uf.unite(3 * s0.face + prev3(s0.side), 3 * s1.face + next3(s1.side));
        }
        std::vector<int> class_vertex(static_cast<std::size_t>(3 * nf), -1);
        std::vector<int> vertex_class(static_cast<std::size_t>(nv), -1);
        for (int f = 0; f < nf; ++f) {
            for (int k = 0; k < 3; ++k) {
                const int c = uf.find(3 * f + k);
                const int v = raw_.faces[f].corners[k];
                if (class_vertex[c] == -1) class_vertex[c] = v;
                if (class_vertex[c] != v) {
                    raise(ErrorKind::InconsistentIncidence,
                          "gluing identifies vertices " + std::to_string(class_vertex[c]) +
                              " and " + std::to_string(v));
                }
                if (vertex_class[v] == -1) vertex_class[v] = c;
                if (vertex_class[v] != c) {
                    raise(ErrorKind::InconsistentIncidence,
                          "vertex " + std::to_string(v) + " has a disconnected link");
                }
            }
        }
        for (int v = 0; v < nv; ++v) {
            if (vertex_class[v] == -1) {
                raise(ErrorKind::InconsistentIncidence,
                      "vertex " + std::to_string(v) + " is not a face corner");
            }
        }

        detail::UnionFind faces_uf(nf);
        for (int e = 0; e < ne; ++e) faces_uf.unite(slots_[e][0].face, slots_[e][1].face);
        for (int f = 1; f < nf; ++f) {
            if (faces_uf.find(f) != faces_uf.find(0)) {
                raise(ErrorKind::InconsistentIncidence, "surface is not connected");
            }
        }

        // chi(S \ V) = chi(S) - |V| < 0
        if (euler_characteristic() - nv >= 0) {
            raise(ErrorKind::NotTriangulable,
                  "punctured Euler characteristic " +
                      std::to_string(euler_characteristic() - nv) + " is not negative");
        }
    }

    RawMesh raw_;
    std::vector<std::array<FaceSlot, 2>> slots_;
};

inline TriSurface build_surface(RawMesh raw) { return TriSurface::build(std::move(raw)); }

inline int euler_characteristic(const TriSurface& s) { return s.euler_characteristic(); }

/**
 * Hinge around edge e_ij. Face ijk is traversed k -> i -> j and face ijl is
 * traversed l -> j -> i, so the quadrilateral reads k, i, l, j counterclockwise.
 * Edge slots follow (a, b, c, d, e) = (ki, il, lj, jk, ij).
 */
struct HingeView {
    int edge{-1};
    int face_ijk{-1};
    int face_ijl{-1};
    int side_ijk{-1};
    int side_ijl{-1};
    int k{-1}, i{-1}, l{-1}, j{-1};
    std::array<int, 5> edges{};

    int ki() const { return edges[0]; }
    int il() const { return edges[1]; }
    int lj() const { return edges[2]; }
    int jk() const { return edges[3]; }
    int ij() const { return edges[4]; }
};

inline HingeView hinge(const TriSurface& s, int e)
{
    if (e < 0 || e >= s.edge_count()) {
        raise(ErrorKind::DomainError, "edge id out of range: " + std::to_string(e));
    }
    const auto [sa, sb] = s.slots(e);
    const Face& fa = s.face(sa.face);
    const Face& fb = s.face(sb.face);

    HingeView h;
    h.edge = e;
    h.face_ijk = sa.face;
    h.face_ijl = sb.face;
    h.side_ijk = sa.side;
    h.side_ijl = sb.side;
    h.k = fa.corners[sa.side];
    h.i = fa.corners[next3(sa.side)];
    h.j = fa.corners[prev3(sa.side)];
    h.l = fb.corners[sb.side];
    h.edges = {
        fa.sides[prev3(sa.side)],  // ki, opposite j
        fb.sides[next3(sb.side)],  // il, opposite j in face (l, j, i)
        fb.sides[prev3(sb.side)],  // lj, opposite i
        fa.sides[next3(sa.side)],  // jk, opposite i
        e,
    };
    return h;
}

/**
 * Replaces hinge (ij; kl) by (kl; ij). The edge keeps its id and now joins k
 * and l; the two faces keep their ids and slot positions of the diagonal.
 */
inline TriSurface flip_combinatorial(const TriSurface& s, int e)
{
    const HingeView h = hinge(s, e);
    if (h.face_ijk == h.face_ijl) {
        raise(ErrorKind::FlipIllegal,
              "edge " + std::to_string(e) + " borders the same face on both sides");
    }
    RawMesh raw = s.raw();
    raw.edges[e] = {h.k, h.l};

    // Face ijk becomes (i, l, k) rotated so the diagonal stays at side_ijk.
    Face& fa = raw.faces[h.face_ijk];
    const int sa = h.side_ijk;
    fa.corners[sa] = h.i;
    fa.corners[next3(sa)] = h.l;
    fa.corners[prev3(sa)] = h.k;
    fa.sides[sa] = e;
    fa.sides[next3(sa)] = h.ki();
    fa.sides[prev3(sa)] = h.il();

    // Face ijl becomes (j, k, l).
    Face& fb = raw.faces[h.face_ijl];
    const int sb = h.side_ijl;
    fb.corners[sb] = h.j;
    fb.corners[next3(sb)] = h.k;
    fb.corners[prev3(sb)] = h.l;
    fb.sides[sb] = e;
    fb.sides[next3(sb)] = h.lj();
    fb.sides[prev3(sb)] = h.jk();

    try {
        return TriSurface::build(std::move(raw));
    } catch (const Error& err) {
        raise(ErrorKind::FlipIllegal, "flip of edge " + std::to_string(e) + ": " + err.what());
    }
}

/**
 * Same vertex count, same edge endpoints per id, and the same faces up to
 * reindexing and cyclic rotation.
 */
inline bool same_complex(const TriSurface& a, const TriSurface& b)
{
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
        a.face_count() != b.face_count()) {
        return false;
    }
    for (int e = 0; e < a.edge_count(); ++e) {
        auto ea = a.edge_ends(e);
        auto eb = b.edge_ends(e);
        std::sort(ea.begin(), ea.end());
        std::sort(eb.begin(), eb.end());
        if (ea != eb) return false;
    }
    auto canonical = [](const TriSurface& s) {
        std::vector<std::array<int, 6>> out;
        for (const Face& f : s.faces()) {
            std::array<int, 6> best{};
            for (int r = 0; r < 3; ++r) {
                std::array<int, 6> cand{};
                for (int k = 0; k < 3; ++k) {
                    cand[2 * k] = f.corners[(k + r) % 3];
                    cand[2 * k + 1] = f.sides[(k + r) % 3];
                }
                if (r == 0 || cand < best) best = cand;
            }
            out.push_back(best);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    return canonical(a) == canonical(b);
}

}  // namespace hidra
