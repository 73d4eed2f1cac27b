#pragma once

// Metric quantities of an inversive distance circle packing: edge lengths,
// compactness discriminants, orthogonal circles, signed center distances and
// the local weighted Delaunay predicate.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hidra/delta_complex.hpp"
#include "hidra/hyp_kernel.hpp"
#include "hidra/ptolemy.hpp"

namespace hidra
{

inline constexpr double tol_delaunay_default = 1e-10;

/// Inversive distance per edge id and radius per vertex id.
struct Packing {
    std::vector<double> inversive;
    std::vector<double> radius;
};

/// cosh l = cosh ri cosh rj + I sinh ri sinh rj
inline CoshLength edge_length(double ri, double rj, double inv)
{
    if (!(ri > 0.0) || !(rj > 0.0)) raise(ErrorKind::DomainError, "radii must be positive");
    if (!(inv > 1.0)) raise(ErrorKind::DomainError, "inversive distance must exceed 1");
    return CoshLength{std::cosh(ri) * std::cosh(rj) + inv * std::sinh(ri) * std::sinh(rj)};
}

inline double inversive_from_length(double ri, double rj, CoshLength len)
{
    return (len.value - std::cosh(ri) * std::cosh(rj)) / (std::sinh(ri) * std::sinh(rj));
}

/**
 * Compactness discriminant of a face from its radii and the inversive
 * distances opposite each corner (inv[0] joins corners 1, 2 and so on).
 * Tanh-radius form with the (1 - tanh^2)^-1 factors written as cosh^2.
 */
inline double xi_discriminant(const std::array<double, 3>& radii, const std::array<double, 3>& inv)
{
    const double si = std::sinh(radii[0]), sj = std::sinh(radii[1]), sk = std::sinh(radii[2]);
    const double ci = std::cosh(radii[0]), cj = std::cosh(radii[1]), ck = std::cosh(radii[2]);
    const double a = inv[0], b = inv[1], c = inv[2];
    return (1.0 - c * c) * si * si * sj * sj * ck * ck +
           (1.0 - b * b) * si * si * sk * sk * cj * cj +
           (1.0 - a * a) * sj * sj * sk * sk * ci * ci +
           2.0 * si * sj * sk *
               ((a + b * c) * si * cj * ck + (b + a * c) * sj * ci * ck +
                (c + a * b) * sk * ci * cj);
}

/// Same discriminant from cosh radii (p, q, r) and cosh side lengths (x, y, z) opposite them.
inline double xi_from_cosh(double p, double q, double r, double x, double y, double z)
{
    return p * p * (1.0 - x * x) + q * q * (1.0 - y * y) + r * r * (1.0 - z * z) +
           2.0 * p * q * (x * y - z) + 2.0 * p * r * (x * z - y) + 2.0 * q * r * (y * z - x);
}

/// sqrt(tanh^2 ri + tanh^2 rj + 2 I tanh ri tanh rj)
inline double auxiliary_length(double ri, double rj, double inv)
{
    const double ti = std::tanh(ri), tj = std::tanh(rj);
    return std::sqrt(ti * ti + tj * tj + 2.0 * inv * ti * tj);
}

/// Auxiliary lengths opposite each corner, slot-ordered like inv.
inline std::array<double, 3> auxiliary_lengths(const std::array<double, 3>& radii,
                                               const std::array<double, 3>& inv)
{
    return {auxiliary_length(radii[1], radii[2], inv[0]),
            auxiliary_length(radii[2], radii[0], inv[1]),
            auxiliary_length(radii[0], radii[1], inv[2])};
}

/// Heron-type factorization of the discriminant through the auxiliary lengths.
inline double xi_from_auxiliary(const std::array<double, 3>& radii,
                                const std::array<double, 3>& inv)
{
    const auto [x, y, z] = auxiliary_lengths(radii, inv);
    const double cosh2 = std::pow(std::cosh(radii[0]) * std::cosh(radii[1]) * std::cosh(radii[2]), 2);
    return 0.25 * (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z) * cosh2;
}

/// Per-face metric data; arrays are slot-ordered (index k refers to corner k or the side opposite it).
struct FaceMetrics {
    std::array<double, 3> radius{};
    std::array<double, 3> inversive{};
    std::array<double, 3> cosh_len{};  ///< x, y, z
    std::array<double, 3> cosh_rad{};  ///< p, q, r
    double xi{0.0};
    double delta{0.0};
    std::optional<double> rho;

    /// 1 + 2xyz - x^2 - y^2 - z^2
    double gram() const
    {
        const auto [x, y, z] = cosh_len;
        return 1.0 + 2.0 * x * y * z - x * x - y * y - z * z;
    }
};

inline double orthocircle_sinh_sq(const FaceMetrics& fm)
{
    double s2 = fm.delta / fm.xi;
    for (double r : fm.radius) s2 *= std::sinh(r) * std::sinh(r);
    return s2;
}

inline double orthocircle_cosh_sq(const FaceMetrics& fm) { return fm.gram() / fm.xi; }

/// Radius of the circle orthogonal to the three vertex circles.
inline double orthocircle_radius(const FaceMetrics& fm)
{
    if (!(fm.xi > 0.0)) {
        raise(ErrorKind::NonCompactOrthocircle,
              "orthogonal circle is not compact (xi = " + std::to_string(fm.xi) + ")");
    }
    return std::asinh(std::sqrt(orthocircle_sinh_sq(fm)));
}

inline FaceMetrics face_metrics(const std::array<double, 3>& radii,
                                const std::array<double, 3>& inv)
{
    FaceMetrics fm;
    fm.radius = radii;
    fm.inversive = inv;
    for (int k = 0; k < 3; ++k) {
        fm.cosh_rad[k] = std::cosh(radii[k]);
        fm.cosh_len[k] = edge_length(radii[next3(k)], radii[prev3(k)], inv[k]).value;
    }
    fm.xi = xi_discriminant(radii, inv);
    fm.delta = delta_discriminant(inv[0], inv[1], inv[2]);
    if (fm.xi > 0.0) fm.rho = orthocircle_radius(fm);
    return fm;
}

inline FaceMetrics face_metrics(const TriSurface& s, const Packing& pk, int f)
{
    const Face& fc = s.face(f);
    return face_metrics({pk.radius[fc.corners[0]], pk.radius[fc.corners[1]],
                         pk.radius[fc.corners[2]]},
                        {pk.inversive[fc.sides[0]], pk.inversive[fc.sides[1]],
                         pk.inversive[fc.sides[2]]});
}

/**
 * Signed distance from the orthogonal-circle center to side `slot`, positive
 * when the center lies on the same side as the opposite corner.
 */
inline double signed_center_distance(const FaceMetrics& fm, int slot)
{
    if (!(fm.xi > 0.0)) {
        raise(ErrorKind::NonCompactOrthocircle, "signed distance needs a compact orthogonal circle");
    }
    const int ci = next3(slot), cj = prev3(slot);
    const double y = fm.cosh_len[slot];  // ij
    const double a = fm.cosh_len[cj];    // ik, opposite j
    const double b = fm.cosh_len[ci];    // jk, opposite i
    const double num = (b * y - a) * fm.cosh_rad[ci] + (a * y - b) * fm.cosh_rad[cj] -
                       (y * y - 1.0) * fm.cosh_rad[slot];
    return std::asinh(num / std::sqrt((y * y - 1.0) * fm.xi));
}

/// Values of a hinge in the (a, b, c, d, e) labelling, radii at k, i, l, j.
struct HingeValues {
    double a{}, b{}, c{}, d{}, e{};
    double rk{}, ri{}, rl{}, rj{};

    double flip_value() const { return ptolemy_flip_value(a, b, c, d, e); }
    /// Face ijk as corners (k, i, j).
    FaceMetrics face_ijk() const { return face_metrics({rk, ri, rj}, {e, d, a}); }
    /// Face ijl as corners (l, j, i).
    FaceMetrics face_ijl() const { return face_metrics({rl, rj, ri}, {e, b, c}); }
};

inline HingeValues hinge_values(const TriSurface& s, const Packing& pk, const HingeView& h)
{
    HingeValues v;
    v.a = pk.inversive[h.ki()];
    v.b = pk.inversive[h.il()];
    v.c = pk.inversive[h.lj()];
    v.d = pk.inversive[h.jk()];
    v.e = pk.inversive[h.ij()];
    v.rk = pk.radius[h.k];
    v.ri = pk.radius[h.i];
    v.rl = pk.radius[h.l];
    v.rj = pk.radius[h.j];
    (void)s;
    return v;
}

inline HingeValues hinge_values(const TriSurface& s, const Packing& pk, int edge)
{
    return hinge_values(s, pk, hinge(s, edge));
}

/**
 * Right side minus left side of the hyperbolic local weighted Delaunay
 * inequality. Nonnegative means the diagonal is locally weighted Delaunay.
 */
inline double delaunay_margin(const HingeValues& h)
{
    const double f = h.flip_value();
    const double tk = std::tanh(h.rk), ti = std::tanh(h.ri);
    const double tl = std::tanh(h.rl), tj = std::tanh(h.rj);
    const double lhs = std::sqrt(delta_discriminant(h.b, h.c, h.e)) / tk +
                       std::sqrt(delta_discriminant(h.a, h.d, h.e)) / tl;
    const double rhs = std::sqrt(delta_discriminant(h.c, h.d, f)) / ti +
                       std::sqrt(delta_discriminant(h.a, h.b, f)) / tj;
    return rhs - lhs;
}

struct DelaunayTest {
    bool delaunay{true};
    double margin{0.0};
    /// sinh h_k / sinh rho_k + sinh h_l / sinh rho_l
    double center_ratio_sum{0.0};
    /// h_k + h_l
    double center_distance_sum{0.0};
};

/// Both routes of the local Delaunay test. Requires compact orthogonal circles on both faces.
inline DelaunayTest is_local_delaunay(const HingeValues& h, double tol = tol_delaunay_default)
{
    const FaceMetrics fk = h.face_ijk();
    const FaceMetrics fl = h.face_ijl();
    const double hk = signed_center_distance(fk, 0);
    const double hl = signed_center_distance(fl, 0);
    DelaunayTest t;
    t.margin = delaunay_margin(h);
    t.delaunay = t.margin >= -tol;
    t.center_ratio_sum = std::sinh(hk) / std::sinh(*fk.rho) + std::sinh(hl) / std::sinh(*fl.rho);
    t.center_distance_sum = hk + hl;
    return t;
}

inline DelaunayTest is_local_delaunay(const TriSurface& s, const Packing& pk, int edge,
                                      double tol = tol_delaunay_default)
{
    return is_local_delaunay(hinge_values(s, pk, edge), tol);
}

/// Face placed in the Poincare disk: corner 0 at the origin, corner 1 on the positive real axis.
struct DiskTriangle {
    std::array<std::complex<double>, 3> centers{};
    std::array<double, 3> radii{};  ///< hyperbolic radii of the vertex circles
};

/// cosh of the hyperbolic distance between two points of the Poincare disk.
inline double disk_cosh_distance(std::complex<double> z, std::complex<double> w)
{
    const double num = 2.0 * std::norm(z - w);
    return 1.0 + num / ((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
}

inline DiskTriangle develop_face_in_disk(const FaceMetrics& fm)
{
    const CoshLength x{fm.cosh_len[0]}, y{fm.cosh_len[1]}, z{fm.cosh_len[2]};
    const double theta0 = angle_from_sides(x, y, z).value;
    DiskTriangle t;
    t.radii = fm.radius;
    t.centers[0] = {0.0, 0.0};
    t.centers[1] = {std::tanh(0.5 * length_of(z)), 0.0};
    t.centers[2] = std::polar(std::tanh(0.5 * length_of(y)), theta0);
    return t;
}

/**
 * Operational weight-domain check: positive finite radii, inversive distances
 * above 1, and triangle inequalities on every face. Returns one message per
 * violation; empty means valid.
 */
inline std::vector<std::string> packing_issues(const TriSurface& s, const Packing& pk)
{
    std::vector<std::string> issues;
    if (static_cast<int>(pk.radius.size()) != s.vertex_count()) {
        issues.push_back("radius count does not match vertex count");
        return issues;
    }
    if (static_cast<int>(pk.inversive.size()) != s.edge_count()) {
        issues.push_back("inversive distance count does not match edge count");
        return issues;
    }
    for (int v = 0; v < s.vertex_count(); ++v) {
        if (!(pk.radius[v] > 0.0) || !std::isfinite(pk.radius[v])) {
            issues.push_back("vertices[" + std::to_string(v) + "].radius must be positive");
        }
    }
    for (int e = 0; e < s.edge_count(); ++e) {
        if (!(pk.inversive[e] > 1.0) || !std::isfinite(pk.inversive[e])) {
            issues.push_back("edges[" + std::to_string(e) +
                             "].inversive_distance must exceed 1");
        }
    }
    if (!issues.empty()) return issues;
    for (int f = 0; f < s.face_count(); ++f) {
        const FaceMetrics fm = face_metrics(s, pk, f);
        for (int k = 0; k < 3; ++k) {
            const double opp = fm.cosh_len[k];
            const double y = fm.cosh_len[next3(k)], z = fm.cosh_len[prev3(k)];
            // cosh x < cosh(y + z)
            if (!(opp < y * z + sinh_from_cosh(y) * sinh_from_cosh(z))) {
                issues.push_back("faces[" + std::to_string(f) + "] violates a triangle inequality");
                break;
            }
        }
    }
    return issues;
}

inline void check_packing(const TriSurface& s, const Packing& pk)
{
    const auto issues = packing_issues(s, pk);
    if (!issues.empty()) raise(ErrorKind::ValidationError, issues.front());
}

}  // namespace hidra
