#pragma once

// Hyperbolic trigonometry on cosh-valued lengths. Every routine here is a pure
// function; lengths are stored as cosh values and converted only at the edges.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "hidra/errors.hpp"

namespace hidra
{

inline constexpr double tol_domain = 1e-12;
inline constexpr double pi = std::numbers::pi;

/// Hyperbolic cosine of a geodesic length (>= 1).
struct CoshLength {
    double value{1.0};
    constexpr CoshLength() = default;
    constexpr explicit CoshLength(double v) : value{v} {}
};

/// Interior angle in radians.
struct Angle {
    double value{0.0};
    constexpr Angle() = default;
    constexpr explicit Angle(double v) : value{v} {}
};

/// sinh of the length whose cosh is c, via sqrt((c-1)(c+1)); clamps tiny negatives.
inline double sinh_from_cosh(double c)
{
    return std::sqrt(std::max(0.0, (c - 1.0) * (c + 1.0)));
}

/// acosh accurate near 1: log1p(t + sqrt(t (2 + t))) with t = x - 1.
inline double acosh_stable(double x)
{
    if (!(x >= 1.0 - tol_domain)) {
        raise(ErrorKind::DomainError, "acosh argument below 1: " + std::to_string(x));
    }
    const double t = std::max(0.0, x - 1.0);
    return std::log1p(t + std::sqrt(t * (2.0 + t)));
}

inline double length_of(CoshLength c) { return acosh_stable(c.value); }

/**
 * Angle opposite the side with cosh-length x in the triangle with cosh-sides
 * (x, y, z): cos(alpha) = (y z - x) / (sinh y sinh z).
 */
inline Angle angle_from_sides(CoshLength x, CoshLength y, CoshLength z)
{
    const double sy = sinh_from_cosh(y.value);
    const double sz = sinh_from_cosh(z.value);
    if (!(sy > 0.0) || !(sz > 0.0)) {
        raise(ErrorKind::DegenerateTriangle, "adjacent side of zero length");
    }
    const double c = (y.value * z.value - x.value) / (sy * sz);
    if (!(std::abs(c) <= 1.0 + tol_domain)) {
        raise(ErrorKind::DegenerateTriangle,
              "triangle inequality violated (cos = " + std::to_string(c) + ")");
    }
    return Angle{std::acos(std::clamp(c, -1.0, 1.0))};
}

/// Dual cosine law: cosh of the side opposite alpha.
inline CoshLength side_from_angles(Angle alpha, Angle beta, Angle gamma)
{
    if (!(alpha.value + beta.value + gamma.value < pi)) {
        raise(ErrorKind::DomainError, "angle sum must be below pi");
    }
    const double num = std::cos(beta.value) * std::cos(gamma.value) + std::cos(alpha.value);
    return CoshLength{num / (std::sin(beta.value) * std::sin(gamma.value))};
}

/// Right-angled hexagon with alternating sides x, y, z: cosh of the side opposite x.
inline CoshLength hexagon_side(CoshLength x, CoshLength y, CoshLength z)
{
    if (!(y.value > 1.0) || !(z.value > 1.0)) {
        raise(ErrorKind::DomainError, "hexagon sides must have positive length");
    }
    return CoshLength{(y.value * z.value + x.value) /
                      (sinh_from_cosh(y.value) * sinh_from_cosh(z.value))};
}

/// Quadrilateral with right angles at both ends of x; a, b are the legs, y the far side.
inline CoshLength quad_two_right(double a, double b, CoshLength y)
{
    if (a < 0.0 || b < 0.0) {
        raise(ErrorKind::DomainError, "quadrilateral legs must be nonnegative");
    }
    return CoshLength{(std::sinh(a) * std::sinh(b) + y.value) / (std::cosh(a) * std::cosh(b))};
}

/// Tetragon ABCD with right angles at A, B, C. Returns (cosh AB, cosh CD).
inline std::pair<CoshLength, CoshLength> quad_three_right(double ad, double bc)
{
    if (!(bc > 0.0) || std::tanh(ad) < std::tanh(bc)) {
        raise(ErrorKind::DomainError, "requires 0 < BC <= AD");
    }
    return {CoshLength{std::tanh(ad) / std::tanh(bc)}, CoshLength{std::sinh(ad) / std::sinh(bc)}};
}

/// Angle defect of a hyperbolic triangle.
inline double triangle_area(Angle alpha, Angle beta, Angle gamma)
{
    const double sum = alpha.value + beta.value + gamma.value;
    if (!(sum < pi)) {
        raise(ErrorKind::DomainError, "angle sum must be below pi");
    }
    return pi - sum;
}

/**
 * Developed hinge with cosh-lengths u = |PQ|, v = |QR|, w = |RS|, x = |SP| and
 * diagonal y = |QS|. Returns z = cosh |PR| through the angle sum at Q.
 */
inline CoshLength hinge_diagonal(CoshLength u, CoshLength v, CoshLength w, CoshLength x,
                                 CoshLength y)
{
    const double alpha = angle_from_sides(x, u, y).value;
    const double beta = angle_from_sides(w, v, y).value;
    const double z = u.value * v.value -
                     std::cos(alpha + beta) * sinh_from_cosh(u.value) * sinh_from_cosh(v.value);
    return CoshLength{z};
}

/**
 * Quartic relation between the six cosh-lengths of a developed hinge. Returns
 * the residual divided by the sum of absolute monomials.
 */
inline double hinge_identity_residual(double u, double v, double w, double x, double y, double z)
{
    const double terms[] = {
        u * u * w * w, v * v * x * x, y * y * z * z, -u * u, -v * v, -w * w, -x * x, -y * y,
        -z * z, 1.0, -2.0 * u * v * w * x, -2.0 * u * w * y * z, -2.0 * v * x * y * z,
        2.0 * v * w * y, 2.0 * u * x * y, 2.0 * u * v * z, 2.0 * w * x * z,
    };
    double sum = 0.0;
    double scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale += std::abs(t);
    }
    return sum / scale;
}

}  // namespace hidra
