#pragma once

// Generalized Ptolemy relation between the six inversive distances of a hinge
// quadrilateral: boundary a = ki, b = il, c = lj, d = jk, old diagonal e = ij
// and new diagonal f = kl.

#include <algorithm>
#include <cmath>
#include <utility>

#include "hidra/errors.hpp"

namespace hidra
{

/// a^2 + b^2 + c^2 + 2abc - 1
inline double delta_discriminant(double a, double b, double c)
{
    return a * a + b * b + c * c + 2.0 * a * b * c - 1.0;
}

/// Inversive distance of the new diagonal after flipping e.
inline double ptolemy_flip_value(double a, double b, double c, double d, double e)
{
    if (!(e > 1.0)) {
        raise(ErrorKind::DomainError, "diagonal inversive distance must exceed 1");
    }
    const double num = a * b + c * d + a * c * e + b * d * e +
                       std::sqrt(delta_discriminant(a, d, e)) *
                           std::sqrt(delta_discriminant(b, c, e));
    return num / ((e - 1.0) * (e + 1.0));
}

namespace detail
{
template <class F>
inline void ptolemy_monomials(double a, double b, double c, double d, double e, double f, F&& emit)
{
    emit(a * a);
    emit(b * b);
    emit(c * c);
    emit(d * d);
    emit(e * e);
    emit(f * f);
    emit(2.0 * a * d * e);
    emit(2.0 * b * c * e);
    emit(2.0 * a * b * f);
    emit(2.0 * c * d * f);
    emit(2.0 * a * b * c * d);
    emit(2.0 * a * c * e * f);
    emit(2.0 * b * d * e * f);
    emit(-a * a * c * c);
    emit(-b * b * d * d);
    emit(-e * e * f * f);
    emit(-1.0);
}
}  // namespace detail

/// Left side of the generalized Ptolemy equation; zero for consistent sextuples.
inline double ptolemy_residual(double a, double b, double c, double d, double e, double f)
{
    double sum = 0.0;
    detail::ptolemy_monomials(a, b, c, d, e, f, [&](double t) { sum += t; });
    return sum;
}

/// ptolemy_residual scaled by the sum of absolute monomials.
inline double ptolemy_relative_residual(double a, double b, double c, double d, double e,
                                        double f)
{
    double sum = 0.0;
    double scale = 0.0;
    detail::ptolemy_monomials(a, b, c, d, e, f, [&](double t) {
        sum += t;
        scale += std::abs(t);
    });
    return sum / scale;
}

/**
 * Relative residuals of the two square-root identities satisfied by the flip
 * value: sqrt(D_abf) and sqrt(D_cdf) expressed through sqrt(D_bce), sqrt(D_ade).
 */
inline std::pair<double, double> delta_identity_residuals(double a, double b, double c, double d,
                                                          double e, double f)
{
    const double s_bce = std::sqrt(delta_discriminant(b, c, e));
    const double s_ade = std::sqrt(delta_discriminant(a, d, e));
    const double denom = (e - 1.0) * (e + 1.0);
    auto rel = [](double lhs, double rhs) {
        return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
    };
    const double abf = std::sqrt(std::max(0.0, delta_discriminant(a, b, f)));
    const double cdf = std::sqrt(std::max(0.0, delta_discriminant(c, d, f)));
    return {rel(abf, ((d + a * e) * s_bce + (c + b * e) * s_ade) / denom),
            rel(cdf, ((a + d * e) * s_bce + (b + c * e) * s_ade) / denom)};
}

}  // namespace hidra
