#pragma once

// Discrete curvature, u-coordinates and the analytic Jacobian dK/du.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hidra/delta_complex.hpp"
#include "hidra/hyp_kernel.hpp"
#include "hidra/packing_geom.hpp"

namespace hidra
{

struct CurvatureData {
    std::vector<double> K;
    double total_area{0.0};
    std::vector<std::array<double, 3>> angles;  ///< per face, slot-ordered
    std::vector<double> face_area;
};

/// Interior angles of a face with cosh side lengths opposite each slot.
inline std::array<double, 3> face_angles(const std::array<double, 3>& len)
{
    std::array<double, 3> th{};
    for (int k = 0; k < 3; ++k) {
        th[k] = angle_from_sides(CoshLength{len[k]}, CoshLength{len[next3(k)]},
                                 CoshLength{len[prev3(k)]})
                    .value;
    }
    return th;
}

inline std::array<double, 3> face_cosh_lengths(const TriSurface& s, const Packing& pk, int f)
{
    const Face& fc = s.face(f);
    std::array<double, 3> len{};
    for (int k = 0; k < 3; ++k) {
        len[k] = edge_length(pk.radius[fc.corners[next3(k)]], pk.radius[fc.corners[prev3(k)]],
                             pk.inversive[fc.sides[k]])
                     .value;
    }
    return len;
}

inline CurvatureData curvatures(const TriSurface& s, const Packing& pk)
{
    CurvatureData out;
    out.K.assign(static_cast<std::size_t>(s.vertex_count()), 2.0 * pi);
    out.angles.resize(static_cast<std::size_t>(s.face_count()));
    out.face_area.resize(static_cast<std::size_t>(s.face_count()));
    for (int f = 0; f < s.face_count(); ++f) {
        const auto th = face_angles(face_cosh_lengths(s, pk, f));
        out.angles[f] = th;
        for (int k = 0; k < 3; ++k) out.K[s.face(f).corners[k]] -= th[k];
        out.face_area[f] = pi - th[0] - th[1] - th[2];
        out.total_area += out.face_area[f];
    }
    return out;
}

/// sum K - 2 pi chi - area
inline double gauss_bonnet_residual(const TriSurface& s, const CurvatureData& c)
{
    double sum = 0.0;
    for (double k : c.K) sum += k;
    return sum - 2.0 * pi * s.euler_characteristic() - c.total_area;
}

inline double u_of_radius(double r)
{
    if (!(r > 0.0)) raise(ErrorKind::DomainError, "radius must be positive");
    return std::log(std::tanh(0.5 * r));
}

inline double radius_of_u(double u)
{
    if (!(u < 0.0)) raise(ErrorKind::DomainError, "u-coordinate must be negative");
    return 2.0 * std::atanh(std::exp(u));
}

inline std::vector<double> u_from_r(const std::vector<double>& r)
{
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) u[i] = u_of_radius(r[i]);
    return u;
}

inline std::vector<double> r_from_u(const std::vector<double>& u)
{
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = radius_of_u(u[i]);
    return r;
}

/**
 * Raw Jacobian dK_i/du_j on a fixed triangulation, by the chain rule through
 * the cosine law, the length map and dr/du = sinh r. Loop edges contribute
 * once per endpoint slot.
 */
inline Eigen::MatrixXd curvature_jacobian(const TriSurface& s, const Packing& pk)
{
    const int n = s.vertex_count();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int f = 0; f < s.face_count(); ++f) {
        const Face& fc = s.face(f);
        const auto len = face_cosh_lengths(s, pk, f);
        const auto th = face_angles(len);

        // dX_m / du at each end of side m.
        std::array<std::array<double, 2>, 3> dlen{};
        for (int m = 0; m < 3; ++m) {
            const double ra = pk.radius[fc.corners[next3(m)]];
            const double rb = pk.radius[fc.corners[prev3(m)]];
            const double inv = pk.inversive[fc.sides[m]];
            dlen[m][0] = (std::sinh(ra) * std::cosh(rb) + inv * std::cosh(ra) * std::sinh(rb)) *
                         std::sinh(ra);
            dlen[m][1] = (std::sinh(rb) * std::cosh(ra) + inv * std::cosh(rb) * std::sinh(ra)) *
                         std::sinh(rb);
        }

        for (int k = 0; k < 3; ++k) {
            const double x = len[k], y = len[next3(k)], z = len[prev3(k)];
            const double sy = sinh_from_cosh(y), sz = sinh_from_cosh(z);
            const double sin_t = std::sin(th[k]);
            if (!(sin_t > 0.0)) raise(ErrorKind::DegenerateTriangle, "flat corner angle");
            // d theta / d(cosh side) for the opposite side and the two adjacent ones.
            std::array<double, 3> g{};
            g[k] = (1.0 / (sy * sz)) / sin_t;
            g[next3(k)] = -((x * y - z) / (sy * sy * sy * sz)) / sin_t;
            g[prev3(k)] = -((x * z - y) / (sy * sz * sz * sz)) / sin_t;

            const int vk = fc.corners[k];
            for (int m = 0; m < 3; ++m) {
                J(vk, fc.corners[next3(m)]) -= g[m] * dlen[m][0];
                J(vk, fc.corners[prev3(m)]) -= g[m] * dlen[m][1];
            }
        }
    }
    return J;
}

/// Symmetrized dK/du.
inline Eigen::MatrixXd hessian(const TriSurface& s, const Packing& pk)
{
    const Eigen::MatrixXd J = curvature_jacobian(s, pk);
    return 0.5 * (J + J.transpose());
}

/// +1 if every eigenvalue is positive, -1 if every one is negative, 0 otherwise.
inline int spectrum_sign(const Eigen::MatrixXd& H)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() > 0.0) return 1;
    if (ev.maxCoeff() < 0.0) return -1;
    return 0;
}

/// Throws TargetOutOfRange unless every target is below 2 pi and the sum exceeds 2 pi chi.
inline void validate_target(const TriSurface& s, const std::vector<double>& kbar)
{
    if (static_cast<int>(kbar.size()) != s.vertex_count()) {
        raise(ErrorKind::TargetOutOfRange, "target curvature count does not match vertex count");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < kbar.size(); ++i) {
        if (!std::isfinite(kbar[i]) || !(kbar[i] < 2.0 * pi)) {
            raise(ErrorKind::TargetOutOfRange,
                  "target curvature at vertex " + std::to_string(i) + " must be below 2*pi");
        }
        sum += kbar[i];
    }
    const double bound = 2.0 * pi * s.euler_characteristic();
    if (!(sum > bound)) {
        raise(ErrorKind::TargetOutOfRange, "target curvature sum " + std::to_string(sum) +
                                               " must exceed 2*pi*chi = " + std::to_string(bound));
    }
}

}  // namespace hidra
