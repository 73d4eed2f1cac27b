#pragma once

// Constructive oracles: hinges whose four vertex circles share one orthogonal
// circle, the first-order agreement of the geometric and Ptolemy diagonals
// there, the compactness/auxiliary-triangle equivalence and flip round trips.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hidra/flip_surgery.hpp"
#include "hidra/hyp_kernel.hpp"
#include "hidra/packing_geom.hpp"
#include "hidra/ptolemy.hpp"

namespace hidra
{

/**
 * Four circles in the Poincare disk, circle m centered at hyperbolic distance
 * dist[m] from the origin in direction theta[m], all orthogonal to the circle
 * of radius rho_hat about the origin. Circles 0..3 are v_i, v_l, v_j, v_k of
 * the hinge with diagonal v_i v_j.
 */
struct DegenerateHinge {
    double rho_hat{};
    std::array<double, 4> radius{};
    std::array<double, 4> theta{};
    std::array<double, 4> dist{};
    HingeValues values;
    double F{};  ///< inversive distance of the geometric diagonal v_k v_l

    /// Circle index in 0..3 for each of (k, i, l, j).
    static constexpr std::array<int, 4> k_i_l_j{3, 0, 1, 2};
};

inline double circle_cosh_distance(const DegenerateHinge& h, int m, int n)
{
    return std::cosh(h.dist[m]) * std::cosh(h.dist[n]) -
           std::sinh(h.dist[m]) * std::sinh(h.dist[n]) * std::cos(h.theta[m] - h.theta[n]);
}

namespace verify_detail
{

// Fills values and F from the circle data already stored in h.
inline void fill_hinge_values(DegenerateHinge& h)
{
    auto inv = [&](int m, int n) {
        const double I = inversive_from_length(h.radius[m], h.radius[n],
                                               CoshLength{circle_cosh_distance(h, m, n)});
        if (!(I > 1.0)) {
            raise(ErrorKind::ConstructionInvalid, "circles " + std::to_string(m) + " and " +
                                                      std::to_string(n) + " are not disjoint");
        }
        return I;
    };
    // k = 3, i = 0, l = 1, j = 2
    h.values = HingeValues{inv(3, 0), inv(0, 1), inv(1, 2), inv(2, 3), inv(0, 2),
                           h.radius[3], h.radius[0], h.radius[1], h.radius[2]};
    h.F = inv(3, 1);
}

}  // namespace verify_detail

inline DegenerateHinge degenerate_hinge(double rho_hat, const std::array<double, 4>& radii,
                                        const std::array<double, 4>& theta)
{
    if (!(rho_hat > 0.0)) raise(ErrorKind::ConstructionInvalid, "orthogonal radius must be positive");
    for (int m = 0; m < 4; ++m) {
        if (!(radii[m] > 0.0)) raise(ErrorKind::ConstructionInvalid, "radii must be positive");
        if (m > 0 && !(theta[m] > theta[m - 1])) {
            raise(ErrorKind::ConstructionInvalid, "directions must be strictly increasing");
        }
    }
    if (!(theta[3] - theta[0] < 2.0 * pi)) {
        raise(ErrorKind::ConstructionInvalid, "directions must be distinct modulo 2*pi");
    }
    DegenerateHinge h;
    h.rho_hat = rho_hat;
    h.radius = radii;
    h.theta = theta;
    for (int m = 0; m < 4; ++m) h.dist[m] = acosh_stable(std::cosh(radii[m]) * std::cosh(rho_hat));
    verify_detail::fill_hinge_values(h);
    return h;
}

/**
 * Same centers with circle k scaled by factor, so k is no longer orthogonal
 * to the common circle. Used as the negative control.
 */
inline DegenerateHinge perturbed_hinge(const DegenerateHinge& h, double factor)
{
    DegenerateHinge p = h;
    p.radius[3] *= factor;
    verify_detail::fill_hinge_values(p);
    return p;
}

/// Delaunay margin with cosh radii in place of tanh radii; reported, not asserted.
inline double cosh_form_margin(const HingeValues& h)
{
    const double f = h.flip_value();
    const double lhs = std::sqrt(delta_discriminant(h.b, h.c, h.e)) / std::cosh(h.rk) +
                       std::sqrt(delta_discriminant(h.a, h.d, h.e)) / std::cosh(h.rl);
    const double rhs = std::sqrt(delta_discriminant(h.c, h.d, f)) / std::cosh(h.ri) +
                       std::sqrt(delta_discriminant(h.a, h.b, f)) / std::cosh(h.rj);
    return rhs - lhs;
}

/// Hinge parameters: cosh radii (p, q, r, s) at (k, i, l, j) and inversive distances a..e.
enum class HingeParam { p, q, r, s, a, b, c, d, e };

inline constexpr std::array<HingeParam, 9> all_hinge_params{
    HingeParam::p, HingeParam::q, HingeParam::r, HingeParam::s, HingeParam::a,
    HingeParam::b, HingeParam::c, HingeParam::d, HingeParam::e};

inline const char* to_string(HingeParam p)
{
    constexpr const char* names[] = {"p", "q", "r", "s", "a", "b", "c", "d", "e"};
    return names[static_cast<int>(p)];
}

using HingeVector = std::array<double, 9>;

inline HingeVector hinge_vector(const HingeValues& h)
{
    return {std::cosh(h.rk), std::cosh(h.ri), std::cosh(h.rl), std::cosh(h.rj),
            h.a,             h.b,             h.c,             h.d,
            h.e};
}

/**
 * Geometric diagonal of the developed hinge, normalized as
 * F = (z - p r) / (sqrt(p^2 - 1) sqrt(r^2 - 1)).
 */
inline double geometric_diagonal(const HingeVector& x)
{
    const auto [p, q, r, s, a, b, c, d, e] = x;
    auto len = [](double c1, double c2, double inv) {
        return c1 * c2 + inv * sinh_from_cosh(c1) * sinh_from_cosh(c2);
    };
    const CoshLength u{len(p, q, a)}, v{len(q, r, b)}, w{len(r, s, c)}, xx{len(s, p, d)},
        y{len(q, s, e)};
    const double z = hinge_diagonal(u, v, w, xx, y).value;
    return (z - p * r) / (sinh_from_cosh(p) * sinh_from_cosh(r));
}

inline double ptolemy_diagonal(const HingeVector& x)
{
    return ptolemy_flip_value(x[4], x[5], x[6], x[7], x[8]);
}

struct DerivativePair {
    double dF{};
    double df{};
    double discrepancy() const { return std::abs(dF - df); }
};

/// Central differences of F and f in one parameter.
inline DerivativePair dF_df(const HingeVector& x, HingeParam which, double h)
{
    const int k = static_cast<int>(which);
    HingeVector xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    return {(geometric_diagonal(xp) - geometric_diagonal(xm)) / (2.0 * h),
            (ptolemy_diagonal(xp) - ptolemy_diagonal(xm)) / (2.0 * h)};
}

/// Step scaled by the distance of the parameter from the boundary value 1.
inline double scaled_step(const HingeVector& x, HingeParam which, double step)
{
    return step * std::min(1.0, x[static_cast<int>(which)] - 1.0);
}

inline double dF_df_check(const DegenerateHinge& hinge, HingeParam which, double h)
{
    return dF_df(hinge_vector(hinge.values), which, h).discrepancy();
}

struct DecayResult {
    HingeParam param{};
    double step_coarse{}, step_fine{};
    double disc_coarse{}, disc_fine{};
    double ratio{};         ///< disc_coarse / disc_fine
    bool below_floor{};     ///< both discrepancies at roundoff level
    bool decays{};
};

struct DecayOptions {
    double step_coarse{2e-3};
    double step_fine{1e-3};
    /// Discrepancies below floor * (1 + |dF|) or roundoff * eps * (|F| + |f|) / h count as roundoff.
    double floor{1e-9};
    double roundoff{64.0};
    /// Accept ratios within [s / window, s * window] of the step ratio s.
    double window{3.0};
    /// Ratios must also show a real decrease.
    double min_ratio{1.5};
};

/**
 * Compares discrepancies at two step sizes, each scaled by scaled_step. Decay
 * means the discrepancy ratio tracks the step ratio within the window, or both
 * sit at the roundoff floor.
 */
inline DecayResult decay_check(const HingeVector& x, HingeParam which, const DecayOptions& o = {})
{
    DecayResult r;
    r.param = which;
    r.step_coarse = scaled_step(x, which, o.step_coarse);
    r.step_fine = scaled_step(x, which, o.step_fine);
    const DerivativePair c = dF_df(x, which, r.step_coarse);
    const DerivativePair f = dF_df(x, which, r.step_fine);
    r.disc_coarse = c.discrepancy();
    r.disc_fine = f.discrepancy();
    // Cancellation in a central difference costs about eps |F| / h.
    const double values = std::abs(geometric_diagonal(x)) + std::abs(ptolemy_diagonal(x));
    auto floor = [&](double h) {
        return std::max(o.floor * (1.0 + std::abs(f.dF)),
                        o.roundoff * std::numeric_limits<double>::epsilon() * values / h);
    };
    r.below_floor = r.disc_coarse <= floor(r.step_coarse) && r.disc_fine <= floor(r.step_fine);
    r.ratio = r.disc_fine > 0.0 ? r.disc_coarse / r.disc_fine : std::numeric_limits<double>::infinity();
    const double s = o.step_coarse / o.step_fine;
    r.decays = r.below_floor ||
               (r.ratio >= std::max(s / o.window, o.min_ratio) && r.ratio <= s * o.window);
    return r;
}

/// True when F and f can be evaluated at x +- step in every parameter.
inline bool stencil_in_domain(const HingeVector& x, double step)
{
    try {
        for (HingeParam p : all_hinge_params) dF_df(x, p, scaled_step(x, p, step));
        return true;
    } catch (const Error&) {
        return false;
    }
}

struct HingeSampling {
    double rho_min{0.3}, rho_max{1.2};
    double radius_min{0.15}, radius_max{0.9};
    /// Scale applied to circle k for the negative control.
    double control_factor{1.2};
    double step{DecayOptions{}.step_coarse};
};

/**
 * Random degenerate hinge together with its negative control. Samples whose
 * difference stencil leaves the domain of F, or whose control circles
 * overlap, are redrawn.
 */
template <class Rng>
std::pair<DegenerateHinge, DegenerateHinge> random_degenerate_hinge(Rng& rng, const HingeSampling& o = {})
{
    std::uniform_real_distribution<double> rho(o.rho_min, o.rho_max), rad(o.radius_min, o.radius_max),
        ang(0.0, 2.0 * pi);
    for (;;) {
        std::array<double, 4> th{ang(rng), ang(rng), ang(rng), ang(rng)};
        std::sort(th.begin(), th.end());
        const double rh = rho(rng);
        const std::array<double, 4> radii{rad(rng), rad(rng), rad(rng), rad(rng)};
        try {
            DegenerateHinge h = degenerate_hinge(rh, radii, th);
            DegenerateHinge c = perturbed_hinge(h, o.control_factor);
            if (stencil_in_domain(hinge_vector(h.values), o.step) &&
                stencil_in_domain(hinge_vector(c.values), o.step)) {
                return {std::move(h), std::move(c)};
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ConstructionInvalid) throw;
        }
    }
}

struct XiEquivalence {
    bool xi_positive{};
    bool auxiliary_triangle{};
    bool excluded{};  ///< within the tolerance band of an auxiliary equality
    bool agrees() const { return excluded || xi_positive == auxiliary_triangle; }
};

inline XiEquivalence xi_equivalence_check(const std::array<double, 3>& radii,
                                          const std::array<double, 3>& inv, double band = 1e-12)
{
    const auto h = auxiliary_lengths(radii, inv);
    XiEquivalence out;
    out.xi_positive = xi_discriminant(radii, inv) > 0.0;
    out.auxiliary_triangle = true;
    for (int k = 0; k < 3; ++k) {
        const double slack = h[next3(k)] + h[prev3(k)] - h[k];
        if (std::abs(slack) <= band) out.excluded = true;
        if (!(slack > 0.0)) out.auxiliary_triangle = false;
    }
    return out;
}

/**
 * Applies the flips in order, then again in reverse order, and returns the
 * largest relative change of any inversive distance.
 */
inline double conformal_roundtrip_check(const TriSurface& s, const Packing& pk,
                                        const std::vector<int>& flips)
{
    TriSurface cur = s;
    Packing cp = pk;
    auto apply = [&](int e) {
        FlipResult r = flip_edge(cur, cp, e);
        cur = std::move(r.surface);
        cp = std::move(r.packing);
    };
    for (int e : flips) apply(e);
    for (auto it = flips.rbegin(); it != flips.rend(); ++it) apply(*it);
    if (!same_complex(cur, s)) {
        raise(ErrorKind::FlipIllegal, "round trip did not restore the triangulation");
    }
    double err = 0.0;
    for (std::size_t e = 0; e < pk.inversive.size(); ++e) {
        err = std::max(err, std::abs(cp.inversive[e] - pk.inversive[e]) / std::abs(pk.inversive[e]));
    }
    return err;
}

/// Random sequence of combinatorially legal flips starting from s.
template <class Rng>
std::vector<int> random_flip_sequence(const TriSurface& s, int count, Rng& rng)
{
    std::vector<int> out;
    TriSurface cur = s;
    std::uniform_int_distribution<int> pick(0, s.edge_count() - 1);
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 100 * count; ++tries) {
        const int e = pick(rng);
        try {
            cur = flip_combinatorial(cur, e);
            out.push_back(e);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::FlipIllegal) throw;
        }
    }
    return out;
}

/**
 * Random flip sequence that tracks the packing and skips any flip whose new
 * inversive distance would exceed max_inversive. Long random walks on small
 * complexes otherwise overflow.
 */
template <class Rng>
std::vector<int> random_flip_sequence(const TriSurface& s, const Packing& pk, int count, Rng& rng,
                                      double max_inversive = 1e100)
{
    std::vector<int> out;
    TriSurface cur = s;
    Packing cp = pk;
    std::uniform_int_distribution<int> pick(0, s.edge_count() - 1);
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 100 * count; ++tries) {
        const int e = pick(rng);
        try {
            FlipResult r = flip_edge(cur, cp, e);
            if (!(r.event.f <= max_inversive)) continue;
            cur = std::move(r.surface);
            cp = std::move(r.packing);
            out.push_back(e);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::FlipIllegal) throw;
        }
    }
    return out;
}

/// Replays a solve's flip log backwards from its final state.
inline Packing reverse_replay(const TriSurface& final_surface, const Packing& final_packing,
                              const std::vector<FlipEvent>& log, TriSurface* restored = nullptr)
{
    TriSurface cur = final_surface;
    Packing cp = final_packing;
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        FlipResult r = flip_edge(cur, cp, it->edge);
        cur = std::move(r.surface);
        cp = std::move(r.packing);
    }
    if (restored) *restored = cur;
    return cp;
}

}  // namespace hidra
