#pragma once

// Curvature prescription in u-coordinates: the Ricci potential, a damped
// Newton method and the discrete Ricci flow, all with flip surgery.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hidra/curvature.hpp"
#include "hidra/flip_surgery.hpp"

namespace hidra
{

enum class SolveStatus { converged, stalled, max_iterations, surgery_diverged };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::surgery_diverged: return "surgery_diverged";
    }
    return "stalled";
}

struct TraceEntry {
    int iteration{0};
    double max_residual{0.0};
    double potential{0.0};
    double step_length{0.0};
    int flips{0};
};

struct SolveState {
    TriSurface surface;
    Packing packing;
    std::vector<double> u;
    std::vector<double> K;
    std::vector<FlipEvent> flips;
    std::vector<TraceEntry> trace;
    SolveStatus status{SolveStatus::stalled};
    std::string message;
    int iterations{0};
    double time{0.0};

    double max_residual(const std::vector<double>& kbar) const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < K.size(); ++i) m = std::max(m, std::abs(K[i] - kbar[i]));
        return m;
    }
};

/// Surgery to the weighted Delaunay triangulation at radii r(u), then curvature there.
struct ConformalPoint {
    TriSurface surface;
    Packing packing;
    std::vector<double> K;
    std::vector<FlipEvent> flips;
};

inline ConformalPoint conformal_point(const TriSurface& s, const std::vector<double>& inversive,
                                      const std::vector<double>& u,
                                      const SurgeryOptions& opts = {})
{
    SurgeryResult r = make_weighted_delaunay(s, Packing{inversive, r_from_u(u)}, opts);
    std::vector<double> K = curvatures(r.surface, r.packing).K;
    return {std::move(r.surface), std::move(r.packing), std::move(K), std::move(r.flips)};
}

inline std::vector<double> conformal_curvature(const TriSurface& s,
                                               const std::vector<double>& inversive,
                                               const std::vector<double>& u,
                                               const SurgeryOptions& opts = {})
{
    return conformal_point(s, inversive, u, opts).K;
}

/// K - Kbar
inline std::vector<double> gradient(const std::vector<double>& K, const std::vector<double>& kbar)
{
    std::vector<double> g(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) g[i] = K[i] - kbar[i];
    return g;
}

inline std::vector<double> gradient(const SolveState& st, const std::vector<double>& kbar)
{
    return gradient(st.K, kbar);
}

struct PotentialOptions {
    double rel_tol{1e-11};
    unsigned max_depth{12};
    SurgeryOptions surgery{};
};

namespace detail
{

/**
 * Adaptive Gauss-Kronrod 15 by bisection. A piece is accepted once its error
 * estimate drops below rel_tol times the L1 norm of the integrand over the
 * whole interval, or below the rounding noise reported through `noise`
 * (an absolute bound on the integrand error, updated by f).
 */
template <class F>
double integrate_l1(F& f, double a, double b, unsigned depth, double rel_tol, double& l1_total,
                    const double& noise)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0, l1 = 0.0;
    const double q = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    if (l1_total == 0.0) l1_total = l1;
    if (depth == 0 || err <= rel_tol * l1_total || err <= 64.0 * noise * (b - a)) return q;
    const double mid = 0.5 * (a + b);
    return integrate_l1(f, a, mid, depth - 1, rel_tol, l1_total, noise) +
           integrate_l1(f, mid, b, depth - 1, rel_tol, l1_total, noise);
}

}  // namespace detail

/**
 * Line integral of sum (K_i - Kbar_i) du_i along the straight segment from u0
 * to u. Every quadrature node runs surgery from the given triangulation.
 */
inline double potential_value(const TriSurface& s, const std::vector<double>& inversive,
                              const std::vector<double>& kbar, const std::vector<double>& u,
                              const std::vector<double>& u0, const PotentialOptions& opts = {})
{
    const std::size_t n = u.size();
    std::vector<double> du(n);
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        du[i] = u[i] - u0[i];
        len = std::max(len, std::abs(du[i]));
    }
    if (len == 0.0) return 0.0;
    double noise = 0.0;
    auto integrand = [&](double t) {
        std::vector<double> ut(n);
        for (std::size_t i = 0; i < n; ++i) ut[i] = u0[i] + t * du[i];
        const auto K = conformal_curvature(s, inversive, ut, opts.surgery);
        double acc = 0.0, mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += (K[i] - kbar[i]) * du[i];
            mag += (std::abs(K[i]) + std::abs(kbar[i])) * std::abs(du[i]);
        }
        noise = std::max(noise, std::numeric_limits<double>::epsilon() * mag);
        return acc;
    };
    double l1 = 0.0;
    return detail::integrate_l1(integrand, 0.0, 1.0, opts.max_depth, opts.rel_tol, l1, noise);
}

struct NewtonOptions {
    double tol_K{1e-10};
    int max_iters{100};
    double max_step{1.0};
    int max_halvings{60};
    SurgeryOptions surgery{};
    PotentialOptions potential{};
};

namespace detail
{

inline double norm2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

inline SolveState initial_state(const TriSurface& s, const Packing& pk,
                                const std::vector<double>& kbar, const SurgeryOptions& opts)
{
    validate_target(s, kbar);
    check_packing(s, pk);
    SurgeryResult r = make_weighted_delaunay(s, pk, opts);
    SolveState st{std::move(r.surface), std::move(r.packing), {}, {}, std::move(r.flips), {}, SolveStatus::stalled, {}};
    st.u = u_from_r(st.packing.radius);
    st.K = curvatures(st.surface, st.packing).K;
    for (FlipEvent& ev : st.flips) ev.iteration = 0;
    return st;
}

inline void accept_point(SolveState& st, ConformalPoint&& p, std::vector<double>&& u, int iteration)
{
    for (FlipEvent ev : p.flips) {
        ev.iteration = iteration;
        st.flips.push_back(ev);
    }
    st.surface = std::move(p.surface);
    st.packing = std::move(p.packing);
    st.K = std::move(p.K);
    st.u = std::move(u);
}

}  // namespace detail

/**
 * Damped Newton iteration on H delta = -(K - Kbar). Trial points are
 * evaluated on the current triangulation; if that fails geometrically the
 * trial is evaluated after surgery. Accepted steps are followed by surgery.
 * Invalid input throws; non-convergence is reported through the status.
 */
inline SolveState newton_solve(const TriSurface& s, const Packing& pk, const std::vector<double>& kbar,
                               const NewtonOptions& opts = {})
{
    SolveState st = detail::initial_state(s, pk, kbar, opts.surgery);
    const std::size_t n = st.u.size();
    double potential = 0.0;
    st.trace.push_back({0, st.max_residual(kbar), potential, 0.0, static_cast<int>(st.flips.size())});

    try {
        for (int it = 1;; ++it) {
            std::vector<double> res = gradient(st.K, kbar);
            if (detail::norm_inf(res) <= opts.tol_K) {
                st.status = SolveStatus::converged;
                break;
            }
            if (it > opts.max_iters) {
                st.status = SolveStatus::max_iterations;
                st.message = "no convergence after " + std::to_string(opts.max_iters) + " iterations";
                break;
            }
            const Eigen::MatrixXd H = hessian(st.surface, st.packing);
            const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(res.data(), n);
            Eigen::VectorXd delta = H.ldlt().solve(rhs);
            if (!delta.allFinite()) delta = H.completeOrthogonalDecomposition().solve(rhs);
            const double cap = delta.lpNorm<Eigen::Infinity>();
            if (cap > opts.max_step) delta *= opts.max_step / cap;

            const double r0 = detail::norm2(res);
            double lambda = 1.0;
            bool accepted = false;
            for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
                std::vector<double> ut(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double step = st.u[i] + lambda * delta[static_cast<Eigen::Index>(i)];
                    ut[i] = step < 0.0 ? step : 0.5 * st.u[i];
                }
                std::vector<double> Kt;
                try {
                    Kt = curvatures(st.surface, Packing{st.packing.inversive, r_from_u(ut)}).K;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DegenerateTriangle) throw;
                    Kt = conformal_curvature(st.surface, st.packing.inversive, ut, opts.surgery);
                }
                const std::vector<double> rt = gradient(Kt, kbar);
                if (detail::norm2(rt) < r0 || detail::norm_inf(rt) <= opts.tol_K) {
                    const std::vector<double> u_old = st.u;
                    const TriSurface s_old = st.surface;
                    const std::vector<double> inv_old = st.packing.inversive;
                    ConformalPoint p = conformal_point(st.surface, st.packing.inversive, ut, opts.surgery);
                    const int nflips = static_cast<int>(p.flips.size());
                    double step_len = 0.0;
                    for (std::size_t i = 0; i < n; ++i) step_len = std::max(step_len, std::abs(ut[i] - u_old[i]));
                    detail::accept_point(st, std::move(p), std::move(ut), it);
                    potential += potential_value(s_old, inv_old, kbar, st.u, u_old, opts.potential);
                    st.trace.push_back({it, st.max_residual(kbar), potential, step_len, nflips});
                    st.iterations = it;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                st.status = SolveStatus::stalled;
                st.message = "line search underflow at iteration " + std::to_string(it);
                break;
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SurgeryDiverged) throw;
        st.status = SolveStatus::surgery_diverged;
        st.message = e.what();
    }
    return st;
}

struct FlowOptions {
    double dt{0.1};
    double t_max{1000.0};
    double tol{1e-10};
    double dt_min{1e-14};
    SurgeryOptions surgery{};
    PotentialOptions potential{};
};

/**
 * Explicit Euler steps of du/dt = -(K - Kbar). A step that would raise the
 * normalized potential or leave u < 0 is retried with half the step size;
 * after an accepted step the size recovers towards the requested dt.
 */
inline SolveState ricci_flow(const TriSurface& s, const Packing& pk, const std::vector<double>& kbar,
                             const FlowOptions& opts = {})
{
    if (!(opts.dt > 0.0) || !(opts.t_max >= 0.0)) {
        raise(ErrorKind::ValidationError, "dt must be positive and t_max nonnegative");
    }
    SolveState st = detail::initial_state(s, pk, kbar, opts.surgery);
    const std::size_t n = st.u.size();
    double potential = 0.0;
    double dt = opts.dt;
    st.trace.push_back({0, st.max_residual(kbar), potential, 0.0, static_cast<int>(st.flips.size())});

    try {
        for (int it = 1;; ++it) {
            const std::vector<double> res = gradient(st.K, kbar);
            if (detail::norm_inf(res) <= opts.tol) {
                st.status = SolveStatus::converged;
                break;
            }
            if (st.time >= opts.t_max) {
                st.status = SolveStatus::max_iterations;
                st.message = "t_max reached with max |K - Kbar| = " + std::to_string(detail::norm_inf(res));
                break;
            }
            bool accepted = false;
            while (dt >= opts.dt_min) {
                const double h = std::min(dt, opts.t_max - st.time);
                std::vector<double> ut(n);
                bool inside = true;
                for (std::size_t i = 0; i < n; ++i) {
                    ut[i] = st.u[i] - h * res[i];
                    inside = inside && ut[i] < 0.0;
                }
                if (!inside) {
                    dt *= 0.5;
                    continue;
                }
                const double dE =
                    potential_value(st.surface, st.packing.inversive, kbar, ut, st.u, opts.potential);
                if (dE > 0.0) {
                    dt *= 0.5;
                    continue;
                }
                ConformalPoint p = conformal_point(st.surface, st.packing.inversive, ut, opts.surgery);
                const int nflips = static_cast<int>(p.flips.size());
                detail::accept_point(st, std::move(p), std::move(ut), it);
                potential += dE;
                st.time += h;
                dt = std::min(opts.dt, 1.5 * dt);
                st.trace.push_back({it, st.max_residual(kbar), potential, h, nflips});
                st.iterations = it;
                accepted = true;
                break;
            }
            if (!accepted) {
                st.status = SolveStatus::stalled;
                st.message = "time step underflow";
                break;
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SurgeryDiverged) throw;
        st.status = SolveStatus::surgery_diverged;
        st.message = e.what();
    }
    return st;
}

}  // namespace hidra
