#pragma once

// Randomized property suite run by the `verify` command.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hidra/curvature.hpp"
#include "hidra/fixtures.hpp"
#include "hidra/flip_surgery.hpp"
#include "hidra/ptolemy.hpp"
#include "hidra/verify.hpp"

namespace hidra
{

struct SuiteCheck {
    std::string name;
    bool passed{true};
    int samples{0};
    double max_residual{0.0};
    double tolerance{0.0};
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed{20240917};
    int sextuples{2000};
    int faces{2000};
    int packings{20};
    int hessian_states{5};
    int hinges{20};
    int flip_sequences{10};
    int flips_per_sequence{50};
};

/// Largest deviation of the analytic Jacobian from central differences, relative to max(|fd|, 1e-3).
inline double jacobian_fd_error(const TriSurface& s, const Packing& pk, double h = 1e-6)
{
    const Eigen::MatrixXd J = curvature_jacobian(s, pk);
    double worst = 0.0;
    for (int j = 0; j < s.vertex_count(); ++j) {
        auto shifted = [&](double sgn) {
            Packing p = pk;
            p.radius[j] = radius_of_u(u_of_radius(p.radius[j]) + sgn * h);
            return curvatures(s, p).K;
        };
        const auto kp = shifted(1.0), km = shifted(-1.0);
        for (int i = 0; i < s.vertex_count(); ++i) {
            const double fd = (kp[i] - km[i]) / (2.0 * h);
            worst = std::max(worst, std::abs(J(i, j) - fd) / std::max(std::abs(fd), 1e-3));
        }
    }
    return worst;
}

namespace suite_detail
{

inline void note(SuiteCheck& c, double residual)
{
    ++c.samples;
    if (!(residual <= c.max_residual)) c.max_residual = std::isfinite(residual) ? residual : 1e300;
    if (!(residual <= c.tolerance)) c.passed = false;
}

}  // namespace suite_detail

/**
 * Runs every property check on random data drawn from the seed. The surface
 * supplies the combinatorics for the packing-level checks; the genus-2
 * three-vertex fixture is used when none is given.
 */
inline std::vector<SuiteCheck> run_property_suite(const SuiteOptions& o,
                                                  const std::optional<TriSurface>& mesh = std::nullopt)
{
    using suite_detail::note;
    std::mt19937_64 rng(o.seed);
    const TriSurface s = mesh ? *mesh : build_surface(fixtures::genus2_three_vertex_mesh());
    std::vector<SuiteCheck> out;

    {
        SuiteCheck c{"ptolemy_identities", true, 0, 0.0, 1e-9, "relative residuals of the flip relation"};
        std::uniform_real_distribution<double> d(1.0 + 1e-6, 10.0);
        for (int n = 0; n < o.sextuples; ++n) {
            const double a = d(rng), b = d(rng), cc = d(rng), dd = d(rng), e = d(rng);
            const double f = ptolemy_flip_value(a, b, cc, dd, e);
            const auto [r1, r2] = delta_identity_residuals(a, b, cc, dd, e, f);
            note(c, std::max({std::abs(ptolemy_relative_residual(a, b, cc, dd, e, f)), r1, r2}));
        }
        out.push_back(c);
    }
    {
        SuiteCheck c{"xi_auxiliary_equivalence", true, 0, 0.0, 0.0, "count of disagreements"};
        std::uniform_real_distribution<double> r(0.05, 3.0), i(1.0, 10.0);
        int bad = 0;
        for (int n = 0; n < o.faces; ++n) {
            bad += !xi_equivalence_check({r(rng), r(rng), r(rng)}, {i(rng), i(rng), i(rng)}).agrees();
            ++c.samples;
        }
        c.max_residual = bad;
        c.passed = bad == 0;
        out.push_back(c);
    }

    SuiteCheck del{"weighted_delaunay", true, 0, 0.0, 1e-10, "negated worst margin after surgery"};
    SuiteCheck com{"orthocircle_compact", true, 0, 0.0, 0.0, "faces with xi <= 0 after surgery"};
    SuiteCheck rev{"flip_reversibility", true, 0, 0.0, 1e-8, "relative I error of reverse replay"};
    SuiteCheck gb{"gauss_bonnet", true, 0, 0.0, 1e-9, "curvature plus area minus 2 pi chi"};
    std::vector<SurgeryResult> states;
    for (int n = 0; n < o.packings; ++n) {
        const Packing pk = fixtures::random_packing(s, rng);
        SurgeryResult r = [&] {
            SurgeryOptions so;
            so.audit_faces = false;
            return make_weighted_delaunay(s, pk, so);
        }();
        double worst = 0.0;
        for (double m : delaunay_margins(r.surface, r.packing)) worst = std::max(worst, -m);
        note(del, worst);
        const int nc = first_noncompact_face(r.surface, r.packing);
        note(com, nc < 0 ? 0.0 : 1.0);
        TriSurface back_s = r.surface;
        const Packing back = reverse_replay(r.surface, r.packing, r.flips, &back_s);
        double err = same_complex(back_s, s) ? 0.0 : 1.0;
        for (std::size_t e = 0; e < pk.inversive.size(); ++e) {
            err = std::max(err, std::abs(back.inversive[e] - pk.inversive[e]) / pk.inversive[e]);
        }
        note(rev, err);
        note(gb, std::abs(gauss_bonnet_residual(r.surface, curvatures(r.surface, r.packing))));
        states.push_back(std::move(r));
    }
    out.push_back(del);
    out.push_back(com);
    out.push_back(rev);
    out.push_back(gb);

    {
        SuiteCheck fd{"hessian_finite_difference", true, 0, 0.0, 1e-5, "relative Jacobian error"};
        SuiteCheck sym{"hessian_symmetry", true, 0, 0.0, 1e-9, "max |J - J^T|"};
        SuiteCheck sign{"hessian_spectrum_sign", true, 0, 0.0, 0.0, "states whose sign differs from the first"};
        std::optional<int> first;
        for (int n = 0; n < std::min<int>(o.hessian_states, static_cast<int>(states.size())); ++n) {
            const SurgeryResult& st = states[n];
            note(fd, jacobian_fd_error(st.surface, st.packing));
            const Eigen::MatrixXd J = curvature_jacobian(st.surface, st.packing);
            note(sym, (J - J.transpose()).cwiseAbs().maxCoeff());
            const int sg = spectrum_sign(0.5 * (J + J.transpose()));
            if (!first) first = sg;
            note(sign, sg == *first && sg != 0 ? 0.0 : 1.0);
        }
        if (first) sign.detail += "; sign " + std::to_string(*first);
        out.push_back(fd);
        out.push_back(sym);
        out.push_back(sign);
    }
    {
        SuiteCheck c1{"flip_boundary_c1", true, 0, 0.0, 0.0, "parameters without O(h^2) decay at degenerate hinges"};
        SuiteCheck neg{"flip_boundary_negative_control", true, 0, 0.0, 0.0, "decaying parameters at perturbed hinges"};
        for (int n = 0; n < o.hinges; ++n) {
            const auto [hinge, control] = random_degenerate_hinge(rng);
            const HingeVector x = hinge_vector(hinge.values);
            const HingeVector y = hinge_vector(control.values);
            int bad = 0, decaying = 0;
            for (HingeParam p : all_hinge_params) {
                bad += !decay_check(x, p).decays;
                decaying += decay_check(y, p).decays;
            }
            note(c1, bad);
            note(neg, decaying);
        }
        out.push_back(c1);
        out.push_back(neg);
    }
    {
        SuiteCheck c{"conformal_roundtrip", true, 0, 0.0, 1e-8, "relative I error after forward and reverse flips"};
        for (int n = 0; n < o.flip_sequences; ++n) {
            const Packing pk = fixtures::random_packing(s, rng);
            note(c, conformal_roundtrip_check(s, pk, random_flip_sequence(s, pk, o.flips_per_sequence, rng)));
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace hidra
