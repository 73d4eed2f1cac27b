// Acceptance run: one PASS/FAIL line per criterion, limits pinned below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hidra/curvature.hpp"
#include "hidra/fixtures.hpp"
#include "hidra/flip_surgery.hpp"
#include "hidra/ptolemy.hpp"
#include "hidra/solver.hpp"
#include "hidra/suite.hpp"
#include "hidra/verify.hpp"

using namespace hidra;
namespace fx = hidra::fixtures;

namespace
{

constexpr std::uint64_t seed = 20240917;

struct Outcome {
    bool passed{true};
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double time_limit;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Max tracked alongside a tolerance; prints as "label=max<=tol".
struct Worst {
    const char* label;
    double tol;
    double value{0.0};

    void see(double v) { value = std::isfinite(v) ? std::max(value, v) : HUGE_VAL; }
    bool ok() const { return value <= tol; }
    std::string str() const { return std::string(label) + "=" + fmt("%.3g", value) + "<=" + fmt("%.0e", tol); }
};

void record(Outcome& o, std::vector<std::string>& parts, const Worst& w)
{
    o.require(w.ok(), std::string(w.label) + " exceeded");
    parts.push_back(w.str());
}

std::string join(const std::vector<std::string>& parts)
{
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s;
}

// Generalized Ptolemy oracle: the Gram matrix of the four hinge circles,
// unit diagonal and -I off the diagonal, is singular. Leibniz expansion
// gives both the determinant and the sum of absolute terms.
double gram_relative_det(double a, double b, double c, double d, double e, double f)
{
    // order k, i, l, j
    const double g[4][4] = {{1, -a, -f, -d}, {-a, 1, -b, -e}, {-f, -b, 1, -c}, {-d, -e, -c, 1}};
    std::array<int, 4> p{0, 1, 2, 3};
    double det = 0.0, scale = 0.0;
    do {
        int inversions = 0;
        for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y) inversions += p[x] > p[y];
        const double term = g[0][p[0]] * g[1][p[1]] * g[2][p[2]] * g[3][p[3]];
        det += inversions % 2 ? -term : term;
        scale += std::abs(term);
    } while (std::next_permutation(p.begin(), p.end()));
    return std::abs(det) / scale;
}

using V3 = std::array<double, 3>;

double minkowski(const V3& x, const V3& y) { return x[0] * y[0] + x[1] * y[1] - x[2] * y[2]; }

double det3(const V3& x, const V3& y, const V3& z)
{
    return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
           x[2] * (y[0] * z[1] - y[1] * z[0]);
}

// Explicit unit spacelike vectors in R^{2,1} realizing a, b, c, d, e with k
// and l on opposite sides of the plane spanned by i and j.
struct HingeCoordinates {
    V3 k, i, l, j;
};

HingeCoordinates hinge_coordinates(double a, double b, double c, double d, double e)
{
    const double w = std::sqrt((e - 1.0) * (e + 1.0));
    HingeCoordinates h;
    h.i = {1.0, 0.0, 0.0};
    h.j = {-e, 0.0, w};
    const double zk = (a * e + d) / w, zl = (b * e + c) / w;
    h.k = {-a, std::sqrt(1.0 - a * a + zk * zk), zk};
    h.l = {-b, -std::sqrt(1.0 - b * b + zl * zl), zl};
    return h;
}

double rel(double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1.0}); }

Outcome identity_suite()
{
    Outcome o;
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> wide(1.0, 10.0), log_gap(-6.0, 0.0);
    auto draw = [&](int n) { return n % 4 == 0 ? 1.0 + std::pow(10.0, log_gap(rng)) : wide(rng); };
    Worst eq{"ptolemy", 1e-9}, gram{"gram_oracle", 1e-9}, d1{"delta_abf", 1e-9}, d2{"delta_cdf", 1e-9},
        coord{"coordinate_oracle", 1e-9};
    const int samples = 10000;
    for (int n = 0; n < samples; ++n) {
        double a = draw(n), b = draw(n + 1), c = draw(n + 2), d = draw(n + 3), e = draw(n);
        if (!(e > 1.0)) e = std::nextafter(1.0, 2.0);
        const double f = ptolemy_flip_value(a, b, c, d, e);
        eq.see(std::abs(ptolemy_relative_residual(a, b, c, d, e, f)));
        gram.see(gram_relative_det(a, b, c, d, e, f));
        const auto [r1, r2] = delta_identity_residuals(a, b, c, d, e, f);
        d1.see(r1);
        d2.see(r2);
        if (e > 1.01) {
            const HingeCoordinates h = hinge_coordinates(a, b, c, d, e);
            coord.see(std::max({rel(f, -minkowski(h.k, h.l)),
                                rel(std::sqrt(delta_discriminant(a, b, f)), std::abs(det3(h.k, h.i, h.l))),
                                rel(std::sqrt(delta_discriminant(c, d, f)), std::abs(det3(h.k, h.j, h.l)))}));
        }
    }
    Worst anchor{"anchor_17", 1e-12};
    anchor.see(std::abs(ptolemy_flip_value(2, 2, 2, 2, 2) - 17.0));
    std::vector<std::string> parts{"samples=" + std::to_string(samples)};
    for (const Worst* w : {&eq, &gram, &d1, &d2, &coord, &anchor}) record(o, parts, *w);
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

Outcome discriminant_suite()
{
    Outcome o;
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> rad(0.05, 3.0), inv(1.0, 10.0);
    Worst ident{"xi_delta_identity", 1e-9};
    int disagreements = 0, excluded = 0, positive = 0;
    const int samples = 10000;
    for (int n = 0; n < samples; ++n) {
        const std::array<double, 3> r{rad(rng), rad(rng), rad(rng)};
        const std::array<double, 3> I{inv(rng), inv(rng), inv(rng)};
        const double p = std::cosh(r[0]), q = std::cosh(r[1]), s = std::cosh(r[2]);
        const double x = std::cosh(r[1]) * std::cosh(r[2]) + I[0] * std::sinh(r[1]) * std::sinh(r[2]);
        const double y = std::cosh(r[2]) * std::cosh(r[0]) + I[1] * std::sinh(r[2]) * std::sinh(r[0]);
        const double z = std::cosh(r[0]) * std::cosh(r[1]) + I[2] * std::sinh(r[0]) * std::sinh(r[1]);
        const double xi = xi_discriminant(r, I);
        const double lhs = 1.0 + 2.0 * x * y * z - x * x - y * y - z * z - xi;
        const double rhs = (p * p - 1.0) * (q * q - 1.0) * (s * s - 1.0) * delta_discriminant(I[0], I[1], I[2]);
        const double scale = 1.0 + 2.0 * x * y * z + x * x + y * y + z * z + std::abs(xi) + std::abs(rhs);
        ident.see(std::abs(lhs - rhs) / scale);

        // auxiliary triangle inequalities evaluated from tanh radii directly
        std::array<double, 3> t{}, h{};
        for (int k = 0; k < 3; ++k) t[k] = std::tanh(r[k]);
        for (int k = 0; k < 3; ++k) {
            const double u = t[(k + 1) % 3], v = t[(k + 2) % 3];
            h[k] = std::sqrt(u * u + v * v + 2.0 * I[k] * u * v);
        }
        bool tri = true, near = false;
        for (int k = 0; k < 3; ++k) {
            const double slack = h[(k + 1) % 3] + h[(k + 2) % 3] - h[k];
            tri = tri && slack > 0.0;
            near = near || std::abs(slack) <= 1e-12;
        }
        positive += xi > 0.0;
        if (near) {
            ++excluded;
        } else if ((xi > 0.0) != tri) {
            ++disagreements;
        }
        if (!xi_equivalence_check(r, I).agrees()) ++disagreements;
    }
    const double r0 = std::atanh(0.5);
    const FaceMetrics fm = face_metrics({r0, r0, r0}, {2.0, 2.0, 2.0});
    Worst xi4{"anchor_xi", 1e-12}, rho{"anchor_sinh_rho", 1e-12};
    xi4.see(std::abs(fm.xi - 4.0));
    rho.see(fm.rho ? std::abs(std::sinh(*fm.rho) - 0.5) : HUGE_VAL);
    std::vector<std::string> parts{"samples=" + std::to_string(samples)};
    for (const Worst* w : {&ident, &xi4, &rho}) record(o, parts, *w);
    o.require(disagreements == 0, "sign disagreement");
    o.require(positive > 0 && positive < samples, "sign sample not mixed");
    parts.push_back("sign_disagreements=" + std::to_string(disagreements));
    parts.push_back("xi_positive=" + std::to_string(positive));
    parts.push_back("near_degenerate=" + std::to_string(excluded));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

struct Complexes {
    TriSurface torus = build_surface(fx::one_vertex_torus_mesh());
    TriSurface genus2 = build_surface(fx::genus2_three_vertex_mesh());
};

Outcome delaunay_suite()
{
    Outcome o;
    const Complexes cx;
    std::mt19937_64 rng(seed + 3);
    Worst margin{"neg_margin", 1e-10}, rev{"reversibility", 1e-8};
    int failures = 0, noncompact = 0, max_flips = 0, total_flips = 0, budget = 0;
    const int samples = 200;
    for (int n = 0; n < samples; ++n) {
        const TriSurface& s = n % 2 ? cx.genus2 : cx.torus;
        const Packing pk = fx::random_packing(s, rng);
        budget = std::max(budget, 100 * s.edge_count());
        try {
            const SurgeryResult r = make_weighted_delaunay(s, pk);
            max_flips = std::max<int>(max_flips, static_cast<int>(r.flips.size()));
            total_flips += static_cast<int>(r.flips.size());
            for (double m : delaunay_margins(r.surface, r.packing)) margin.see(-m);
            for (int f = 0; f < r.surface.face_count(); ++f) noncompact += !(face_metrics(r.surface, r.packing, f).xi > 0.0);
            TriSurface back_s = r.surface;
            const Packing back = reverse_replay(r.surface, r.packing, r.flips, &back_s);
            double err = same_complex(back_s, s) ? 0.0 : HUGE_VAL;
            for (std::size_t e = 0; e < pk.inversive.size(); ++e) err = std::max(err, rel(back.inversive[e], pk.inversive[e]));
            rev.see(err);
        } catch (const Error& e) {
            ++failures;
            std::fprintf(stderr, "delaunay sample %d: %s\n", n, e.what());
        }
    }
    std::vector<std::string> parts{"samples=" + std::to_string(samples)};
    o.require(failures == 0, "surgery failed");
    o.require(noncompact == 0, "noncompact face");
    record(o, parts, margin);
    record(o, parts, rev);
    parts.push_back("failures=" + std::to_string(failures));
    parts.push_back("noncompact_faces=" + std::to_string(noncompact));
    parts.push_back("flips_total=" + std::to_string(total_flips));
    parts.push_back("flips_max=" + std::to_string(max_flips) + "<=" + std::to_string(budget));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

double torus_curvature(double r)
{
    const double L = std::cosh(r) * std::cosh(r) + 2.0 * std::sinh(r) * std::sinh(r);
    return 2.0 * pi - 6.0 * std::acos(L / (L + 1.0));
}

Outcome curvature_suite()
{
    Outcome o;
    const Complexes cx;
    std::mt19937_64 rng(seed + 4);
    Worst gb{"gauss_bonnet", 1e-9}, k0{"anchor_K0", 1e-10};
    int states = 0;
    for (int n = 0; n < 400; ++n) {
        const TriSurface& s = n % 2 ? cx.genus2 : cx.torus;
        const Packing pk = fx::random_packing(s, rng);
        gb.see(std::abs(gauss_bonnet_residual(s, curvatures(s, pk))));
        ++states;
        if (n % 4 < 2) {
            const SurgeryResult r = make_weighted_delaunay(s, pk);
            gb.see(std::abs(gauss_bonnet_residual(r.surface, curvatures(r.surface, r.packing))));
            ++states;
        }
    }
    const Packing sym = fx::uniform_packing(cx.torus, fx::symmetric_radius, 2.0);
    const double K = curvatures(cx.torus, sym).K[0];
    k0.see(std::abs(K - (2.0 * pi - 6.0 * std::acos(2.0 / 3.0))));
    k0.see(std::abs(K - torus_curvature(fx::symmetric_radius)));
    std::vector<std::string> parts{"states=" + std::to_string(states)};
    record(o, parts, gb);
    record(o, parts, k0);
    parts.push_back("K0=" + fmt("%.15f", K));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

Outcome hessian_suite()
{
    Outcome o;
    const Complexes cx;
    std::mt19937_64 rng(seed + 5);
    Worst fd{"fd_relative", 1e-5}, sym{"symmetry", 1e-9};
    std::vector<int> signs;
    const int samples = 50;
    for (int n = 0; n < samples; ++n) {
        const TriSurface& s = n % 5 == 0 ? cx.torus : cx.genus2;
        const SurgeryResult r = make_weighted_delaunay(s, fx::random_packing(s, rng));
        fd.see(jacobian_fd_error(r.surface, r.packing));
        const Eigen::MatrixXd J = curvature_jacobian(r.surface, r.packing);
        sym.see((J - J.transpose()).cwiseAbs().maxCoeff());
        signs.push_back(spectrum_sign(hessian(r.surface, r.packing)));
    }
    const bool constant = signs[0] != 0 && std::all_of(signs.begin(), signs.end(), [&](int v) { return v == signs[0]; });
    std::vector<std::string> parts{"states=" + std::to_string(samples)};
    record(o, parts, fd);
    record(o, parts, sym);
    o.require(constant, "spectrum sign not constant");
    parts.push_back("spectrum_sign=" + std::to_string(signs[0]) + (constant ? " constant" : " varying"));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

bool non_increasing(const std::vector<TraceEntry>& trace)
{
    for (std::size_t t = 1; t < trace.size(); ++t) {
        if (trace[t].potential > trace[t - 1].potential) return false;
    }
    return true;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y)
{
    double m = x.size() == y.size() ? 0.0 : HUGE_VAL;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

Outcome solver_suite()
{
    Outcome o;
    const Complexes cx;
    std::vector<std::string> parts;

    const std::vector<double> kt{1.0};
    const Packing torus_pk = fx::uniform_packing(cx.torus, fx::symmetric_radius, 2.0);
    const SolveState nt = newton_solve(cx.torus, torus_pk, kt);
    o.require(nt.status == SolveStatus::converged, "torus newton not converged");
    Worst res{"torus_residual", 1e-10}, bis{"torus_vs_bisection", 1e-8};
    res.see(nt.max_residual(kt));
    double lo = 1e-6, hi = 20.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (torus_curvature(mid) < 1.0 ? lo : hi) = mid;
    }
    const double r_bis = 0.5 * (lo + hi);
    bis.see(nt.u.empty() ? HUGE_VAL : std::abs(nt.u[0] - std::log(std::tanh(0.5 * r_bis))));
    record(o, parts, res);
    record(o, parts, bis);

    Worst flow{"flow_vs_newton", 1e-6};
    bool descending = true;
    int flows = 0;
    FlowOptions fo;
    fo.dt = 0.5;
    const SolveState ft = ricci_flow(cx.torus, torus_pk, kt, fo);
    o.require(ft.status == SolveStatus::converged, "torus flow not converged");
    flow.see(max_abs_diff(ft.u, nt.u));
    descending = descending && non_increasing(ft.trace);
    ++flows;

    std::mt19937_64 rng(seed + 6);
    const std::vector<double> kg(3, -4.0 * pi / 3.0 + 0.5);
    Worst uniq{"genus2_uniqueness", 2e-10}, gres{"genus2_residual", 1e-10};
    int solves = 0;
    for (int trial = 0; trial < 2; ++trial) {
        const Packing base = fx::random_packing(cx.genus2, rng);
        std::vector<double> ref;
        for (double scale : {0.5, 0.75, 1.0, 1.5, 2.0}) {
            Packing pk = base;
            for (double& r : pk.radius) r *= scale;
            if (!packing_issues(cx.genus2, pk).empty()) continue;
            const SolveState st = newton_solve(cx.genus2, pk, kg);
            ++solves;
            o.require(st.status == SolveStatus::converged, "genus2 newton not converged");
            gres.see(st.max_residual(kg));
            if (ref.empty()) {
                ref = st.u;
                const SolveState fl = ricci_flow(cx.genus2, pk, kg, fo);
                o.require(fl.status == SolveStatus::converged, "genus2 flow not converged");
                flow.see(max_abs_diff(fl.u, st.u));
                descending = descending && non_increasing(fl.trace);
                ++flows;
            } else {
                uniq.see(max_abs_diff(st.u, ref));
            }
        }
    }
    o.require(solves >= 6, "too few admissible scalings");
    o.require(descending, "flow potential increased");
    record(o, parts, gres);
    record(o, parts, uniq);
    record(o, parts, flow);
    parts.push_back("genus2_solves=" + std::to_string(solves));
    parts.push_back("flows=" + std::to_string(flows) + (descending ? " potential_non_increasing" : " potential_increased"));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

Outcome flip_boundary_suite()
{
    Outcome o;
    std::mt19937_64 rng(seed + 7);
    int bad = 0, control_decaying = 0;
    double worst_ratio = HUGE_VAL;
    double min_discrepancy = HUGE_VAL;
    const int samples = 20;
    for (int n = 0; n < samples; ++n) {
        const auto [hinge, control] = random_degenerate_hinge(rng);
        const HingeVector x = hinge_vector(hinge.values);
        const HingeVector y = hinge_vector(control.values);
        for (HingeParam p : all_hinge_params) {
            const DecayResult d = decay_check(x, p);
            if (!d.decays) ++bad;
            if (!d.below_floor) worst_ratio = std::min(worst_ratio, d.ratio);
            const DecayResult c = decay_check(y, p);
            control_decaying += c.decays;
            min_discrepancy = std::min(min_discrepancy, c.disc_fine);
        }
    }
    o.require(bad == 0, "parameter without decay");
    o.require(control_decaying == 0, "control decays");
    std::vector<std::string> parts{"hinges=" + std::to_string(samples), "parameters=9",
                                   "non_decaying=" + std::to_string(bad),
                                   "min_ratio=" + fmt("%.3g", worst_ratio) + ">=1.5",
                                   "control_decaying=" + std::to_string(control_decaying),
                                   "control_min_discrepancy=" + fmt("%.3g", min_discrepancy)};
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

Outcome conformal_class_suite()
{
    Outcome o;
    const Complexes cx;
    std::mt19937_64 rng(seed + 8);
    Worst round{"roundtrip", 1e-8}, replay{"solve_replay", 1e-8};
    int sequences = 0;
    for (int n = 0; n < 20; ++n) {
        const TriSurface& s = n % 2 ? cx.genus2 : cx.torus;
        const Packing pk = fx::random_packing(s, rng);
        round.see(conformal_roundtrip_check(s, pk, random_flip_sequence(s, pk, 50, rng)));
        ++sequences;
    }
    const std::vector<double> kg(3, -4.0 * pi / 3.0 + 0.5);
    int solves = 0, logged = 0;
    for (int n = 0; n < 5; ++n) {
        const Packing pk = fx::random_packing(cx.genus2, rng);
        const SolveState st = newton_solve(cx.genus2, pk, kg);
        o.require(st.status == SolveStatus::converged, "solve not converged");
        ++solves;
        logged += static_cast<int>(st.flips.size());
        TriSurface back_s = st.surface;
        const Packing back = reverse_replay(st.surface, st.packing, st.flips, &back_s);
        double err = same_complex(back_s, cx.genus2) ? 0.0 : HUGE_VAL;
        for (std::size_t e = 0; e < pk.inversive.size(); ++e) err = std::max(err, rel(back.inversive[e], pk.inversive[e]));
        replay.see(err);
    }
    o.require(logged > 0, "no solve produced flips");
    std::vector<std::string> parts{"sequences=" + std::to_string(sequences) + "x50"};
    record(o, parts, round);
    record(o, parts, replay);
    parts.push_back("solves=" + std::to_string(solves));
    parts.push_back("logged_flips=" + std::to_string(logged));
    o.detail = join(parts) + (o.detail.empty() ? "" : " [" + o.detail + "]");
    return o;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "identity_suite", 5.0, identity_suite},
        {2, "discriminant_suite", 5.0, discriminant_suite},
        {3, "delaunay_suite", 30.0, delaunay_suite},
        {4, "curvature_suite", 5.0, curvature_suite},
        {5, "hessian_suite", 60.0, hessian_suite},
        {6, "solver_suite", 120.0, solver_suite},
        {7, "flip_boundary_suite", 30.0, flip_boundary_suite},
        {8, "conformal_class_suite", 30.0, conformal_class_suite},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.time_limit;
        const bool ok = o.passed && in_time;
        failed += !ok;
        std::printf("criterion %d %s: %s time=%.2fs<%.0fs %s%s\n", c.id, c.name, ok ? "PASS" : "FAIL", secs,
                    c.time_limit, o.detail.c_str(), in_time ? "" : " [time limit exceeded]");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
