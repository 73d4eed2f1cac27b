#pragma once

// Metric edge flips and the flip algorithm towards a weighted Delaunay
// triangulation. Flips move only inversive distances; radii never change.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hidra/delta_complex.hpp"
#include "hidra/packing_geom.hpp"
#include "hidra/ptolemy.hpp"

namespace hidra
{

struct FlipEvent {
    int edge{-1};
    double a{}, b{}, c{}, d{}, e{};
    double f{};
    int iteration{0};
    double margin_before{0.0};
};

struct FlipResult {
    TriSurface surface;
    Packing packing;
    FlipEvent event;
};

inline FlipResult flip_edge(const TriSurface& s, const Packing& pk, int edge, int iteration = 0)
{
    const HingeView h = hinge(s, edge);
    const HingeValues hv = hinge_values(s, pk, h);
    FlipEvent ev;
    ev.edge = edge;
    ev.a = hv.a;
    ev.b = hv.b;
    ev.c = hv.c;
    ev.d = hv.d;
    ev.e = hv.e;
    ev.f = ptolemy_flip_value(hv.a, hv.b, hv.c, hv.d, hv.e);
    ev.iteration = iteration;
    ev.margin_before = delaunay_margin(hv);

    TriSurface flipped = flip_combinatorial(s, edge);
    Packing out = pk;
    out.inversive[edge] = ev.f;
    return {std::move(flipped), std::move(out), ev};
}

struct SurgeryOptions {
    double tol_delaunay{tol_delaunay_default};
    /// 0 selects 100 * edge count.
    int flip_budget{0};
    /// Check that every face has a compact orthogonal circle on exit.
    bool audit_faces{true};
};

struct SurgeryResult {
    TriSurface surface;
    Packing packing;
    std::vector<FlipEvent> flips;
};

/// Delaunay margin of every edge, indexed by edge id.
inline std::vector<double> delaunay_margins(const TriSurface& s, const Packing& pk)
{
    std::vector<double> m(static_cast<std::size_t>(s.edge_count()));
    for (int e = 0; e < s.edge_count(); ++e) m[e] = delaunay_margin(hinge_values(s, pk, e));
    return m;
}

/// First face whose orthogonal circle is not compact, or -1.
inline int first_noncompact_face(const TriSurface& s, const Packing& pk)
{
    for (int f = 0; f < s.face_count(); ++f) {
        const Face& fc = s.face(f);
        const double xi = xi_discriminant(
            {pk.radius[fc.corners[0]], pk.radius[fc.corners[1]], pk.radius[fc.corners[2]]},
            {pk.inversive[fc.sides[0]], pk.inversive[fc.sides[1]], pk.inversive[fc.sides[2]]});
        if (!(xi > 0.0)) return f;
    }
    return -1;
}

/**
 * Flips the edge with the most negative margin (lowest id on ties) until
 * every margin is at least -tol_delaunay.
 */
inline SurgeryResult make_weighted_delaunay(TriSurface s, Packing pk,
                                            const SurgeryOptions& opts = {})
{
    const int budget = opts.flip_budget > 0 ? opts.flip_budget : 100 * s.edge_count();
    std::vector<FlipEvent> log;
    for (;;) {
        int worst = -1;
        double worst_margin = -opts.tol_delaunay;
        for (int e = 0; e < s.edge_count(); ++e) {
            const double m = delaunay_margin(hinge_values(s, pk, e));
            if (m < worst_margin) {
                worst_margin = m;
                worst = e;
            }
        }
        if (worst < 0) break;
        if (static_cast<int>(log.size()) >= budget) {
            raise(ErrorKind::SurgeryDiverged,
                  "flip budget of " + std::to_string(budget) + " exhausted");
        }
        FlipResult r = flip_edge(s, pk, worst, static_cast<int>(log.size()));
        s = std::move(r.surface);
        pk = std::move(r.packing);
        log.push_back(r.event);
    }
    if (opts.audit_faces) {
        if (const int f = first_noncompact_face(s, pk); f >= 0) {
            raise(ErrorKind::NonCompactOrthocircle,
                  "face " + std::to_string(f) + " of the Delaunay triangulation is not compact");
        }
    }
    return {std::move(s), std::move(pk), std::move(log)};
}

}  // namespace hidra
