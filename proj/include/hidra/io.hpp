#pragma once

// JSON mesh files and run reports.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hidra/curvature.hpp"
#include "hidra/errors.hpp"
#include "hidra/flip_surgery.hpp"
#include "hidra/solver.hpp"

namespace hidra
{

using Json = nlohmann::ordered_json;

inline constexpr const char* mesh_format_version = "1.0";
inline constexpr const char* report_format_version = "1.0";

struct MeshFile {
    TriSurface surface;
    Packing packing;
    std::optional<std::vector<double>> kbar;
};

namespace io_detail
{

inline const Json& field(const Json& obj, const char* key, const std::string& loc)
{
    if (!obj.is_object()) raise(ErrorKind::ParseError, loc + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) raise(ErrorKind::ParseError, loc + "." + key + ": missing");
    return *it;
}

inline const Json& array_field(const Json& obj, const char* key, const std::string& loc)
{
    const Json& a = field(obj, key, loc);
    if (!a.is_array()) raise(ErrorKind::ParseError, loc + "." + key + ": expected an array");
    return a;
}

inline double number(const Json& obj, const char* key, const std::string& loc)
{
    const Json& v = field(obj, key, loc);
    if (!v.is_number()) raise(ErrorKind::ParseError, loc + "." + key + ": expected a number");
    return v.get<double>();
}

inline int integer(const Json& v, const std::string& loc)
{
    if (!v.is_number_integer()) raise(ErrorKind::ParseError, loc + ": expected an integer");
    return v.get<int>();
}

inline std::array<int, 3> triple(const Json& obj, const char* key, const std::string& loc)
{
    const Json& a = array_field(obj, key, loc);
    const std::string at = loc + "." + key;
    if (a.size() != 3) raise(ErrorKind::ParseError, at + ": expected 3 entries");
    return {integer(a[0], at + "[0]"), integer(a[1], at + "[1]"), integer(a[2], at + "[2]")};
}

inline std::string at(const char* list, std::size_t i)
{
    return std::string(list) + "[" + std::to_string(i) + "]";
}

// Maps file ids to dense indices; ids must be a permutation of 0..n-1.
inline std::vector<std::size_t> dense_ids(const Json& list, const char* name)
{
    std::vector<std::size_t> slot(list.size(), list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const int id = integer(field(list[i], "id", at(name, i)), at(name, i) + ".id");
        if (id < 0 || static_cast<std::size_t>(id) >= list.size()) {
            raise(ErrorKind::ValidationError,
                  at(name, i) + ".id: ids must be dense in 0.." + std::to_string(list.size() - 1));
        }
        if (slot[id] != list.size()) {
            raise(ErrorKind::ValidationError, at(name, i) + ".id: duplicate id " + std::to_string(id));
        }
        slot[id] = i;
    }
    return slot;
}

inline void check_ref(int id, std::size_t count, const char* kind, const std::string& loc)
{
    if (id < 0 || static_cast<std::size_t>(id) >= count) {
        raise(ErrorKind::ValidationError, loc + ": dangling " + kind + " id " + std::to_string(id));
    }
}

}  // namespace io_detail

/**
 * Parses and validates a mesh document. Structural problems raise ParseError;
 * broken references, out-of-range values and topology defects raise
 * ValidationError with the location of the first violation.
 */
inline MeshFile parse_mesh(const Json& doc)
{
    using namespace io_detail;
    const Json& ver = field(doc, "format_version", "$");
    if (!ver.is_string()) raise(ErrorKind::ParseError, "$.format_version: expected a string");
    if (ver.get<std::string>().rfind("1.", 0) != 0) {
        raise(ErrorKind::ValidationError,
              "$.format_version: unsupported version " + ver.get<std::string>());
    }
    const Json& vs = array_field(doc, "vertices", "$");
    const Json& es = array_field(doc, "edges", "$");
    const Json& fs = array_field(doc, "faces", "$");
    if (vs.empty()) raise(ErrorKind::ValidationError, "$.vertices: empty");

    const auto vslot = dense_ids(vs, "vertices");
    const auto eslot = dense_ids(es, "edges");

    RawMesh raw;
    raw.vertex_count = static_cast<int>(vs.size());
    Packing pk;
    pk.radius.resize(vs.size());
    pk.inversive.resize(es.size());
    for (std::size_t id = 0; id < vs.size(); ++id) {
        const std::size_t i = vslot[id];
        const double r = number(vs[i], "radius", at("vertices", i));
        if (!(r > 0.0) || !std::isfinite(r)) {
            raise(ErrorKind::ValidationError, at("vertices", i) + ".radius must be positive");
        }
        pk.radius[id] = r;
    }
    raw.edges.resize(es.size());
    for (std::size_t id = 0; id < es.size(); ++id) {
        const std::size_t i = eslot[id];
        const std::string loc = at("edges", i);
        const Json& ends = array_field(es[i], "ends", loc);
        if (ends.size() != 2) raise(ErrorKind::ParseError, loc + ".ends: expected 2 entries");
        for (int k = 0; k < 2; ++k) {
            const std::string eloc = loc + ".ends[" + std::to_string(k) + "]";
            raw.edges[id][k] = integer(ends[k], eloc);
            check_ref(raw.edges[id][k], vs.size(), "vertex", eloc);
        }
        const double inv = number(es[i], "inversive_distance", loc);
        if (!(inv > 1.0) || !std::isfinite(inv)) {
            raise(ErrorKind::ValidationError, loc + ".inversive_distance must exceed 1");
        }
        pk.inversive[id] = inv;
    }
    raw.faces.resize(fs.size());
    for (std::size_t f = 0; f < fs.size(); ++f) {
        const std::string loc = at("faces", f);
        raw.faces[f].corners = triple(fs[f], "corners", loc);
        raw.faces[f].sides = triple(fs[f], "sides", loc);
        for (int k = 0; k < 3; ++k) {
            check_ref(raw.faces[f].corners[k], vs.size(), "vertex",
                      loc + ".corners[" + std::to_string(k) + "]");
            check_ref(raw.faces[f].sides[k], es.size(), "edge",
                      loc + ".sides[" + std::to_string(k) + "]");
        }
    }

    std::optional<TriSurface> surface;
    try {
        surface = build_surface(std::move(raw));
    } catch (const Error& e) {
        raise(ErrorKind::ValidationError, std::string("$.faces: ") + e.what());
    }
    const auto issues = packing_issues(*surface, pk);
    if (!issues.empty()) raise(ErrorKind::ValidationError, issues.front());

    std::optional<std::vector<double>> kbar;
    if (const auto it = doc.find("target_curvature"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) raise(ErrorKind::ParseError, "$.target_curvature: expected an array");
        std::vector<double> k(vs.size(), 0.0);
        std::vector<bool> seen(vs.size(), false);
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string loc = at("target_curvature", i);
            const int vid = integer(field((*it)[i], "vid", loc), loc + ".vid");
            check_ref(vid, vs.size(), "vertex", loc + ".vid");
            if (seen[vid]) raise(ErrorKind::ValidationError, loc + ".vid: duplicate vertex " + std::to_string(vid));
            seen[vid] = true;
            k[vid] = number((*it)[i], "kbar", loc);
        }
        for (std::size_t v = 0; v < vs.size(); ++v) {
            if (!seen[v]) {
                raise(ErrorKind::ValidationError,
                      "$.target_curvature: no entry for vertex " + std::to_string(v));
            }
        }
        kbar = std::move(k);
    }
    return {std::move(*surface), std::move(pk), std::move(kbar)};
}

inline MeshFile parse_mesh(const std::string& text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        raise(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
    }
    return parse_mesh(doc);
}

inline Json mesh_to_json(const TriSurface& s, const Packing& pk,
                         const std::optional<std::vector<double>>& kbar = std::nullopt)
{
    Json doc;
    doc["format_version"] = mesh_format_version;
    Json& vs = doc["vertices"] = Json::array();
    for (int v = 0; v < s.vertex_count(); ++v) vs.push_back({{"id", v}, {"radius", pk.radius[v]}});
    Json& es = doc["edges"] = Json::array();
    for (int e = 0; e < s.edge_count(); ++e) {
        const auto& ends = s.edge_ends(e);
        es.push_back({{"id", e}, {"ends", {ends[0], ends[1]}}, {"inversive_distance", pk.inversive[e]}});
    }
    Json& fs = doc["faces"] = Json::array();
    for (const Face& f : s.faces()) fs.push_back({{"corners", f.corners}, {"sides", f.sides}});
    if (kbar) {
        Json& t = doc["target_curvature"] = Json::array();
        for (std::size_t v = 0; v < kbar->size(); ++v) t.push_back({{"vid", v}, {"kbar", (*kbar)[v]}});
    }
    return doc;
}

/// Doubles are written in shortest round-trip form, at most 17 significant digits.
inline std::string serialize_mesh(const TriSurface& s, const Packing& pk,
                                  const std::optional<std::vector<double>>& kbar = std::nullopt)
{
    return mesh_to_json(s, pk, kbar).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports

enum class RunStatus { converged, stalled, max_iterations, surgery_diverged, invalid_input };

inline const char* to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::stalled: return "stalled";
    case RunStatus::max_iterations: return "max_iterations";
    case RunStatus::surgery_diverged: return "surgery_diverged";
    case RunStatus::invalid_input: return "invalid_input";
    }
    return "invalid_input";
}

inline RunStatus run_status(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return RunStatus::converged;
    case SolveStatus::stalled: return RunStatus::stalled;
    case SolveStatus::max_iterations: return RunStatus::max_iterations;
    case SolveStatus::surgery_diverged: return RunStatus::surgery_diverged;
    }
    return RunStatus::stalled;
}

struct ReportInput {
    std::string command;
    std::string input_path;
    std::optional<std::string> digest;
    const TriSurface* surface{nullptr};
    const Packing* packing{nullptr};
    std::optional<std::vector<double>> kbar;
    std::vector<FlipEvent> flips;
    std::vector<TraceEntry> trace;
    RunStatus status{RunStatus::invalid_input};
    std::string message;
    int iterations{0};
};

inline Json flip_event_json(const FlipEvent& ev)
{
    return {{"edge", ev.edge},
            {"iteration", ev.iteration},
            {"margin_before", ev.margin_before},
            {"inversive_before", {{"a", ev.a}, {"b", ev.b}, {"c", ev.c}, {"d", ev.d}, {"e", ev.e}}},
            {"inversive_after", ev.f}};
}

inline Json trace_json(const TraceEntry& t)
{
    return {{"iteration", t.iteration},
            {"max_residual", t.max_residual},
            {"potential", t.potential},
            {"step_length", t.step_length},
            {"flips", t.flips}};
}

/**
 * Assembles a report. Geometry sections are filled when a surface and packing
 * are supplied, otherwise they are empty and the global numbers are null.
 */
inline Json build_report(const ReportInput& in)
{
    Json r;
    r["format_version"] = report_format_version;
    r["command"] = in.command;
    r["input"] = {{"path", in.input_path}, {"digest", in.digest ? Json(*in.digest) : Json(nullptr)}};
    r["vertices"] = Json::array();
    r["edges"] = Json::array();
    r["faces"] = Json::array();
    r["flip_log"] = Json::array();
    for (const FlipEvent& ev : in.flips) r["flip_log"].push_back(flip_event_json(ev));
    r["trace"] = Json::array();
    for (const TraceEntry& t : in.trace) r["trace"].push_back(trace_json(t));

    Json g = {{"chi", nullptr},
              {"total_area", nullptr},
              {"gauss_bonnet_residual", nullptr},
              {"solver_status", to_string(in.status)},
              {"hessian_spectrum_sign", nullptr},
              {"iterations", in.iterations},
              {"message", in.message}};

    if (in.surface && in.packing) {
        const TriSurface& s = *in.surface;
        const Packing& pk = *in.packing;
        const CurvatureData c = curvatures(s, pk);
        for (int v = 0; v < s.vertex_count(); ++v) {
            r["vertices"].push_back({{"id", v},
                                     {"radius", pk.radius[v]},
                                     {"u", u_of_radius(pk.radius[v])},
                                     {"K", c.K[v]},
                                     {"Kbar", in.kbar ? Json((*in.kbar)[v]) : Json(nullptr)}});
        }
        const auto margins = delaunay_margins(s, pk);
        for (int e = 0; e < s.edge_count(); ++e) {
            const auto& ends = s.edge_ends(e);
            const double len = edge_length(pk.radius[ends[0]], pk.radius[ends[1]], pk.inversive[e]).value;
            r["edges"].push_back({{"id", e},
                                  {"ends", {ends[0], ends[1]}},
                                  {"I", pk.inversive[e]},
                                  {"length", acosh_stable(len)},
                                  {"delaunay_margin", margins[e]}});
        }
        for (int f = 0; f < s.face_count(); ++f) {
            const FaceMetrics fm = face_metrics(s, pk, f);
            r["faces"].push_back({{"id", f},
                                  {"corners", s.face(f).corners},
                                  {"sides", s.face(f).sides},
                                  {"xi", fm.xi},
                                  {"rho", fm.rho ? Json(*fm.rho) : Json(nullptr)},
                                  {"area", c.face_area[f]},
                                  {"angles", c.angles[f]}});
        }
        g["chi"] = s.euler_characteristic();
        g["total_area"] = c.total_area;
        g["gauss_bonnet_residual"] = gauss_bonnet_residual(s, c);
        g["hessian_spectrum_sign"] = spectrum_sign(hessian(s, pk));
    }
    r["global"] = std::move(g);
    return r;
}

}  // namespace hidra
