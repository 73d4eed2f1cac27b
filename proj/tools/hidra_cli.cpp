#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "hidra/io.hpp"
#include "hidra/solver.hpp"
#include "hidra/suite.hpp"

namespace
{

using hidra::ErrorKind;
using hidra::Json;
using hidra::RunStatus;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_nonconvergence = 3;
constexpr int exit_divergence = 4;

struct Settings {
    double tol{1e-10};
    double tol_delaunay{hidra::tol_delaunay_default};
    int flip_budget{0};
    int max_iters{100};
    double dt{0.1};
    double t_max{1000.0};
    std::uint64_t seed{hidra::SuiteOptions{}.seed};
    std::optional<double> target_uniform;
};

/// Raw flag values; unset means "fall through to the config file or default".
struct Flags {
    std::string mesh;
    std::string out;
    std::string mesh_out;
    std::string config;
    std::optional<double> tol, tol_delaunay, dt, t_max, target_uniform;
    std::optional<int> flip_budget, max_iters;
    std::optional<std::uint64_t> seed;
};

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return "sha256:" + os.str();
}

std::optional<std::string> read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
void merge(T& dst, const Json& cfg, const char* key, const std::optional<T>& flag)
{
    if (flag) {
        dst = *flag;
    } else if (const auto it = cfg.find(key); it != cfg.end()) {
        if (!it->is_number()) hidra::raise(ErrorKind::ValidationError, std::string("config.") + key + ": expected a number");
        dst = it->get<T>();
    }
}

Settings resolve_settings(const Flags& f)
{
    Json cfg = Json::object();
    if (!f.config.empty()) {
        const auto text = read_file(f.config);
        if (!text) hidra::raise(ErrorKind::ValidationError, "cannot read config file " + f.config);
        try {
            cfg = Json::parse(*text);
        } catch (const Json::parse_error& e) {
            hidra::raise(ErrorKind::ParseError, "config: " + std::string(e.what()));
        }
        if (!cfg.is_object()) hidra::raise(ErrorKind::ParseError, "config: expected an object");
    }
    Settings s;
    merge(s.tol, cfg, "tol", f.tol);
    merge(s.tol_delaunay, cfg, "tol_delaunay", f.tol_delaunay);
    merge(s.flip_budget, cfg, "flip_budget", f.flip_budget);
    merge(s.max_iters, cfg, "max_iters", f.max_iters);
    merge(s.dt, cfg, "dt", f.dt);
    merge(s.t_max, cfg, "t_max", f.t_max);
    if (f.target_uniform) {
        s.target_uniform = f.target_uniform;
    } else if (const auto it = cfg.find("target_uniform"); it != cfg.end() && it->is_number()) {
        s.target_uniform = it->get<double>();
    }
    if (f.seed) {
        s.seed = *f.seed;
    } else if (const char* env = std::getenv("HIDRA_SEED"); env && *env) {
        try {
            s.seed = std::stoull(env);
        } catch (const std::exception&) {
            hidra::raise(ErrorKind::ValidationError, "HIDRA_SEED must be an unsigned integer");
        }
    } else if (const auto it = cfg.find("seed"); it != cfg.end() && it->is_number_unsigned()) {
        s.seed = it->get<std::uint64_t>();
    }
    if (!(s.tol > 0.0)) hidra::raise(ErrorKind::ValidationError, "--tol must be positive");
    if (s.max_iters < 0) hidra::raise(ErrorKind::ValidationError, "--max-iters must be nonnegative");
    if (s.flip_budget < 0) hidra::raise(ErrorKind::ValidationError, "flip_budget must be nonnegative");
    return s;
}

int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::SurgeryDiverged:
    case ErrorKind::NonCompactOrthocircle:
    case ErrorKind::FlipIllegal:
    case ErrorKind::SolverStalled:
    case ErrorKind::FlowStalled:
    case ErrorKind::MaxIterations:
        return exit_divergence;
    default:
        return exit_invalid;
    }
}

int exit_code_for(RunStatus s)
{
    switch (s) {
    case RunStatus::converged: return exit_ok;
    case RunStatus::stalled:
    case RunStatus::max_iterations: return exit_nonconvergence;
    case RunStatus::surgery_diverged: return exit_divergence;
    case RunStatus::invalid_input: return exit_invalid;
    }
    return exit_divergence;
}

class Run
{
public:
    Run(std::string command, const Flags& flags) : command_(std::move(command)), flags_(flags)
    {
        in_.command = command_;
        in_.input_path = flags.mesh;
    }

    int execute()
    {
        int code = exit_divergence;
        try {
            const Settings s = resolve_settings(flags_);
            code = dispatch(s);
        } catch (const hidra::Error& e) {
            code = exit_code_for(e.kind());
            in_.status = code == exit_invalid ? RunStatus::invalid_input : RunStatus::surgery_diverged;
            in_.message = e.what();
            std::cerr << "hidra " << command_ << ": " << e.what() << "\n";
        } catch (const std::exception& e) {
            code = exit_divergence;
            in_.status = RunStatus::surgery_diverged;
            in_.message = std::string("internal error: ") + e.what();
            std::cerr << "hidra " << command_ << ": " << in_.message << "\n";
        }
        if (!flags_.out.empty() && !write_report()) return code == exit_ok ? exit_invalid : code;
        return code;
    }

private:
    void load_mesh(bool required)
    {
        if (flags_.mesh.empty()) {
            if (required) hidra::raise(ErrorKind::ValidationError, "no mesh file given");
            return;
        }
        const auto bytes = read_file(flags_.mesh);
        if (!bytes) hidra::raise(ErrorKind::ValidationError, "cannot read " + flags_.mesh);
        in_.digest = sha256_hex(*bytes);
        mesh_.emplace(hidra::parse_mesh(*bytes));
        surface_ = mesh_->surface;
        packing_ = mesh_->packing;
        in_.kbar = mesh_->kbar;
        publish();
    }

    void publish()
    {
        in_.surface = &*surface_;
        in_.packing = &packing_;
    }

    std::vector<double> target(const Settings& s)
    {
        if (s.target_uniform) in_.kbar = std::vector<double>(surface_->vertex_count(), *s.target_uniform);
        if (!in_.kbar) {
            hidra::raise(ErrorKind::ValidationError,
                         "no target curvature: pass --target-uniform or add target_curvature to the mesh");
        }
        return *in_.kbar;
    }

    hidra::SurgeryOptions surgery(const Settings& s) const
    {
        hidra::SurgeryOptions o;
        o.tol_delaunay = s.tol_delaunay;
        o.flip_budget = s.flip_budget;
        return o;
    }

    void adopt(const hidra::SolveState& st)
    {
        surface_ = st.surface;
        packing_ = st.packing;
        publish();
        in_.flips = st.flips;
        in_.trace = st.trace;
        in_.iterations = st.iterations;
        in_.status = hidra::run_status(st.status);
        in_.message = st.message;
    }

    int dispatch(const Settings& s)
    {
        if (command_ == "verify") return verify(s);
        load_mesh(true);
        if (command_ == "validate") return validate(s);
        if (command_ == "curvature") return finish(RunStatus::converged, "curvature evaluated");
        if (command_ == "delaunay") return delaunay(s);
        if (command_ == "solve") return solve(s);
        if (command_ == "flow") return flow(s);
        hidra::raise(ErrorKind::ValidationError, "unknown command " + command_);
    }

    int finish(RunStatus st, const std::string& msg)
    {
        in_.status = st;
        if (in_.message.empty()) in_.message = msg;
        return exit_code_for(st);
    }

    int validate(const Settings& s)
    {
        Json audit{{"non_delaunay_edges", Json::array()}, {"noncompact_faces", Json::array()}};
        const auto margins = hidra::delaunay_margins(*surface_, packing_);
        for (std::size_t e = 0; e < margins.size(); ++e) {
            if (margins[e] < -s.tol_delaunay) audit["non_delaunay_edges"].push_back(e);
        }
        for (int f = 0; f < surface_->face_count(); ++f) {
            if (!(hidra::face_metrics(*surface_, packing_, f).xi > 0.0)) audit["noncompact_faces"].push_back(f);
        }
        extra_["audit"] = audit;
        std::cout << "valid mesh: V=" << surface_->vertex_count() << " E=" << surface_->edge_count()
                  << " F=" << surface_->face_count() << " chi=" << surface_->euler_characteristic()
                  << ", " << audit["non_delaunay_edges"].size() << " non-Delaunay edges\n";
        return finish(RunStatus::converged, "mesh is valid");
    }

    int delaunay(const Settings& s)
    {
        try {
            hidra::SurgeryResult r = hidra::make_weighted_delaunay(*surface_, packing_, surgery(s));
            surface_ = std::move(r.surface);
            packing_ = std::move(r.packing);
            publish();
            in_.flips = std::move(r.flips);
        } catch (const hidra::Error& e) {
            if (e.kind() != ErrorKind::SurgeryDiverged && e.kind() != ErrorKind::NonCompactOrthocircle) throw;
            std::cerr << "hidra delaunay: " << e.what() << "\n";
            in_.message = e.what();
            return finish(RunStatus::surgery_diverged, "");
        }
        extra_["mesh"] = hidra::mesh_to_json(*surface_, packing_, in_.kbar);
        if (!flags_.mesh_out.empty()) {
            std::ofstream os(flags_.mesh_out);
            os << hidra::serialize_mesh(*surface_, packing_, in_.kbar);
            if (!os) hidra::raise(ErrorKind::ValidationError, "cannot write " + flags_.mesh_out);
        }
        std::cout << "weighted Delaunay after " << in_.flips.size() << " flips\n";
        return finish(RunStatus::converged, "weighted Delaunay");
    }

    int solve(const Settings& s)
    {
        const auto kbar = target(s);
        hidra::NewtonOptions o;
        o.tol_K = s.tol;
        o.max_iters = s.max_iters;
        o.surgery = surgery(s);
        o.potential.surgery = o.surgery;
        const hidra::SolveState st = hidra::newton_solve(*surface_, packing_, kbar, o);
        adopt(st);
        report_progress(st, kbar);
        return exit_code_for(in_.status);
    }

    int flow(const Settings& s)
    {
        const auto kbar = target(s);
        hidra::FlowOptions o;
        o.dt = s.dt;
        o.t_max = s.t_max;
        o.tol = s.tol;
        o.surgery = surgery(s);
        o.potential.surgery = o.surgery;
        const hidra::SolveState st = hidra::ricci_flow(*surface_, packing_, kbar, o);
        adopt(st);
        extra_["flow_time"] = st.time;
        report_progress(st, kbar);
        return exit_code_for(in_.status);
    }

    void report_progress(const hidra::SolveState& st, const std::vector<double>& kbar)
    {
        std::ostream& os = in_.status == RunStatus::converged ? std::cout : std::cerr;
        os << command_ << ": " << hidra::to_string(st.status) << " after " << st.iterations
           << " iterations, max |K - Kbar| = " << st.max_residual(kbar) << ", " << st.flips.size()
           << " flips";
        if (!st.message.empty()) os << " (" << st.message << ")";
        os << "\n";
    }

    int verify(const Settings& s)
    {
        load_mesh(false);
        hidra::SuiteOptions o;
        o.seed = s.seed;
        const auto checks = hidra::run_property_suite(o, surface_);
        bool all = true;
        Json list = Json::array();
        for (const auto& c : checks) {
            all = all && c.passed;
            list.push_back({{"name", c.name},
                            {"passed", c.passed},
                            {"samples", c.samples},
                            {"max_residual", c.max_residual},
                            {"tolerance", c.tolerance},
                            {"detail", c.detail}});
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  samples=" << c.samples
                      << " max_residual=" << c.max_residual << " tol=" << c.tolerance << "\n";
        }
        extra_["verify"] = {{"seed", s.seed}, {"passed", all}, {"checks", list}};
        if (!all) {
            in_.message = "property suite failed";
            return exit_divergence;
        }
        return finish(RunStatus::converged, "property suite passed");
    }

    bool write_report()
    {
        Json r;
        try {
            r = hidra::build_report(in_);
        } catch (const std::exception& e) {
            in_.surface = nullptr;
            in_.packing = nullptr;
            in_.message += std::string("; geometry omitted: ") + e.what();
            r = hidra::build_report(in_);
        }
        for (auto& [k, v] : extra_.items()) r[k] = v;
        std::ofstream os(flags_.out);
        os << r.dump(2) << "\n";
        if (!os) {
            std::cerr << "hidra " << command_ << ": cannot write " << flags_.out << "\n";
            return false;
        }
        return true;
    }

    std::string command_;
    Flags flags_;
    hidra::ReportInput in_;
    std::optional<hidra::MeshFile> mesh_;
    std::optional<hidra::TriSurface> surface_;
    hidra::Packing packing_;
    Json extra_ = Json::object();
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Inversive distance circle packings on closed hyperbolic surfaces"};
    app.require_subcommand(1);

    Flags flags;
    auto common = [&](CLI::App* sub, bool mesh_required) {
        auto* m = sub->add_option("mesh", flags.mesh, "mesh JSON file");
        if (mesh_required) m->required();
        sub->add_option("--out", flags.out, "write the JSON report here");
        sub->add_option("--config", flags.config, "JSON config file");
    };
    auto surgery_flags = [&](CLI::App* sub) {
        sub->add_option("--tol-delaunay", flags.tol_delaunay, "Delaunay margin tolerance");
        sub->add_option("--flip-budget", flags.flip_budget, "maximum flips per surgery (0: 100 x edges)");
    };

    CLI::App* validate = app.add_subcommand("validate", "schema and geometry audit");
    common(validate, true);
    surgery_flags(validate);

    CLI::App* curvature = app.add_subcommand("curvature", "curvatures, areas and Gauss-Bonnet residual");
    common(curvature, true);

    CLI::App* delaunay = app.add_subcommand("delaunay", "flip to the weighted Delaunay triangulation");
    common(delaunay, true);
    surgery_flags(delaunay);
    delaunay->add_option("--mesh-out", flags.mesh_out, "write the flipped mesh here");

    CLI::App* solve = app.add_subcommand("solve", "Newton solve for prescribed curvature");
    common(solve, true);
    surgery_flags(solve);
    solve->add_option("--tol", flags.tol, "curvature tolerance");
    solve->add_option("--max-iters", flags.max_iters, "Newton iteration limit");
    solve->add_option("--target-uniform", flags.target_uniform, "same target curvature at every vertex");

    CLI::App* flow = app.add_subcommand("flow", "discrete Ricci flow for prescribed curvature");
    common(flow, true);
    surgery_flags(flow);
    flow->add_option("--tol", flags.tol, "curvature tolerance");
    flow->add_option("--dt", flags.dt, "initial step size");
    flow->add_option("--t-max", flags.t_max, "flow time limit");
    flow->add_option("--target-uniform", flags.target_uniform, "same target curvature at every vertex");

    CLI::App* verify = app.add_subcommand("verify", "randomized property suite");
    common(verify, false);
    verify->add_option("--seed", flags.seed, "random seed (overrides HIDRA_SEED)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_invalid;
    }
    return Run(app.get_subcommands().front()->get_name(), flags).execute();
}
