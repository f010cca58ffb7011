// Command-line front end: generation, verification, transformation,
// reconstruction, simulation, and convergence studies with reproducible
// run manifests.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crod/expr.hpp"
#include "crod/reconstruct.hpp"
#include "crod/rodsim.hpp"
#include "crod/symmetry.hpp"
#include "crod/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace crod;

namespace {

constexpr const char* kVersion = "1.0.0";

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + p.string());
    out << data;
}

std::string digest_of(const fs::path& p) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_file(p))));
    return buf;
}

struct Global {
    std::string out_dir = ".";
    uint64_t seed = 1;
    int threads = 1;
    double tol = 0.0;  // 0 selects each command's built-in default

    fs::path out(const std::string& name) const {
        fs::create_directories(out_dir);
        return fs::path(out_dir) / name;
    }
};

/// Every command writes its manifest before any data file, then rewrites it
/// with output digests once the data is on disk. No timestamps: identical
/// configurations produce byte-identical manifests.
struct Manifest {
    json doc;
    fs::path path;

    Manifest(const Global& g, const std::string& command, json config) {
        doc["command"] = command;
        doc["version"] = kVersion;
        doc["seed"] = g.seed;
        doc["threads"] = g.threads;
        doc["tol"] = g.tol;
        doc["config"] = std::move(config);
        doc["outputs"] = json::object();
        path = g.out(command + "_manifest.json");
        write_file(path, doc.dump(2) + "\n");
    }
    void finish(const std::vector<fs::path>& outputs) {
        for (const fs::path& p : outputs)
            doc["outputs"][p.filename().string()] = digest_of(p);
        write_file(path, doc.dump(2) + "\n");
    }
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%d,%lf,%lf,%d%c", &g.s0, &g.s1, &g.ns,
                    &g.t0, &g.t1, &g.nt, &extra) != 6)
        throw CLI::ValidationError("--grid", "expected s0,s1,ns,t0,t1,nt");
    if (g.ns < 2 || g.nt < 2)
        throw CLI::ValidationError("--grid", "grid needs at least 2 points per axis");
    return g;
}

json grid_json(const GridSpec& g) {
    return json{{"s0", g.s0}, {"s1", g.s1}, {"ns", g.ns},
                {"t0", g.t0}, {"t1", g.t1}, {"nt", g.nt}};
}

GridSpec grid_from_json(const json& j) {
    GridSpec g;
    g.s0 = j.at("s0");
    g.s1 = j.at("s1");
    g.ns = j.at("ns");
    g.t0 = j.at("t0");
    g.t1 = j.at("t1");
    g.nt = j.at("nt");
    return g;
}

struct FamilyFlags {
    std::string a = "0", b = "0", c = "0";
    std::string f1, f2, f3;
    bool random = false;

    void add_to(CLI::App* cmd, bool with_random) {
        cmd->add_option("--a", a, "p component a(s,t)");
        cmd->add_option("--b", b, "p component b(s,t)");
        cmd->add_option("--c", c, "p component c(s,t)");
        cmd->add_option("--f1", f1, "seed component f1(t)");
        cmd->add_option("--f2", f2, "seed component f2(t)");
        cmd->add_option("--f3", f3, "seed component f3(t)");
        if (with_random)
            cmd->add_flag("--random", random,
                          "draw (p, f) from the documented random family using --seed");
    }
    /// Resolves --random draws and rejects missing seed components; the
    /// resolved expression strings are what lands in the manifest.
    void resolve(uint64_t seed) {
        if (random) {
            ExprRng rng(seed);
            const VecExpr p = random_p(rng);
            const VecExpr f = random_f(rng);
            a = to_string(p.x);
            b = to_string(p.y);
            c = to_string(p.z);
            f1 = to_string(f.x);
            f2 = to_string(f.y);
            f3 = to_string(f.z);
            return;
        }
        for (const auto* part : {&f1, &f2, &f3})
            if (part->empty())
                throw CLI::RequiredError("--f1, --f2 and --f3 (or --random)");
    }
    json to_json() const {
        return json{{"a", a}, {"b", b}, {"c", c},
                    {"f1", f1}, {"f2", f2}, {"f3", f3}};
    }
    void from_json(const json& j) {
        a = j.at("a");
        b = j.at("b");
        c = j.at("c");
        f1 = j.at("f1");
        f2 = j.at("f2");
        f3 = j.at("f3");
        random = false;
    }
    SolutionFamily build() const {
        return general_solution(parse_vec(a, b, c), parse_vec(f1, f2, f3));
    }
};

void write_solution_csv(const fs::path& path, const SolutionFamily& fam,
                        const GridSpec& grid, bool emit_residual) {
    std::ostringstream os;
    os << "s,t,omega1,omega2,omega3,kappa1,kappa2,kappa3";
    if (emit_residual) os << ",residual";
    os << '\n';
    EvalCache cache;
    for (int j = 0; j < grid.nt; ++j)
        for (int i = 0; i < grid.ns; ++i) {
            const double s = grid.s(i), t = grid.t(j);
            cache.reset(s, t);
            const Vec3 w = fam.omega.eval(cache);
            const Vec3 k = fam.kappa.eval(cache);
            os << fmt17(s) << ',' << fmt17(t) << ',' << fmt17(w.x) << ','
               << fmt17(w.y) << ',' << fmt17(w.z) << ',' << fmt17(k.x) << ','
               << fmt17(k.y) << ',' << fmt17(k.z);
            if (emit_residual) os << ',' << fmt17(max_abs(fam.residual(cache)));
            os << '\n';
        }
    write_file(path, os.str());
}

// ---------------------------------------------------------------------- gen

int cmd_gen(const Global& g, FamilyFlags fam_flags, const std::string& grid_flag,
            bool emit_residual, const std::string& manifest_in) {
    GridSpec grid;
    if (!manifest_in.empty()) {
        const json m = json::parse(read_file(manifest_in));
        fam_flags.from_json(m.at("config").at("family"));
        grid = grid_from_json(m.at("config").at("grid"));
        emit_residual = m.at("config").at("emit_residual");
    } else {
        fam_flags.resolve(g.seed);
        grid = parse_grid(grid_flag);
    }

    json config{{"family", fam_flags.to_json()},
                {"grid", grid_json(grid)},
                {"emit_residual", emit_residual}};
    Manifest man(g, "gen", config);

    const SolutionFamily fam = fam_flags.build();
    const fs::path csv = g.out("solution.csv");
    write_solution_csv(csv, fam, grid, emit_residual);
    man.finish({csv});
    return 0;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const Global& g, FamilyFlags fam_flags, const std::string& grid_flag,
               const std::string& manifest_in, bool points) {
    GridSpec grid;
    if (!manifest_in.empty()) {
        const json m = json::parse(read_file(manifest_in));
        fam_flags.from_json(m.at("config").at("family"));
        grid = grid_from_json(m.at("config").at("grid"));
        if (!grid_flag.empty()) grid = parse_grid(grid_flag);
    } else {
        fam_flags.resolve(g.seed);
        grid = parse_grid(grid_flag.empty() ? "0,1,101,0,1,101" : grid_flag);
    }
    const double tol = g.tol > 0 ? g.tol : 1e-9;

    json config{{"family", fam_flags.to_json()},
                {"grid", grid_json(grid)},
                {"points", points},
                {"residual_tol", tol}};
    Manifest man(g, "verify", config);

    const SolutionFamily fam = fam_flags.build();
    const ResidualReport rep = residual_subsystem(fam, grid, g.threads);

    const fs::path report = g.out("report.json");
    write_file(report, rep.to_json(points) + "\n");
    const fs::path csv = g.out("residual.csv");
    std::ostringstream os;
    rep.write_csv(os);
    write_file(csv, os.str());
    man.finish({report, csv});

    std::printf("residual max-norm %s (tol %s): %s\n", fmt17(rep.max_norm).c_str(),
                fmt17(tol).c_str(), rep.max_norm <= tol ? "PASS" : "FAIL");
    return rep.max_norm <= tol ? 0 : 1;
}

// ---------------------------------------------------------------- transform

int cmd_transform(const Global& g, FamilyFlags fam_flags, const std::string& pa,
                  const std::string& pb, const std::string& pc,
                  double shift_s, double shift_t, const std::string& grid_flag) {
    fam_flags.resolve(g.seed);
    const GridSpec grid = parse_grid(grid_flag);
    const double tol = g.tol > 0 ? g.tol : 1e-8;

    json config{{"family", fam_flags.to_json()},
                {"p_prime", {{"a", pa}, {"b", pb}, {"c", pc}}},
                {"shift_s", shift_s},
                {"shift_t", shift_t},
                {"grid", grid_json(grid)},
                {"residual_tol", tol}};
    Manifest man(g, "transform", config);

    SolutionFamily fam = fam_flags.build();
    if (shift_s != 0.0 || shift_t != 0.0) fam = shift_family(fam, shift_s, shift_t);
    const VecExpr pp = parse_vec(pa, pb, pc);
    if (depends_on(pp, 's') || depends_on(pp, 't') || max_abs(pp(0, 0)) != 0.0)
        fam = transform_family(fam, pp);

    const fs::path csv = g.out("transformed.csv");
    write_solution_csv(csv, fam, grid, true);
    const ResidualReport rep = residual_subsystem(fam, grid, g.threads);
    const fs::path report = g.out("report.json");
    write_file(report, rep.to_json(false) + "\n");
    man.finish({csv, report});

    std::printf("transformed residual max-norm %s (tol %s): %s\n",
                fmt17(rep.max_norm).c_str(), fmt17(tol).c_str(),
                rep.max_norm <= tol ? "PASS" : "FAIL");
    return rep.max_norm <= tol ? 0 : 1;
}

// -------------------------------------------------------------- reconstruct

int cmd_reconstruct(const Global& g, FamilyFlags fam_flags, const std::string& ka,
                    const std::string& kb, const std::string& kc,
                    const std::string& p0a, const std::string& p0b,
                    const std::string& p0c, const std::string& grid_flag,
                    double ode_step, const std::string& manifest_in) {
    std::string mode = ka.empty() ? "fixture" : "direct";
    GridSpec grid;
    if (!manifest_in.empty()) {
        const json m = json::parse(read_file(manifest_in));
        const json& cfg = m.at("config");
        mode = cfg.at("mode");
        grid = grid_from_json(cfg.at("grid"));
        if (mode == "fixture") fam_flags.from_json(cfg.at("family"));
        ode_step = cfg.at("ode_step");
    } else {
        grid = parse_grid(grid_flag);
        if (mode == "fixture") fam_flags.resolve(g.seed);
    }

    json config{{"mode", mode}, {"grid", grid_json(grid)}, {"ode_step", ode_step}};
    if (mode == "fixture")
        config["family"] = fam_flags.to_json();
    else
        config["kappa"] = json{{"k1", ka}, {"k2", kb}, {"k3", kc},
                               {"p0a", p0a}, {"p0b", p0b}, {"p0c", p0c}};
    Manifest man(g, "reconstruct", config);

    const auto s_grid = linspace(grid.s0, grid.s1, grid.ns);
    const auto t_grid = linspace(grid.t0, grid.t1, grid.nt);

    ReconstructionResult res;
    json diag;
    std::vector<fs::path> outputs;
    if (mode == "fixture") {
        const VecExpr p = parse_vec(fam_flags.a, fam_flags.b, fam_flags.c);
        const SolutionFamily fam = fam_flags.build();
        const VecExpr dpt = diff(p, 't');
        res = solve_p_from_kappa(
            [&](double s, double t) { return fam.eval_kappa(s, t); },
            [&](double t) { return p(grid.s0, t); }, s_grid, t_grid, ode_step);
        if (!res.singular) {
            res.f = solve_f_from_omega(
                [&](double t) { return fam.eval_omega(grid.s0, t); },
                [&](double t) { return p(grid.s0, t); },
                [&](double t) { return dpt(grid.s0, t); }, t_grid);
            const VecExpr f = parse_vec(fam_flags.f1, fam_flags.f2, fam_flags.f3);
            double p_err = 0.0, f_err = 0.0;
            for (int j = 0; j < grid.nt; ++j) {
                for (int i = 0; i < grid.ns; ++i)
                    p_err = std::max(p_err, max_abs(res.p[size_t(j) * grid.ns + i] -
                                                    p(s_grid[i], t_grid[j])));
                f_err = std::max(f_err, max_abs(res.f[j] - f(0.0, t_grid[j])));
            }
            diag["max_p_error"] = p_err;
            diag["max_f_error"] = f_err;
        }
    } else {
        const VecExpr kappa = parse_vec(ka, kb, kc);
        const VecExpr p0 = parse_vec(p0a, p0b, p0c);
        if (depends_on(p0, 's'))
            throw std::invalid_argument("reconstruct: p0 must depend on t only");
        res = solve_p_from_kappa([&](double s, double t) { return kappa(s, t); },
                                 [&](double t) { return p0(0.0, t); }, s_grid,
                                 t_grid, ode_step);
    }

    const fs::path pcsv = g.out("p.csv");
    std::ostringstream os;
    res.write_p_csv(os);
    write_file(pcsv, os.str());
    outputs.push_back(pcsv);
    if (!res.f.empty()) {
        const fs::path fcsv = g.out("f.csv");
        std::ostringstream fo;
        res.write_f_csv(fo);
        write_file(fcsv, fo.str());
        outputs.push_back(fcsv);
    }
    diag.update(json::parse(res.diagnostics_json()));
    const fs::path dj = g.out("diagnostics.json");
    write_file(dj, diag.dump(2) + "\n");
    outputs.push_back(dj);
    man.finish(outputs);

    if (res.singular)
        throw SingularityError("reconstruction hit the singular determinant at s=" +
                               fmt17(res.singular_s) + ", t=" + fmt17(res.singular_t) +
                               " (|det M|=" + fmt17(res.singular_det) + ")");
    return 0;
}

// ----------------------------------------------------------------- simulate

Vec3 json_vec(const json& j) { return {j.at(0), j.at(1), j.at(2)}; }

std::vector<Vec3> eval_initial(const json& arr, const std::vector<double>& s) {
    const VecExpr v = parse_vec(arr.at(0).get<std::string>(),
                                arr.at(1).get<std::string>(),
                                arr.at(2).get<std::string>());
    if (depends_on(v, 't'))
        throw std::invalid_argument("initial condition must depend on s only");
    std::vector<Vec3> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = v(s[i], 0.0);
    return out;
}

int cmd_simulate(const Global& g, const std::string& config_path) {
    const json cfg = json::parse(read_file(config_path));

    MaterialParams mp;
    const json& m = cfg.at("material");
    mp.rho = m.value("rho", 1.0);
    mp.A = m.value("A", 1.0);
    mp.E = m.value("E", 1.0);
    mp.Eb = m.value("Eb", 1.0);
    mp.G = m.value("G", 1.0);
    mp.I1 = m.value("I1", 1.0);
    mp.I2 = m.value("I2", 1.0);
    mp.I3 = m.value("I3", 1.0);
    if (m.contains("J")) mp.J = json_vec(m.at("J"));
    if (m.contains("kappa0")) mp.kappa0 = json_vec(m.at("kappa0"));
    if (m.contains("nu0")) mp.nu0 = json_vec(m.at("nu0"));
    if (!mp.stiffnesses_positive() || mp.J.x <= 0 || mp.J.y <= 0 || mp.J.z <= 0)
        throw std::domain_error("simulate: material stiffnesses must be positive");

    SimOptions opt;
    const std::string bc = cfg.value("boundary", "periodic");
    if (bc == "periodic")
        opt.bc = BoundaryMode::Periodic;
    else if (bc == "clamped-free")
        opt.bc = BoundaryMode::ClampedFree;
    else
        throw std::invalid_argument("simulate: boundary must be periodic or clamped-free");
    opt.cfl = cfg.value("cfl", 0.5);
    opt.cfl_hard = cfg.value("cfl_hard", false);
    if (cfg.contains("gravity")) {
        opt.gravity = cfg.at("gravity").value("enabled", false);
        if (cfg.at("gravity").contains("g")) opt.g = json_vec(cfg.at("gravity").at("g"));
    }

    RodState st;
    st.L = cfg.at("grid").at("L");
    st.N = cfg.at("grid").at("N");
    if (st.N < 5) throw std::invalid_argument("simulate: need at least 5 nodes");
    std::vector<double> s(st.N);
    for (int i = 0; i < st.N; ++i) s[i] = i * st.ds(opt.bc);
    const json& init = cfg.at("initial");
    st.kappa = eval_initial(init.at("kappa"), s);
    st.nu = eval_initial(init.at("nu"), s);
    st.omega = eval_initial(init.at("omega"), s);
    st.ups = eval_initial(init.at("ups"), s);

    const double t_end = cfg.at("t_end");
    double dt = cfg.value("dt", 0.0);
    if (dt <= 0.0) dt = opt.cfl * st.ds(opt.bc) / max_wave_speed(mp);
    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-12)));
    dt = t_end / steps;
    const int cadence = cfg.value("output_every", std::max(1, steps / 10));

    json config = cfg;
    config["resolved_dt"] = dt;
    config["resolved_steps"] = steps;
    Manifest man(g, "simulate", config);

    std::ostringstream fields;
    fields << "t,s,kappa1,kappa2,kappa3,nu1,nu2,nu3,omega1,omega2,omega3,ups1,ups2,ups3\n";
    auto dump = [&](const RodState& r) {
        for (int i = 0; i < r.N; ++i)
            fields << fmt17(r.time) << ',' << fmt17(s[i]) << ',' << fmt17(r.kappa[i].x)
                   << ',' << fmt17(r.kappa[i].y) << ',' << fmt17(r.kappa[i].z) << ','
                   << fmt17(r.nu[i].x) << ',' << fmt17(r.nu[i].y) << ','
                   << fmt17(r.nu[i].z) << ',' << fmt17(r.omega[i].x) << ','
                   << fmt17(r.omega[i].y) << ',' << fmt17(r.omega[i].z) << ','
                   << fmt17(r.ups[i].x) << ',' << fmt17(r.ups[i].y) << ','
                   << fmt17(r.ups[i].z) << '\n';
    };

    SimDiag diag;
    dump(st);
    for (int k = 0; k < steps; ++k) {
        st = step_rk4(st, mp, opt, dt, &diag);
        if (!st.finite()) throw std::domain_error("simulate: state diverged (non-finite)");
        if ((k + 1) % cadence == 0 || k + 1 == steps) dump(st);
    }

    const fs::path fcsv = g.out("fields.csv");
    write_file(fcsv, fields.str());

    const FrameField frame = reconstruct_frame(st, Mat3::identity(), Vec3{});
    std::ostringstream fr;
    fr << "s,r1,r2,r3,d11,d12,d13,d21,d22,d23,d31,d32,d33\n";
    for (int i = 0; i < st.N; ++i) {
        fr << fmt17(s[i]) << ',' << fmt17(frame.r[i].x) << ',' << fmt17(frame.r[i].y)
           << ',' << fmt17(frame.r[i].z);
        for (int col = 0; col < 3; ++col)
            for (int row = 0; row < 3; ++row) fr << ',' << fmt17(frame.R[i](row, col));
        fr << '\n';
    }
    const fs::path frcsv = g.out("frame.csv");
    write_file(frcsv, fr.str());

    man.doc["diagnostics"] = {{"cfl_violations", diag.cfl_violations},
                              {"stiffness_ratio", stiffness_ratio(mp, st.L)},
                              {"frame_orthonormality", frame.orthonormality_defect()}};
    man.finish({fcsv, frcsv});
    return 0;
}

// -------------------------------------------------------------- convergence

int cmd_convergence(const Global& g, FamilyFlags fam_flags, std::vector<int> grids,
                    double t_end, double dt) {
    fam_flags.resolve(g.seed);
    if (grids.size() < 2)
        throw CLI::ValidationError("--grids", "need at least two grid sizes");

    json config{{"family", fam_flags.to_json()},
                {"grids", grids},
                {"t_end", t_end},
                {"dt", dt}};
    Manifest man(g, "convergence", config);

    const SolutionFamily fam = fam_flags.build();
    std::vector<double> errors;
    for (int n : grids) {
        if (n < 5) throw std::invalid_argument("convergence: grid size below 5");
        errors.push_back(manufactured_kappa_error(fam, n, t_end, dt));
    }

    json rep;
    rep["grids"] = grids;
    rep["errors"] = errors;
    json orders = json::array();
    for (size_t i = 0; i + 1 < grids.size(); ++i) {
        const double refine =
            static_cast<double>(grids[i + 1] - 1) / (grids[i] - 1);
        orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(refine));
    }
    rep["observed_orders"] = orders;
    const fs::path report = g.out("orders.json");
    write_file(report, rep.dump(2) + "\n");
    man.finish({report});

    for (size_t i = 0; i < orders.size(); ++i)
        std::printf("N %d -> %d: observed order %s\n", grids[i], grids[i + 1],
                    fmt17(orders[i]).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cosserat rod compatibility toolkit: exact solution families, "
                 "residual verification, symmetry transforms, inverse "
                 "reconstruction, and a method-of-lines rod simulator"};
    app.require_subcommand(1);

    Global g;
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed for random draws")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for grid sweeps")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "override the command's default tolerance");

    // gen
    auto* gen = app.add_subcommand("gen", "generate an exact solution CSV");
    FamilyFlags gen_fam;
    std::string gen_grid = "0,1,11,0,1,11", gen_manifest;
    bool gen_residual = false;
    gen_fam.add_to(gen, true);
    gen->add_option("--grid", gen_grid, "s0,s1,ns,t0,t1,nt")->capture_default_str();
    gen->add_flag("--emit-residual", gen_residual, "append a residual column");
    gen->add_option("--manifest", gen_manifest, "replay a previous gen manifest");

    // verify
    auto* verify = app.add_subcommand("verify", "residual report for a family");
    FamilyFlags ver_fam;
    std::string ver_grid, ver_manifest;
    bool ver_points = false;
    ver_fam.add_to(verify, true);
    verify->add_option("--grid", ver_grid, "s0,s1,ns,t0,t1,nt (default 0,1,101,0,1,101)");
    verify->add_option("--manifest", ver_manifest, "read the family from a gen manifest");
    verify->add_flag("--points", ver_points, "include per-point residuals in report.json");

    // transform
    auto* transform =
        app.add_subcommand("transform", "apply a symmetry group element or shift");
    FamilyFlags tr_fam;
    std::string tr_pa = "0", tr_pb = "0", tr_pc = "0", tr_grid = "0,1,21,0,1,21";
    double tr_ss = 0.0, tr_st = 0.0;
    tr_fam.add_to(transform, true);
    transform->add_option("--pa", tr_pa, "transform component a'(s,t)");
    transform->add_option("--pb", tr_pb, "transform component b'(s,t)");
    transform->add_option("--pc", tr_pc, "transform component c'(s,t)");
    transform->add_option("--shift-s", tr_ss, "translate the s variable");
    transform->add_option("--shift-t", tr_st, "translate the t variable");
    transform->add_option("--grid", tr_grid, "s0,s1,ns,t0,t1,nt")->capture_default_str();

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "recover (p, f) from target fields");
    FamilyFlags rec_fam;
    std::string rec_ka, rec_kb, rec_kc, rec_p0a = "0", rec_p0b = "0", rec_p0c = "0";
    std::string rec_grid = "0,1,21,0,1,9", rec_manifest;
    double rec_step = 1e-3;
    rec_fam.add_to(rec, false);
    rec->add_option("--ka", rec_ka, "target kappa component 1 (direct mode)");
    rec->add_option("--kb", rec_kb, "target kappa component 2");
    rec->add_option("--kc", rec_kc, "target kappa component 3");
    rec->add_option("--p0a", rec_p0a, "initial value a(s0, t)");
    rec->add_option("--p0b", rec_p0b, "initial value b(s0, t)");
    rec->add_option("--p0c", rec_p0c, "initial value c(s0, t)");
    rec->add_option("--grid", rec_grid, "s0,s1,ns,t0,t1,nt")->capture_default_str();
    rec->add_option("--ode-step", rec_step, "RK4 step along s")->capture_default_str();
    rec->add_option("--manifest", rec_manifest, "replay a previous reconstruct manifest");

    // simulate
    auto* sim = app.add_subcommand("simulate", "method-of-lines rod simulation");
    std::string sim_config;
    sim->add_option("--config", sim_config, "JSON simulation configuration")->required();

    // convergence
    auto* conv = app.add_subcommand("convergence", "manufactured-solution order study");
    FamilyFlags conv_fam;
    conv_fam.a = "0.3*s*t";
    conv_fam.b = "0.2*sin(s)";
    conv_fam.c = "0.1*t^2";
    conv_fam.f1 = "cos(t)";
    conv_fam.f2 = "t";
    conv_fam.f3 = "1";
    std::vector<int> conv_grids = {41, 81, 161};
    double conv_tend = 0.2, conv_dt = 1e-3;
    conv_fam.add_to(conv, true);
    conv->add_option("--grids", conv_grids, "node counts, coarse to fine")
        ->capture_default_str();
    conv->add_option("--t-end", conv_tend, "march horizon")->capture_default_str();
    conv->add_option("--dt", conv_dt, "time step")->capture_default_str();

    int rc = 0;
    gen->callback([&] { rc = cmd_gen(g, gen_fam, gen_grid, gen_residual, gen_manifest); });
    verify->callback(
        [&] { rc = cmd_verify(g, ver_fam, ver_grid, ver_manifest, ver_points); });
    transform->callback([&] {
        rc = cmd_transform(g, tr_fam, tr_pa, tr_pb, tr_pc, tr_ss, tr_st, tr_grid);
    });
    rec->callback([&] {
        rc = cmd_reconstruct(g, rec_fam, rec_ka, rec_kb, rec_kc, rec_p0a, rec_p0b,
                             rec_p0c, rec_grid, rec_step, rec_manifest);
    });
    sim->callback([&] { rc = cmd_simulate(g, sim_config); });
    conv->callback(
        [&] { rc = cmd_convergence(g, conv_fam, conv_grids, conv_tend, conv_dt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: expression parse failure at offset %zu: %s\n",
                     e.offset, e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
        return 2;
    } catch (const SingularityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const CflError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const EvalDomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return rc;
}
