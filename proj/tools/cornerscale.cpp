// Command-line front end: algebra verification, corner inspection, layout
// construction, field probing, energy evaluation, volume sweeps with
// exponent fits, and covering certification.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>

#include "corner/covering.hpp"
#include "corner/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace corner;

namespace {

Vec3 parse_vec(const std::string& s) {
    Vec3 v;
    if (std::sscanf(s.c_str(), "%lg,%lg,%lg", &v.x, &v.y, &v.z) != 3)
        throw std::runtime_error("expected a comma-separated triple, got '" + s + "'");
    return v;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json mat_json(const Mat3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back(vec_json(m.row(i)));
    return rows;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
        f << text;
    }
}

struct CornerFlags {
    std::string a = "1,0,1", b = "0,0,1", c = "0,-1,0";
    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "corner vector a as x,y,z");
        cmd->add_option("--b", b, "corner vector b as x,y,z");
        cmd->add_option("--c", c, "corner vector c as x,y,z");
    }
    CornerDomain domain() const {
        return validate_corner(parse_vec(a), parse_vec(b), parse_vec(c));
    }
};

// ---------------------------------------------------------------- verify

int run_verify_algebra(const std::string& out) {
    json rep;
    double twin_max = 0.0, habit_max = 0.0;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            double eps = permutation_sign(i, j);
            Mat3 lhs = variant_strain(i) - variant_strain(j);
            Mat3 rhs = 6.0 * eps * sym_outer(twin_normal(i, j), twin_normal(j, i));
            twin_max = std::max(twin_max, frobenius(lhs - rhs));
            habit_max = std::max(habit_max, habit_relation_residual(i, j));
        }

    ConstructionGradients g = construction_gradients();
    double grad_max = std::max({frobenius(sym(g.D1) - variant_strain(1)),
                                frobenius(sym(g.D2) - variant_strain(2)),
                                frobenius((g.D1 - g.D2) -
                                          6.0 * outer(twin_normal(1, 2), twin_normal(2, 1))),
                                frobenius(g.DM -
                                          2.0 * outer(twin_normal(2, 3), twin_normal(3, 2)))});

    bool compat_ok = true;
    double recover_max = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            auto res = compatibility_check(variant_strain(i), variant_strain(j));
            compat_ok = compat_ok && res.compatible;
            recover_max = std::max(recover_max, res.residual);
        }
        compat_ok = compat_ok && !compatibility_check(variant_strain(i), Mat3::zero()).compatible;
    }

    bool ok = twin_max < 1e-12 && habit_max < 1e-12 && grad_max < 1e-12 && compat_ok &&
              recover_max < 1e-9;
    rep["twin_relation_max_residual"] = twin_max;
    rep["habit_relation_max_residual"] = habit_max;
    rep["construction_gradient_max_residual"] = grad_max;
    rep["compatibility_classification_ok"] = compat_ok;
    rep["compatibility_reconstruction_max_residual"] = recover_max;
    rep["ok"] = ok;
    emit(rep, out);
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- inspect

int run_inspect_corner(const CornerFlags& flags, const std::string& out) {
    CornerDomain dom = flags.domain();
    json rep;
    rep["a"] = vec_json(dom.a);
    rep["b"] = vec_json(dom.b);
    rep["c"] = vec_json(dom.c);
    rep["mu"] = corner_mu(dom);

    auto n = find_habit_normal(dom);
    if (!n) {
        rep["habit_normal"] = "none: degenerate corner";
        emit(rep, out);
        return 0;
    }
    rep["habit_normal"] = vec_json(*n);
    HabitFrame f = build_frame(*n);
    rep["frame"]["b1"] = vec_json(f.b1);
    rep["frame"]["b2"] = vec_json(f.b2);
    rep["frame"]["b3"] = vec_json(f.b3);
    rep["frame"]["det_basis"] = f.det_basis;
    rep["variants"]["minority"] = f.grads.minority;
    rep["variants"]["majority"] = f.grads.majority;
    emit(rep, out);
    return 0;
}

// ---------------------------------------------------------------- build

json layout_summary(const BranchingLayout& layout) {
    const BranchingSchedule& s = layout.schedule;
    json rep;
    rep["V"] = layout.placement.V;
    rep["t"] = layout.placement.t;
    rep["R"] = s.R;
    rep["bounding_c"] = layout.placement.bounding_c;
    rep["z_R"] = vec_json(layout.placement.z_R);
    rep["habit_normal"] = vec_json(layout.frame.n);
    rep["w"] = s.w;
    rep["C1"] = s.C1;
    rep["K_side"] = s.K_side;
    rep["M"] = s.M;
    rep["fallback"] = s.fallback;
    rep["widths"] = s.widths;
    rep["heights"] = s.heights;
    return rep;
}

int run_build(const CornerFlags& flags, double volume, const std::string& voxel_out,
              int resolution, const std::string& out) {
    BranchingLayout layout = make_layout(flags.domain(), volume, true);
    json rep = layout_summary(layout);
    if (!voxel_out.empty()) {
        VoxelSet vox = voxelize_layout(layout, resolution);
        write_vox(vox, voxel_out);
        rep["voxel_out"] = voxel_out;
        rep["voxel_dims"] = json::array({vox.nx, vox.ny, vox.nz});
        rep["voxel_spacing"] = vox.spacing;
        rep["voxel_volume"] = vox.volume();
    }
    emit(rep, out);
    return 0;
}

// ---------------------------------------------------------------- probe

int run_probe(const CornerFlags& flags, double volume, const std::string& point,
              const std::string& out) {
    BranchingLayout layout = make_layout(flags.domain(), volume, true);
    Vec3 x = parse_vec(point);

    PhasePoint chi = chi_at(layout, x);
    DisplacementSample smp = u_total_at(layout, x);
    Mat3 mismatch = sym(smp.grad);
    if (chi.chi1) mismatch = mismatch - variant_strain(1);
    if (chi.chi2) mismatch = mismatch - variant_strain(2);
    if (chi.chi3) mismatch = mismatch - variant_strain(3);

    json rep;
    rep["point"] = vec_json(x);
    rep["chart"] = vec_json(layout.to_chart(x));
    rep["chi"] = json::array({chi.chi1, chi.chi2, chi.chi3});
    rep["pattern"] = chi.pattern;
    rep["u"] = vec_json(smp.u);
    rep["grad"] = mat_json(smp.grad);
    rep["elastic_density"] = frobenius_inner(mismatch, mismatch);
    emit(rep, out);
    return 0;
}

// ---------------------------------------------------------------- energy

int run_energy(const CornerFlags& flags, double volume, int grid_n, const std::string& method,
               const std::string& out) {
    BranchingLayout layout = make_layout(flags.domain(), volume);
    std::vector<EnergyBreakdown> results;
    if (method == "analytic" || method == "both")
        results.push_back(total_energy_analytic(layout));
    if (method == "grid" || method == "both")
        results.push_back(total_energy_grid(layout, QuadratureGrid::cubic(grid_n)));
    if (results.empty()) throw std::runtime_error("unknown method: " + method);

    std::string text = "V,R,method,interfacial,elastic,interior,layer,total\n";
    char line[512];
    for (const EnergyBreakdown& e : results) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.V,
                      e.R, e.method.c_str(), e.interfacial, e.elastic, e.interior,
                      e.layer + e.austenite_face, e.total);
        text += line;
        for (const std::string& w : e.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for writing: " + out);
        f << text;
    }
    return 0;
}

// ---------------------------------------------------------------- sweep

void apply_config_file(const std::string& path, std::map<std::string, std::string>& kv) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line without '=': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
}

int run_sweep_cmd(CLI::App* cmd, const CornerFlags& flags, const std::string& config_path,
                  double vmin, double vmax, int count, const std::string& method, int grid_n,
                  const std::string& out) {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) apply_config_file(config_path, kv);
    auto pick_d = [&](const char* key, double flag_val, const char* flag) {
        return cmd->count(flag) || !kv.count(key) ? flag_val : std::stod(kv[key]);
    };
    auto pick_s = [&](const char* key, std::string flag_val, const char* flag) {
        return cmd->count(flag) || !kv.count(key) ? flag_val : kv[key];
    };

    SweepConfig cfg;
    cfg.a = parse_vec(pick_s("a", flags.a, "--a"));
    cfg.b = parse_vec(pick_s("b", flags.b, "--b"));
    cfg.c = parse_vec(pick_s("c", flags.c, "--c"));
    cfg.method = pick_s("method", method, "--method");
    cfg.grid_resolution = int(pick_d("grid", grid_n, "--grid"));
    double lo = pick_d("vmin", vmin, "--vmin");
    double hi = pick_d("vmax", vmax, "--vmax");
    int n = int(pick_d("count", count, "--count"));
    cfg.volumes = log_spaced(lo, hi, n);

    std::string out_path = pick_s("out", out, "--out");
    auto rows = run_sweep(cfg);
    if (out_path.empty()) out_path = "sweep.csv";
    write_sweep_csv(rows, out_path);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    return 0;
}

// ---------------------------------------------------------------- fit

int run_fit(const std::string& input, const std::string& component, double vmin, double vmax,
            const std::string& out) {
    auto rows = read_sweep_csv(input);
    FitResult fit = fit_exponent(rows, component, vmin, vmax);
    json rep;
    rep["component"] = fit.component;
    rep["v_min"] = fit.v_min;
    rep["v_max"] = fit.v_max;
    rep["slope"] = fit.slope;
    rep["intercept"] = fit.intercept;
    rep["r2"] = fit.r2;
    emit(rep, out);
    return 0;
}

// ---------------------------------------------------------------- cover

json covering_json(const CoveringReport& rep) {
    json j;
    j["kappa"] = rep.kappa;
    j["mu"] = rep.mu;
    j["ball_count"] = rep.balls.size();
    j["disjoint_ok"] = rep.disjoint_ok;
    j["inside_ok"] = rep.inside_ok;
    j["coverage_ok"] = rep.coverage_ok;
    j["fraction_ok"] = rep.fraction_ok;
    j["covered_fraction"] = rep.covered_fraction;
    j["volume"] = rep.volume;
    j["sum_r3"] = rep.sum_r3;
    j["proxy_sum_r73"] = rep.proxy_sum_r73;
    j["c_lower"] = rep.c_lower;
    j["jensen_ok"] = rep.proxy_sum_r73 >= std::pow(rep.sum_r3, 7.0 / 9.0) - 1e-9;
    j["warnings"] = rep.warnings;
    json balls = json::array();
    for (const Ball& b : rep.balls)
        balls.push_back({{"center", vec_json(b.center)}, {"radius", b.radius}});
    j["balls"] = balls;
    return j;
}

int run_cover(const CornerFlags& flags, const std::string& input, double kappa, int window,
              std::size_t max_seeds, const std::string& out) {
    VoxelSet set = read_vox(input);
    CertifyOptions opt;
    opt.window = window;
    opt.max_seeds = max_seeds;
    CoveringReport rep = certify(set, flags.domain(), kappa, opt);
    emit(covering_json(rep), out);
    bool ok = rep.disjoint_ok && rep.inside_ok && rep.coverage_ok && rep.fraction_ok;
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- report

int run_report(const std::vector<std::string>& sweeps, const std::vector<std::string>& covers,
               const std::string& out) {
    if (sweeps.empty()) throw std::runtime_error("report needs at least one --sweep CSV");
    std::vector<SweepRow> rows;
    for (const std::string& path : sweeps) {
        auto part = read_sweep_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }

    json rep;
    bool ok = true;
    auto have_window = [&](const std::string& comp, double lo, double hi) {
        std::size_t n = 0;
        for (const SweepRow& r : rows)
            if (r.component == comp && r.V >= lo && r.V <= hi && r.method == "analytic") ++n;
        return n >= 4;
    };

    if (have_window("small_volume", 1e-6, 1e-2)) {
        FitResult f = fit_exponent(rows, "small_volume", 1e-6, 1e-2);
        bool pass = std::abs(f.slope - 2.0 / 3.0) <= 0.03;
        rep["small_volume_fit"] = {{"slope", f.slope}, {"r2", f.r2}, {"pass", pass}};
        ok = ok && pass;
    }
    if (have_window("interior", 1e3, 1e9)) {
        FitResult f = fit_exponent(rows, "interior", 1e3, 1e9);
        bool pass = std::abs(f.slope - 7.0 / 9.0) <= 0.02;
        rep["interior_fit"] = {{"slope", f.slope}, {"r2", f.r2}, {"pass", pass}};
        ok = ok && pass;
    }
    if (have_window("total", 1e4, 1e9)) {
        FitResult f = fit_exponent(rows, "total", 1e4, 1e9);
        bool pass = f.slope >= 0.72 && f.slope <= 0.80;
        double lo = 1e300, hi = 0.0;
        for (const SweepRow& r : rows)
            if (r.component == "total" && r.method == "analytic" && r.V >= 1e4 && r.V <= 1e9) {
                double q = r.total / std::pow(r.V, 7.0 / 9.0);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        bool bounded = hi / lo <= 5.0;
        rep["total_fit"] = {{"slope", f.slope},
                            {"r2", f.r2},
                            {"ratio_spread", hi / lo},
                            {"pass", pass && bounded}};
        ok = ok && pass && bounded;
    }

    // quadrature-vs-analytic deviations where both methods are present
    json devs = json::array();
    for (const SweepRow& a : rows) {
        if (a.method != "analytic" || a.component != "total") continue;
        for (const SweepRow& g : rows) {
            if (g.method != "grid" || g.component != "total" || g.V != a.V) continue;
            devs.push_back({{"V", a.V},
                            {"analytic", a.total},
                            {"grid", g.total},
                            {"relative_deviation", std::abs(g.total - a.total) / a.total}});
        }
    }
    if (!devs.empty()) rep["grid_deviations"] = devs;

    // per-cell constants across the canonical depths
    {
        double c_el = 0.0, c_in = 0.0, r_lo = 1e300, r_hi = 0.0;
        for (double R : {8.0, 64.0, 512.0}) {
            BranchingLayout layout = make_box_layout(R);
            const BranchingSchedule& s = layout.schedule;
            for (int i = 0; i <= s.M; ++i) {
                double w = s.widths[i], h = s.heights[i];
                double el = per_cell_elastic_exact(layout.frame, w, h);
                double in = 2.0 * per_cell_wall_area(layout.frame, w, h);
                c_el = std::max(c_el, el / (w * w * w * w / h));
                c_in = std::max(c_in, in / (h * w));
                double q = (el + in) / std::pow(w, 2.5);
                r_lo = std::min(r_lo, q);
                r_hi = std::max(r_hi, q);
            }
        }
        bool pass = r_hi / r_lo <= 3.0;
        rep["per_cell_constants"] = {{"elastic_over_w4_h", c_el},
                                     {"interfacial_over_hw", c_in},
                                     {"w52_ratio_spread", r_hi / r_lo},
                                     {"pass", pass}};
        ok = ok && pass;
    }

    json cover_list = json::array();
    for (const std::string& path : covers) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open cover report: " + path);
        json c = json::parse(f);
        bool pass = c.value("disjoint_ok", false) && c.value("inside_ok", false) &&
                    c.value("coverage_ok", false) && c.value("fraction_ok", false) &&
                    c.value("jensen_ok", false);
        cover_list.push_back({{"path", path}, {"pass", pass}});
        ok = ok && pass;
    }
    if (!cover_list.empty()) rep["coverings"] = cover_list;

    rep["ok"] = ok;
    emit(rep, out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching-microstructure constructions and energy scaling for "
                 "cubic-to-tetragonal martensite nucleation at a corner"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify-algebra", "check the exact tensor identities");
    std::string verify_out;
    verify->add_option("--out", verify_out, "write JSON here instead of stdout");

    auto* inspect = app.add_subcommand("inspect-corner", "mu, habit normal and frame");
    CornerFlags inspect_corner;
    inspect_corner.attach(inspect);
    std::string inspect_out;
    inspect->add_option("--out", inspect_out, "write JSON here instead of stdout");

    auto* build = app.add_subcommand("build", "construct a layout for a volume");
    CornerFlags build_corner;
    build_corner.attach(build);
    double build_volume = 100.0;
    std::string build_vox;
    int build_res = 128;
    std::string build_out;
    build->add_option("--volume", build_volume, "martensite volume")->required();
    build->add_option("--voxel-out", build_vox, "write the occupancy to this VOX3 file");
    build->add_option("--resolution", build_res, "voxels across the largest extent");
    build->add_option("--out", build_out, "write JSON here instead of stdout");

    auto* probe = app.add_subcommand("probe", "evaluate chi, u and grad at a point");
    CornerFlags probe_corner;
    probe_corner.attach(probe);
    double probe_volume = 100.0;
    std::string probe_point, probe_out;
    probe->add_option("--volume", probe_volume, "martensite volume")->required();
    probe->add_option("--point", probe_point, "world point as x,y,z")->required();
    probe->add_option("--out", probe_out, "write JSON here instead of stdout");

    auto* energy = app.add_subcommand("energy", "energy of the construction for a volume");
    CornerFlags energy_corner;
    energy_corner.attach(energy);
    double energy_volume = 100.0;
    int energy_grid = 128;
    std::string energy_method = "analytic", energy_out;
    energy->add_option("--volume", energy_volume, "martensite volume")->required();
    energy->add_option("--grid", energy_grid, "grid resolution per axis");
    energy->add_option("--method", energy_method, "analytic | grid | both");
    energy->add_option("--out", energy_out, "write CSV here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "energy over a volume range, CSV output");
    CornerFlags sweep_corner;
    sweep_corner.attach(sweep);
    std::string sweep_config, sweep_method = "analytic", sweep_out;
    double sweep_vmin = 10.0, sweep_vmax = 1e9;
    int sweep_count = 33, sweep_grid = 128;
    sweep->add_option("--config", sweep_config, "key=value config file");
    sweep->add_option("--vmin", sweep_vmin, "smallest volume");
    sweep->add_option("--vmax", sweep_vmax, "largest volume");
    sweep->add_option("--count", sweep_count, "number of log-spaced volumes");
    sweep->add_option("--method", sweep_method, "analytic | grid | both");
    sweep->add_option("--grid", sweep_grid, "grid resolution for the grid method");
    sweep->add_option("--out", sweep_out, "output CSV path (default sweep.csv)");

    auto* fit = app.add_subcommand("fit", "log-log exponent of a sweep component");
    std::string fit_input, fit_component = "total", fit_out;
    double fit_vmin = 1e3, fit_vmax = 1e9;
    fit->add_option("--input", fit_input, "sweep CSV")->required();
    fit->add_option("--component", fit_component, "small_volume | interior | layer | total");
    fit->add_option("--vmin", fit_vmin, "window lower end");
    fit->add_option("--vmax", fit_vmax, "window upper end");
    fit->add_option("--out", fit_out, "write JSON here instead of stdout");

    auto* cover = app.add_subcommand("cover", "covering certificate for a voxel set");
    CornerFlags cover_corner;
    cover_corner.attach(cover);
    std::string cover_input, cover_out;
    double cover_kappa = 0.25;
    int cover_window = 2;
    std::size_t cover_seeds = 10000;
    cover->add_option("--input", cover_input, "VOX3 occupancy file")->required();
    cover->add_option("--kappa", cover_kappa, "shrink factor in (0,1)");
    cover->add_option("--window", cover_window, "density window radius in voxels");
    cover->add_option("--max-seeds", cover_seeds, "density-point subsample cap");
    cover->add_option("--out", cover_out, "write JSON here instead of stdout");

    auto* report = app.add_subcommand("report", "summary with pass/fail thresholds");
    std::vector<std::string> report_sweeps, report_covers;
    std::string report_out;
    report->add_option("--sweep", report_sweeps, "sweep CSV (repeatable)")->required();
    report->add_option("--cover", report_covers, "covering JSON (repeatable)");
    report->add_option("--out", report_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify_algebra(verify_out);
        if (inspect->parsed()) return run_inspect_corner(inspect_corner, inspect_out);
        if (build->parsed())
            return run_build(build_corner, build_volume, build_vox, build_res, build_out);
        if (probe->parsed()) return run_probe(probe_corner, probe_volume, probe_point, probe_out);
        if (energy->parsed())
            return run_energy(energy_corner, energy_volume, energy_grid, energy_method,
                              energy_out);
        if (sweep->parsed())
            return run_sweep_cmd(sweep, sweep_corner, sweep_config, sweep_vmin, sweep_vmax,
                                 sweep_count, sweep_method, sweep_grid, sweep_out);
        if (fit->parsed()) return run_fit(fit_input, fit_component, fit_vmin, fit_vmax, fit_out);
        if (cover->parsed())
            return run_cover(cover_corner, cover_input, cover_kappa, cover_window, cover_seeds,
                             cover_out);
        if (report->parsed()) return run_report(report_sweeps, report_covers, report_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
