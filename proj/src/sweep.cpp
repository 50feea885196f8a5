#include "corner/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace corner {

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (lo <= 0.0 || hi <= lo || count < 2) throw std::invalid_argument("bad log-spaced range");
    std::vector<double> v(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        v[i] = std::exp(llo + (lhi - llo) * double(i) / double(count - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

namespace {

SweepRow row_from(double V, double R, const std::string& method, const std::string& component,
                  double interf, double elast) {
    SweepRow r;
    r.V = V;
    r.R = R;
    r.method = method;
    r.component = component;
    r.interfacial = interf;
    r.elastic = elast;
    r.total = interf + elast;
    return r;
}

void append_breakdown(std::vector<SweepRow>& rows, const EnergyBreakdown& e) {
    // the layer component absorbs the austenite face (both are the O(R^2)
    // boundary terms)
    rows.push_back(row_from(e.V, e.R, e.method, "interior", e.interior_interfacial,
                            e.interior_elastic));
    rows.push_back(row_from(e.V, e.R, e.method, "layer",
                            e.layer_interfacial + e.austenite_face, e.layer_elastic));
    rows.push_back(row_from(e.V, e.R, e.method, "total", e.interfacial, e.elastic));
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    if (config.volumes.empty()) throw std::invalid_argument("sweep: no volumes");
    for (std::size_t i = 0; i + 1 < config.volumes.size(); ++i)
        if (config.volumes[i] >= config.volumes[i + 1])
            throw std::invalid_argument("sweep: volumes must be ascending");
    if (config.volumes.front() <= 0.0) throw std::invalid_argument("sweep: volumes must be positive");

    CornerDomain dom = validate_corner(config.a, config.b, config.c);
    if (!find_habit_normal(dom))
        throw std::runtime_error(
            "degenerate corner: no habit plane cuts this corner; sweep aborted");

    bool analytic = config.method == "analytic" || config.method == "both";
    bool grid = config.method == "grid" || config.method == "both";
    if (!analytic && !grid) throw std::invalid_argument("sweep: unknown method " + config.method);

    std::vector<SweepRow> rows;
    for (double V : config.volumes) {
        if (V <= 1.0) {
            EnergyBreakdown e = small_volume_energy(V, dom);
            rows.push_back(row_from(V, e.R, "analytic", "small_volume", e.interfacial, e.elastic));
            continue;
        }
        BranchingLayout layout = make_layout(dom, V);
        if (analytic) append_breakdown(rows, total_energy_analytic(layout));
        if (grid)
            append_breakdown(rows,
                             total_energy_grid(layout, QuadratureGrid::cubic(config.grid_resolution)));
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "V,R,method,component,interfacial,elastic,total\n");
    for (const SweepRow& r : rows)
        std::fprintf(f, "%.17g,%.17g,%s,%s,%.17g,%.17g,%.17g\n", r.V, r.R, r.method.c_str(),
                     r.component.c_str(), r.interfacial, r.elastic, r.total);
    std::fclose(f);
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<SweepRow> rows;
    char line[512];
    bool header = true;
    while (std::fgets(line, sizeof line, f)) {
        if (header) {
            header = false;
            if (std::string(line).rfind("V,R,method,component", 0) != 0) {
                std::fclose(f);
                throw std::runtime_error("sweep CSV: bad header in " + path);
            }
            continue;
        }
        SweepRow r;
        char method[64] = {}, component[64] = {};
        int got = std::sscanf(line, "%lg,%lg,%63[^,],%63[^,],%lg,%lg,%lg", &r.V, &r.R, method,
                              component, &r.interfacial, &r.elastic, &r.total);
        if (got != 7) {
            std::fclose(f);
            throw std::runtime_error("sweep CSV: malformed row in " + path);
        }
        r.method = method;
        r.component = component;
        rows.push_back(r);
    }
    std::fclose(f);
    return rows;
}

FitResult fit_exponent(const std::vector<SweepRow>& rows, const std::string& component,
                       double v_min, double v_max) {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& r : rows) {
        if (r.component != component || r.V < v_min || r.V > v_max) continue;
        if (r.total <= 0.0) throw std::invalid_argument("fit_exponent: nonpositive energy");
        pts.emplace_back(std::log(r.V), std::log(r.total));
    }
    if (pts.size() < 4) throw std::invalid_argument("fit_exponent: fewer than 4 points in window");

    double n = double(pts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;

    FitResult fit;
    fit.component = component;
    fit.v_min = v_min;
    fit.v_max = v_max;
    fit.slope = cxy / vx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
    return fit;
}

}  // namespace corner
