#include "corner/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corner {

StripeSlice stripe_slice(double y1, double w, double h) {
    double sigma = w / (18.0 * h);
    double s = sigma * y1;        // side-stripe halfwidth
    double m = w / 6.0 - 2.0 * s;  // middle-stripe halfwidth

    StripeSlice sl;
    sl.edge = {0.0,
               w / 6.0 - s,  w / 6.0 + s,
               w / 2.0 - m,  w / 2.0 + m,
               5.0 * w / 6.0 - s, 5.0 * w / 6.0 + s,
               w};
    sl.edge_dy1 = {0.0, -sigma, sigma, 2.0 * sigma, -2.0 * sigma, -sigma, sigma, 0.0};
    return sl;
}

int base_cell_variant(double y1, double y2, double w, double h) {
    if (y1 < 0.0 || y1 > h || y2 < 0.0 || y2 > w)
        throw std::invalid_argument("base_cell_variant: coordinates outside the cell");
    double r = y2 / w, q = y1 / (18.0 * h);
    bool minority = std::abs(r - 1.0 / 6.0) <= q ||
                    std::abs(r - 5.0 / 6.0) <= q ||
                    std::abs(r - 0.5) <= 1.0 / 6.0 - 2.0 * q;
    return minority ? 1 : 2;
}

std::pair<double, double> slice_fraction(double y1, double w, double h) {
    if (y1 < 0.0 || y1 > h) throw std::invalid_argument("slice_fraction: y1 outside [0,h]");
    StripeSlice sl = stripe_slice(y1, w, h);
    double minority = 0.0;
    for (int k = 1; k < 7; k += 2) minority += sl.edge[k + 1] - sl.edge[k];
    return {minority / w, (w - minority) / w};
}

BranchingSchedule build_schedule(double R) {
    if (!(R > 1.0)) throw std::invalid_argument("build_schedule requires R > 1");

    BranchingSchedule s;
    s.R = R;

    int k = std::max(1, static_cast<int>(std::floor(std::cbrt(R))));
    while (double(k) * double(k) * double(k) < R * (1.0 - 1e-12)) ++k;
    s.K_side = k;
    s.w = R / double(k);

    // Solve the coupled (C1, M) system: C1(M) fills the depth, M is the
    // first generation with h_M <= w_M.
    const int max_gen = 60;
    double sum32 = 0.0;
    double wi = s.w;
    bool accepted = false;
    for (int M = 0; M <= max_gen; ++M, wi /= 3.0) {
        sum32 += wi * std::sqrt(wi);
        double C1 = (R - 1.0) / sum32;
        bool stop_here = C1 * std::sqrt(wi) <= 1.0;
        bool prev_runs = M == 0 || C1 * std::sqrt(3.0 * wi) > 1.0;
        if (stop_here && prev_runs) {
            s.M = M;
            s.C1 = C1;
            accepted = true;
            break;
        }
    }
    if (!accepted) {
        s.M = 0;
        s.C1 = (R - 1.0) / (s.w * std::sqrt(s.w));
        s.fallback = true;
    }

    s.widths.resize(s.M + 1);
    s.heights.resize(s.M + 1);
    s.y1_edges.resize(s.M + 2);
    s.y1_edges[0] = -R;
    double w_cur = s.w;
    for (int i = 0; i <= s.M; ++i, w_cur /= 3.0) {
        s.widths[i] = w_cur;
        s.heights[i] = s.C1 * w_cur * std::sqrt(w_cur);
        s.y1_edges[i + 1] = s.y1_edges[i] + s.heights[i];
    }
    return s;
}

namespace {

// Minority intervals of the slice, dropping empty ones.
std::vector<std::pair<double, double>> minority_intervals(double y1, double w, double h,
                                                          double offset) {
    StripeSlice sl = stripe_slice(y1, w, h);
    std::vector<std::pair<double, double>> iv;
    for (int k = 1; k < 7; k += 2)
        if (sl.edge[k + 1] > sl.edge[k]) iv.emplace_back(offset + sl.edge[k], offset + sl.edge[k + 1]);
    return iv;
}

double interval_mismatch(const std::vector<std::pair<double, double>>& a,
                         const std::vector<std::pair<double, double>>& b, double lo,
                         double hi) {
    std::vector<double> cuts = {lo, hi};
    for (auto& p : a) {
        cuts.push_back(p.first);
        cuts.push_back(p.second);
    }
    for (auto& p : b) {
        cuts.push_back(p.first);
        cuts.push_back(p.second);
    }
    std::sort(cuts.begin(), cuts.end());
    auto inside = [](const std::vector<std::pair<double, double>>& iv, double x) {
        for (auto& p : iv)
            if (x >= p.first && x <= p.second) return true;
        return false;
    };
    double mismatch = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (mid < lo || mid > hi) continue;
        if (inside(a, mid) != inside(b, mid)) mismatch += cuts[i + 1] - cuts[i];
    }
    return mismatch;
}

}  // namespace

double trace_mismatch(const BranchingSchedule& s, double child_shift) {
    double worst = 0.0;
    for (int i = 0; i < s.M; ++i) {
        double w = s.widths[i], h = s.heights[i];
        double wc = s.widths[i + 1], hc = s.heights[i + 1];
        auto parent_top = minority_intervals(h, w, h, 0.0);
        std::vector<std::pair<double, double>> children_bottom;
        for (int child = 0; child < 3; ++child) {
            auto iv = minority_intervals(0.0, wc, hc, child * wc + child_shift);
            children_bottom.insert(children_bottom.end(), iv.begin(), iv.end());
        }
        worst = std::max(worst, interval_mismatch(parent_top, children_bottom, 0.0, w));
    }
    return worst;
}

BranchingLayout make_box_layout(double R) {
    BranchingLayout l;
    l.frame = build_frame(twin_normal(3, 2));
    l.schedule = build_schedule(R);
    l.placement.R = R;
    l.placement.t = 0.0;
    l.placement.V = std::numeric_limits<double>::quiet_NaN();
    l.placement.z_R = Vec3{};
    return l;
}

BranchingLayout make_layout(const CornerDomain& dom, double V, bool clip) {
    auto n = find_habit_normal(dom);
    if (!n)
        throw std::runtime_error(
            "degenerate corner: no habit plane cuts this corner (as for the coordinate "
            "corner), branching construction unavailable");
    BranchingLayout l;
    l.frame = build_frame(*n);
    l.placement = place_slab(dom, l.frame, V);
    l.schedule = build_schedule(l.placement.R);
    l.domain = dom;
    l.clip = clip;
    return l;
}

bool locate_cell(const BranchingLayout& layout, const Vec3& y, CellRef& out) {
    const BranchingSchedule& s = layout.schedule;
    double R = s.R;
    if (y.x >= -1.0 || y.x < -R || y.y < 0.0 || y.y > R || y.z < 0.0 || y.z > R)
        return false;

    const auto& edges = s.y1_edges;
    int gen = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), y.x) -
                               edges.begin()) - 1;
    gen = std::clamp(gen, 0, s.M);

    out.gen = gen;
    out.w = s.widths[gen];
    out.h = s.heights[gen];
    out.y1_loc = std::clamp(y.x - edges[gen], 0.0, out.h);

    double cell = std::floor(y.y / out.w);
    cell = std::clamp(cell, 0.0, std::floor((R - 1e-12 * R) / out.w));
    out.y2_loc = std::clamp(y.y - cell * out.w, 0.0, out.w);
    return true;
}

PhasePoint chi_at(const BranchingLayout& layout, const Vec3& x) {
    PhasePoint p;
    if (layout.clip && layout.domain) {
        if (!layout.domain->contains(x)) return p;
        if (dot(x - layout.domain->origin, layout.frame.n) > layout.placement.t) return p;
    }

    Vec3 y = layout.to_chart(x);
    double R = layout.schedule.R;
    if (y.x > 0.0 || y.x < -R || y.y < 0.0 || y.y > R || y.z < 0.0 || y.z > R) return p;

    int pattern;
    if (y.x >= -1.0) {
        pattern = 1;  // boundary layer: minority variant everywhere
    } else {
        CellRef cell;
        if (!locate_cell(layout, y, cell)) return p;
        pattern = base_cell_variant(cell.y1_loc, cell.y2_loc, cell.w, cell.h);
    }

    p.pattern = pattern;
    int variant = pattern == 1 ? layout.frame.grads.minority : layout.frame.grads.majority;
    (variant == 1 ? p.chi1 : variant == 2 ? p.chi2 : p.chi3) = 1;
    return p;
}

}  // namespace corner
