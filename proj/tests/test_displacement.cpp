#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "corner/displacement.hpp"

using namespace corner;

namespace {

struct Rand {
    std::uint64_t s;
    explicit Rand(std::uint64_t seed) : s(seed) {}
    double unit() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return double(s >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

// distance from a chart point to the nearest field discontinuity (stripe
// interfaces, cell faces, the layer seams), for sampling smooth regions
double interface_distance(const BranchingLayout& layout, const Vec3& y) {
    const BranchingSchedule& s = layout.schedule;
    double d = std::min({std::abs(y.x), std::abs(y.x + 1.0), std::abs(y.x + s.R)});
    if (y.x >= -1.0) {
        // layer: tau breakpoints of the last-generation top slice
        double wM = s.widths[s.M];
        double y2 = y.y - std::floor(y.y / wM) * wM;
        StripeSlice top = stripe_slice(s.heights[s.M], wM, s.heights[s.M]);
        for (double e : top.edge) d = std::min(d, std::abs(y2 - e));
        return d;
    }
    CellRef cell;
    if (!locate_cell(layout, y, cell)) return d;
    d = std::min({d, cell.y1_loc, cell.h - cell.y1_loc});
    for (int i = 0; i <= cell.gen; ++i) d = std::min(d, std::abs(y.x - s.y1_edges[i + 1]));
    StripeSlice sl = stripe_slice(cell.y1_loc, cell.w, cell.h);
    for (double e : sl.edge) d = std::min(d, std::abs(cell.y2_loc - e));
    return d;
}

BranchingLayout test_layout(double V = 500.0) {
    CornerDomain dom = validate_corner({1, 0, 1}, {0, 0, 1}, {0, -1, 0});
    return make_layout(dom, V);
}

}  // namespace

TEST_CASE("cell field constants") {
    HabitFrame f = build_frame(twin_normal(3, 2));
    CellField cf = cell_field_constants(f);

    CHECK(std::abs(cf.c_minority - 2.0 * std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(cf.c_majority + std::sqrt(3.0)) < 1e-12);
    CHECK(norm(cf.slope_minority - twin_normal(1, 2) * (2.0 * std::sqrt(3.0))) < 1e-12);
    CHECK(norm(cf.slope_majority + twin_normal(1, 2) * std::sqrt(3.0)) < 1e-12);

    // zero slice mean, and the transverse directions are strain free
    CHECK(norm(cf.slope_minority * (1.0 / 3.0) + cf.slope_majority * (2.0 / 3.0)) < 1e-12);
    CHECK(norm((f.grads.D1 - f.grads.DM) * f.b3) < 1e-12);
    CHECK(norm((f.grads.D2 - f.grads.DM) * f.b1) < 1e-12);
}

TEST_CASE("profile values on the bottom slice") {
    HabitFrame f = build_frame(twin_normal(3, 2));
    CellField cf = cell_field_constants(f);
    double w = 3.0, h = 7.0;
    StripeSlice bottom = stripe_slice(0.0, w, h);

    CHECK(std::abs(u_profile(bottom, 0.0, cf.c_minority, cf.c_majority)) < 1e-14);
    CHECK(std::abs(u_profile(bottom, w, cf.c_minority, cf.c_majority)) < 1e-13);
    // integrate c = -sqrt(3) over [0, w/3]
    CHECK(u_profile(bottom, w / 3.0, cf.c_minority, cf.c_majority) ==
          doctest::Approx(-std::sqrt(3.0) / 3.0 * w).epsilon(1e-13));
    // -sqrt(3) w/3 + 2 sqrt(3) w/6 = 0
    CHECK(std::abs(u_profile(bottom, w / 2.0, cf.c_minority, cf.c_majority)) < 1e-13);
}

TEST_CASE("u_micro vanishes on the cell walls") {
    BranchingLayout layout = test_layout();
    const BranchingSchedule& s = layout.schedule;
    Rand rnd(41);
    for (int trial = 0; trial < 500; ++trial) {
        int gen = std::min(int(rnd.unit() * (s.M + 1)), s.M);
        double w = s.widths[gen];
        int cells = int(std::floor(s.R / w));
        double wall = w * double(1 + int(rnd.unit() * (cells - 1)));
        double y1 = s.y1_edges[gen] + rnd.unit() * s.heights[gen];
        Vec3 y{y1, wall, rnd.unit() * s.R};
        Vec3 u = u_micro_at(layout, layout.from_chart(y));
        CHECK(norm(u) < 1e-12 * std::max(1.0, w));
    }
    CHECK_THROWS_AS(u_micro_at(layout, layout.from_chart({0.5, 1.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("u_micro named values in a generation-0 cell") {
    BranchingLayout layout = test_layout();
    const BranchingSchedule& s = layout.schedule;
    double w = s.w;
    Vec3 base{-s.R, 0.0, 0.5 * s.R};  // generation-0 cell bottom

    Vec3 u_third = u_micro_at(layout, layout.from_chart(base + Vec3{1e-9, w / 3.0, 0}));
    Vec3 expect = twin_normal(1, 2) * (-std::sqrt(3.0) / 3.0 * w);
    CHECK(norm(u_third - expect) < 1e-7 * w);

    Vec3 u_half = u_micro_at(layout, layout.from_chart(base + Vec3{1e-9, w / 2.0, 0}));
    CHECK(norm(u_half) < 1e-7 * w);
}

TEST_CASE("u_total is continuous across every face type") {
    BranchingLayout layout = test_layout();
    const BranchingSchedule& s = layout.schedule;
    const double R = s.R;
    const double eps = 1e-13 * R;
    Rand rnd(43);

    auto check_jump = [&](const Vec3& y_face, const Vec3& normal_dir) {
        Vec3 y_plus = y_face + normal_dir * eps;
        Vec3 y_minus = y_face - normal_dir * eps;
        Vec3 up = u_total_at(layout, layout.from_chart(y_plus)).u;
        Vec3 um = u_total_at(layout, layout.from_chart(y_minus)).u;
        CHECK(norm(up - um) < 1e-10);
    };

    for (int trial = 0; trial < 250; ++trial) {
        double y2 = rnd.range(0.0, R), y3 = rnd.range(0.0, R);
        // habit plane and layer seam
        check_jump({0.0, y2, y3}, {1, 0, 0});
        check_jump({-1.0, y2, y3}, {1, 0, 0});
        // generation interface
        int gen = std::min(1 + int(rnd.unit() * s.M), s.M);
        check_jump({s.y1_edges[gen], y2, y3}, {1, 0, 0});
        // cell wall of a random generation
        double w = s.widths[std::min(int(rnd.unit() * (s.M + 1)), s.M)];
        double wall = w * double(1 + int(rnd.unit() * (int(std::floor(R / w)) - 1)));
        double y1 = rnd.range(-R, -1.0);
        check_jump({y1, wall, y3}, {0, 1, 0});
    }
}

TEST_CASE("macroscopic part vanishes on the habit plane and is rank one below") {
    BranchingLayout layout = test_layout();
    const Mat3& DM = layout.frame.grads.DM;
    Rand rnd(47);
    for (int i = 0; i < 1000; ++i) {
        Vec3 y{0.0, rnd.range(0.0, layout.schedule.R), rnd.range(0.0, layout.schedule.R)};
        Vec3 x = layout.from_chart(y);
        CHECK(norm(DM * (x - layout.placement.z_R)) < 1e-10);
    }
    // a point at depth delta below the plane picks up -2 delta b23
    double delta = 0.37;
    Vec3 x = layout.placement.z_R - layout.frame.n * delta;
    Vec3 macro = DM * (x - layout.placement.z_R);
    CHECK(norm(macro - twin_normal(2, 3) * (-2.0 * delta)) < 1e-12);
}

TEST_CASE("analytic gradient matches central finite differences") {
    BranchingLayout layout = test_layout();
    const BranchingSchedule& s = layout.schedule;
    Rand rnd(53);
    int checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
        Vec3 y{rnd.range(-s.R, 0.0), rnd.range(0.0, s.R), rnd.range(0.0, s.R)};
        int gen = std::min(int(std::upper_bound(s.y1_edges.begin(), s.y1_edges.end(), y.x) -
                               s.y1_edges.begin() - 1),
                           s.M);
        double w_local = y.x >= -1.0 ? s.widths[s.M] : s.widths[std::max(gen, 0)];
        double step = 1e-6 * w_local;
        if (interface_distance(layout, y) < 64.0 * step) continue;

        Vec3 x = layout.from_chart(y);
        DisplacementSample smp = u_total_at(layout, x);
        Mat3 fd;
        for (int j = 0; j < 3; ++j) {
            Vec3 dx{};
            dx[j] = step;
            Vec3 up = u_total_at(layout, x + dx).u;
            Vec3 um = u_total_at(layout, x - dx).u;
            for (int i = 0; i < 3; ++i) fd(i, j) = (up[i] - um[i]) / (2.0 * step);
        }
        double rel = frobenius(fd - smp.grad) / std::max(frobenius(smp.grad), 1e-12);
        worst = std::max(worst, rel);
        ++checked;
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("tilt derivative is bounded by w/h with a layout-independent constant") {
    // |du/dy1| <= (1/sqrt(3)) w/h exactly, over all generations and depths
    double measured = 0.0;
    for (double R : {8.0, 27.0, 512.0}) {
        BranchingLayout layout = make_box_layout(R);
        const BranchingSchedule& s = layout.schedule;
        CellField cf = cell_field_constants(layout.frame);
        Rand rnd(59);
        for (int gen = 0; gen <= s.M; ++gen) {
            double w = s.widths[gen], h = s.heights[gen];
            for (int trial = 0; trial < 2000; ++trial) {
                StripeSlice sl = stripe_slice(rnd.unit() * h, w, h);
                double du1 = du_profile_dy1(sl, rnd.unit() * w, cf.c_minority, cf.c_majority);
                measured = std::max(measured, std::abs(du1) * h / w);
            }
        }
    }
    CHECK(measured <= 1.0 / std::sqrt(3.0) + 1e-12);
    CHECK(measured > 0.5);  // the bound is attained up to sampling
}

TEST_CASE("layer gradient is controlled by the trace and its slope") {
    BranchingLayout layout = test_layout();
    const BranchingSchedule& s = layout.schedule;
    Rand rnd(61);
    double sup_grad = 0.0, sup_tau = 0.0, sup_dtau = 0.0;
    for (int i = 0; i < 3000; ++i) {
        Vec3 y{rnd.range(-1.0, 0.0), rnd.range(0.0, s.R), rnd.range(0.0, s.R)};
        DisplacementSample smp = u_total_at(layout, layout.from_chart(y));
        sup_grad = std::max(sup_grad, frobenius(smp.grad));

        Vec3 y_trace{-1.0 + 1e-9, y.y, y.z};
        DisplacementSample trace = u_total_at(layout, layout.from_chart(y_trace));
        sup_tau = std::max(sup_tau, norm(trace.u));
        sup_dtau = std::max(sup_dtau, frobenius(trace.grad));
    }
    CHECK(sup_grad <= 2.0 * (sup_tau + sup_dtau));
    CHECK(sup_tau < 10.0);  // w_M ~ 1 keeps the trace order one
}

TEST_CASE("displacement sample outside the slab is zero") {
    BranchingLayout layout = test_layout();
    DisplacementSample smp =
        u_total_at(layout, layout.from_chart({1.0, layout.schedule.R / 2, 1.0}));
    CHECK(norm(smp.u) == 0.0);
    CHECK(frobenius(smp.grad) == 0.0);
}
