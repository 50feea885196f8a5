#include "corner/displacement.hpp"

#include <cmath>

namespace corner {

CellField cell_field_constants(const HabitFrame& frame) {
    const ConstructionGradients& g = frame.grads;
    CellField f;
    f.slope_minority = (g.D1 - g.DM) * frame.b2;
    f.slope_majority = (g.D2 - g.DM) * frame.b2;
    f.c_minority = dot(f.slope_minority, g.twin_b_ij);
    f.c_majority = dot(f.slope_majority, g.twin_b_ij);
    return f;
}

double u_profile(const StripeSlice& sl, double y2, double c_min, double c_maj) {
    double acc = 0.0;
    for (int k = 0; k < 7; ++k) {
        double c = (k % 2 == 1) ? c_min : c_maj;
        if (y2 <= sl.edge[k + 1]) {
            acc += c * (y2 - sl.edge[k]);
            return acc;
        }
        acc += c * (sl.edge[k + 1] - sl.edge[k]);
    }
    return acc;
}

double du_profile_dy1(const StripeSlice& sl, double y2, double c_min, double c_maj) {
    // Leibniz: only breakpoints strictly below y2 contribute, each with the
    // jump of c across it times the breakpoint velocity.
    double acc = 0.0;
    for (int k = 1; k < 7; ++k) {
        if (sl.edge[k] >= y2) break;
        double c_before = (k - 1) % 2 == 1 ? c_min : c_maj;
        double c_after = k % 2 == 1 ? c_min : c_maj;
        acc += sl.edge_dy1[k] * (c_before - c_after);
    }
    return acc;
}

double du_profile_dy2(const StripeSlice& sl, double y2, double c_min, double c_maj) {
    for (int k = 0; k < 7; ++k)
        if (y2 <= sl.edge[k + 1]) return (k % 2 == 1) ? c_min : c_maj;
    return c_maj;
}

namespace {

struct InteriorEval {
    Vec3 u;
    double du1 = 0.0, du2 = 0.0;  // profile derivatives
};

InteriorEval eval_micro(const BranchingLayout& layout, const CellRef& cell) {
    CellField f = cell_field_constants(layout.frame);
    StripeSlice sl = stripe_slice(cell.y1_loc, cell.w, cell.h);
    InteriorEval e;
    e.u = layout.frame.grads.twin_b_ij *
          u_profile(sl, cell.y2_loc, f.c_minority, f.c_majority);
    e.du1 = du_profile_dy1(sl, cell.y2_loc, f.c_minority, f.c_majority);
    e.du2 = du_profile_dy2(sl, cell.y2_loc, f.c_minority, f.c_majority);
    return e;
}

CellRef locate_or_throw(const BranchingLayout& layout, const Vec3& x) {
    CellRef cell;
    if (!locate_cell(layout, layout.to_chart(x), cell))
        throw std::invalid_argument("point is not in the interior cell region");
    return cell;
}

}  // namespace

Vec3 u_micro_at(const BranchingLayout& layout, const Vec3& x) {
    return eval_micro(layout, locate_or_throw(layout, x)).u;
}

Mat3 grad_u_micro_at(const BranchingLayout& layout, const Vec3& x) {
    CellRef cell = locate_or_throw(layout, x);
    InteriorEval e = eval_micro(layout, cell);
    const Vec3 bij = layout.frame.grads.twin_b_ij;
    return outer(bij * e.du1, layout.frame.dual.row(0)) +
           outer(bij * e.du2, layout.frame.dual.row(1));
}

DisplacementSample u_total_at(const BranchingLayout& layout, const Vec3& x) {
    DisplacementSample smp;
    if (layout.clip && layout.domain) {
        if (!layout.domain->contains(x)) return smp;
        if (dot(x - layout.domain->origin, layout.frame.n) > layout.placement.t) return smp;
    }

    Vec3 y = layout.to_chart(x);
    const double R = layout.schedule.R;
    if (y.x > 0.0 || y.x < -R || y.y < 0.0 || y.y > R || y.z < 0.0 || y.z > R) return smp;

    const Mat3& DM = layout.frame.grads.DM;

    if (y.x >= -1.0) {
        // boundary layer: u = (-y1) tau(y2), tau = interior trace at y1 = -1
        const BranchingSchedule& s = layout.schedule;
        double wM = s.widths[s.M], hM = s.heights[s.M];
        double cellidx = std::clamp(std::floor(y.y / wM), 0.0,
                                    std::floor((R - 1e-12 * R) / wM));
        double y2_loc = std::clamp(y.y - cellidx * wM, 0.0, wM);

        CellField f = cell_field_constants(layout.frame);
        StripeSlice top = stripe_slice(hM, wM, hM);
        const Vec3 bij = layout.frame.grads.twin_b_ij;

        Vec3 tau = bij * u_profile(top, y2_loc, f.c_minority, f.c_majority) +
                   DM * (layout.frame.b1 * -1.0);
        Vec3 dtau = bij * du_profile_dy2(top, y2_loc, f.c_minority, f.c_majority);

        smp.u = tau * (-y.x);
        smp.grad = outer(-1.0 * tau, layout.frame.dual.row(0)) +
                   outer((-y.x) * dtau, layout.frame.dual.row(1));
        return smp;
    }

    CellRef cell;
    if (!locate_cell(layout, y, cell)) return smp;
    InteriorEval e = eval_micro(layout, cell);
    const Vec3 bij = layout.frame.grads.twin_b_ij;

    smp.u = e.u + DM * (x - layout.placement.z_R);
    smp.grad = outer(bij * e.du1, layout.frame.dual.row(0)) +
               outer(bij * e.du2, layout.frame.dual.row(1)) + DM;
    return smp;
}

}  // namespace corner
